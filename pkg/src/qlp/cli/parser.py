"""Tokenizer and recursive-descent parser for the command language.

Statements are separated by ``;`` or newlines, ``#`` starts a comment.

    field GF(p)(v1, ..., vk)
    let name = value
    aniso F | defect F over E | norm F | pindep {e, ...} | pbasis {e, ...}
    minimal F | tower F | pisp F [--max-gens N] [--extra e, ...]
    fsp-min F | fsp-pfister <<e, ...>> | fsp-neighbor n s d | verify-table1 p
    represents F e | isometric F G | subform S F | check N
    value                      (printed back)

Values are field elements, forms and extensions:

    element   e + e, e - e, e * e, e / e, -e, e ^ k    (k an integer)
    form      <e, ...>, <<e, ...>>, F (+) G, F (*) G, e * F
    extension extend e^(1/p^n), ...     or    F(e^(1/q), ...)

Precedence: ``^`` > unary ``-`` > ``* /`` > ``+ -`` > ``(*)`` > ``(+)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, QLPError, ResourceError, UsageError
from ..exactfield import FieldDescriptor, RatFunc
from ..extension import ExtensionSpec
from ..pform import QuasiPForm, orthogonal_sum, quasi_pfister, scale, tensor

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<option>--[A-Za-z][A-Za-z0-9-]*)
  | (?P<number>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\(\+\)|\(\*\)|<<|>>|[-+*/^(),;<>{}=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, op, option, sep, end
    text: str
    line: int
    column: int
    offset: int

    def __str__(self):
        return "end of input" if self.kind == "end" else repr(self.text)


def tokenize(source: str):
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "newline":
            tokens.append(Token("sep", "\n", line, col, pos))
            line += 1
            line_start = m.end()
        elif kind == "op" and text == ";":
            tokens.append(Token("sep", ";", line, col, pos))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, col, pos))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1, pos))
    return tokens


class PfisterForm(QuasiPForm):
    """A quasi-Pfister form that remembers its generators."""

    __slots__ = ("generators",)

    def __init__(self, field: FieldDescriptor, generators):
        generators = tuple(generators)
        super().__init__(field, quasi_pfister(generators, field).coefficients)
        self.generators = generators


@dataclass(frozen=True)
class Statement:
    command: str
    args: tuple
    options: dict
    token: Token


COMMANDS = {
    "aniso", "defect", "norm", "pindep", "pbasis", "minimal", "tower", "pisp",
    "fsp-min", "fsp-pfister", "fsp-neighbor", "verify-table1", "represents",
    "isometric", "subform", "check", "field", "let", "show",
}


class Parser:
    """Parses and evaluates values against a field and a binding table."""

    def __init__(self, tokens, field: FieldDescriptor | None = None, bindings=None,
                 max_degree: int | None = None):
        self.tokens = tokens
        self.max_degree = max_degree
        self.i = 0
        self.field = field
        self.bindings = bindings if bindings is not None else {}

    # token helpers ----------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def wrap(self, exc, tok):
        """Attach the source position; resource trips keep their class (exit code 3)."""
        if isinstance(exc, ResourceError):
            return ResourceError(f"{exc} (line {tok.line}, column {tok.column})")
        return self.error(str(exc), tok)

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "end":
            self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {self.tok}")
        return self.advance()

    def expect_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "number":
            raise self.error(f"expected an integer, found {self.tok}")
        return sign * int(self.advance().text)

    def need_field(self, tok=None) -> FieldDescriptor:
        if self.field is None:
            raise self.error("no field declared; start with 'field GF(p)(x, ...)'", tok)
        return self.field

    # statements ------------------------------------------------------------

    def statements(self):
        out = []
        while self.tok.kind != "end":
            if self.tok.kind == "sep":
                self.advance()
                continue
            out.append(self.statement())
            if self.tok.kind not in ("sep", "end"):
                raise self.error(f"unexpected {self.tok} after statement")
        return out

    def command_word(self):
        """An identifier possibly joined to following words by '-' with no spaces."""
        t = self.tok
        if t.kind != "ident":
            return None
        word, j = t.text, self.i + 1
        end = t.offset + len(t.text)
        while (
            self.tokens[j].text == "-" and self.tokens[j].offset == end
            and self.tokens[j + 1].kind in ("ident", "number")
            and self.tokens[j + 1].offset == end + 1
        ):
            nxt = self.tokens[j + 1]
            word += "-" + nxt.text
            end = nxt.offset + len(nxt.text)
            j += 2
        if word in COMMANDS and word not in self.bindings and (
            self.field is None or word not in self.field.variables
        ):
            return word, j
        return None

    def statement(self) -> Statement:
        start = self.tok
        cw = self.command_word()
        if cw is None:
            return Statement("show", (self.value(),), {}, start)
        cmd, j = cw
        self.i = j
        if cmd == "field":
            self.field = self.field_decl()
            self.bindings.clear()
            return Statement("field", (self.field,), {}, start)
        if cmd == "let":
            name = self.tok
            if name.kind != "ident":
                raise self.error("expected a name after 'let'")
            if self.field is not None and name.text in self.field.variables:
                raise self.error(f"{name.text!r} is a field variable and cannot be rebound", name)
            self.advance()
            self.expect("=")
            value = self.value()
            self.bindings[name.text] = value
            return Statement("let", (name.text, value), {}, start)
        if cmd == "show":
            return Statement("show", (self.value(),), {}, start)
        if cmd == "defect":
            form = self.form_value()
            ext = ExtensionSpec(self.need_field(start))
            if self.at("over"):
                self.advance()
                ext = self.extension_value()
            return Statement(cmd, (form, ext), {}, start)
        if cmd in ("aniso", "norm", "minimal", "tower", "fsp-min"):
            return Statement(cmd, (self.form_value(),), {}, start)
        if cmd in ("pindep", "pbasis"):
            return Statement(cmd, (self.element_set(),), {}, start)
        if cmd == "pisp":
            form = self.form_value()
            options = {}
            while self.tok.kind == "option":
                opt = self.advance()
                if opt.text == "--max-gens":
                    options["max_gens"] = self.expect_int()
                elif opt.text == "--extra":
                    options["extra"] = self.element_list()
                else:
                    raise self.error(f"unknown option {opt.text}", opt)
            return Statement(cmd, (form,), options, start)
        if cmd == "fsp-pfister":
            if self.at("{"):
                gens = self.element_set()
            else:
                form = self.form_value()
                if not isinstance(form, PfisterForm):
                    raise self.error("fsp-pfister expects <<a1, ..., an>> or {a1, ..., an}", start)
                gens = form.generators
            return Statement(cmd, (tuple(gens),), {}, start)
        if cmd == "fsp-neighbor":
            field = self.need_field(start)
            if self.at("{"):
                gens = tuple(self.element_set())
            else:
                t = self.tok
                n = self.expect_int()
                if not 0 <= n <= field.nvars:
                    raise self.error(f"n = {n} exceeds the {field.nvars} field variables", t)
                gens = field.gens()[:n]
            s = self.expect_int()
            d = self.element()
            return Statement(cmd, (gens, s, d), {}, start)
        if cmd in ("verify-table1", "check"):
            return Statement(cmd, (self.expect_int(),), {}, start)
        if cmd == "represents":
            return Statement(cmd, (self.form_value(), self.element()), {}, start)
        if cmd in ("isometric", "subform"):
            return Statement(cmd, (self.form_value(), self.form_value()), {}, start)
        raise self.error(f"unknown command {cmd!r}", start)

    def field_decl(self) -> FieldDescriptor:
        t = self.tok
        if not (t.kind == "ident" and t.text == "GF"):
            raise self.error(f"expected GF(p)(...), found {t}")
        self.advance()
        self.expect("(")
        pt = self.tok
        p = self.expect_int()
        self.expect(")")
        names = []
        if self.at("("):
            self.advance()
            while not self.at(")"):
                if self.tok.kind != "ident":
                    raise self.error(f"expected a variable name, found {self.tok}")
                names.append(self.advance().text)
                if not self.at(")"):
                    self.expect(",")
            self.advance()
        max_degree = self.max_degree
        if max_degree is None and self.field is not None:
            max_degree = self.field.max_degree
        try:
            if max_degree is None:
                return FieldDescriptor(p, names)
            return FieldDescriptor(p, names, max_degree=max_degree)
        except UsageError as exc:
            raise self.error(str(exc), pt) from None

    # values ---------------------------------------------------------------------

    def value(self):
        """Full value expression: element, form or extension."""
        if self.at("extend"):
            return self.extend_literal()
        left = self.tensor_level()
        while self.at("(+)"):
            t = self.advance()
            right = self.tensor_level()
            left = self._form_op(orthogonal_sum, left, right, t)
        return left

    def tensor_level(self):
        left = self.additive()
        while self.at("(*)"):
            t = self.advance()
            right = self.additive()
            left = self._form_op(tensor, left, right, t)
        return left

    def _form_op(self, op, a, b, tok):
        if not (isinstance(a, QuasiPForm) and isinstance(b, QuasiPForm)):
            raise self.error(f"{tok.text} needs forms on both sides", tok)
        return op(a, b)

    def additive(self):
        left = self.multiplicative()
        while self.at("+") or self.at("-"):
            t = self.advance()
            right = self.multiplicative()
            if not (isinstance(left, RatFunc) and isinstance(right, RatFunc)):
                raise self.error(f"'{t.text}' applies to field elements; use (+) for forms", t)
            left = left + right if t.text == "+" else left - right
        return left

    def multiplicative(self):
        left = self.unary()
        while self.at("*") or self.at("/"):
            t = self.advance()
            right = self.unary()
            left = self._mul(left, right, t)
        return left

    def _mul(self, a, b, tok):
        try:
            if isinstance(a, RatFunc) and isinstance(b, RatFunc):
                return a * b if tok.text == "*" else a / b
            if tok.text == "*" and isinstance(a, RatFunc) and isinstance(b, QuasiPForm):
                return scale(a, b)
            if tok.text == "*" and isinstance(a, QuasiPForm) and isinstance(b, RatFunc):
                return scale(b, a)
        except QLPError as exc:
            raise self.wrap(exc, tok) from None
        raise self.error(f"cannot apply '{tok.text}' to these operands; use (*) for forms", tok)

    def unary(self):
        if self.at("-"):
            t = self.advance()
            v = self.unary()
            if not isinstance(v, RatFunc):
                raise self.error("unary '-' applies to field elements", t)
            return -v
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            t = self.advance()
            if self.at("(") and self.peek().kind == "number" and self.peek(2).text == "/":
                raise self.error("fractional exponents are only allowed inside 'extend'", t)
            if self.at("("):
                self.advance()
                k = self.expect_int()
                self.expect(")")
            else:
                k = self.expect_int()
            if not isinstance(base, RatFunc):
                raise self.error("'^' applies to field elements", t)
            try:
                return base ** k
            except QLPError as exc:
                raise self.wrap(exc, t) from None
        return base

    def atom(self):
        t = self.tok
        if t.kind == "number":
            self.advance()
            return RatFunc.constant(self.need_field(t), int(t.text))
        if t.kind == "ident":
            return self.identifier()
        if self.at("("):
            self.advance()
            v = self.value()
            self.expect(")")
            return v
        if self.at("<<"):
            self.advance()
            gens = self.element_list(closer=">>")
            self.expect(">>")
            try:
                return PfisterForm(self.need_field(t), gens)
            except UsageError as exc:
                raise self.error(str(exc), t) from None
        if self.at("<"):
            self.advance()
            coeffs = self.element_list(closer=">")
            self.expect(">")
            return QuasiPForm(self.need_field(t), coeffs)
        raise self.error(f"unexpected {t}")

    def identifier(self):
        t = self.advance()
        name = t.text
        field = self.field
        if field is not None and name in field.variables:
            return RatFunc.variable(field, name)
        if name in self.bindings:
            return self.bindings[name]
        if name == "F":
            # extension literal F(a^(1/q), ...) or the trivial extension F
            if self.at("("):
                return self.root_list(closer=")", opened=True)
            return ExtensionSpec(self.need_field(t))
        raise ParseError(f"unknown identifier {name!r}", t.line, t.column)

    def element(self) -> RatFunc:
        t = self.tok
        v = self.additive()
        if not isinstance(v, RatFunc):
            raise self.error("expected a field element", t)
        return v

    def element_list(self, closer=None):
        items = []
        if closer is not None and self.at(closer):
            return items
        items.append(self.element())
        while self.at(","):
            self.advance()
            items.append(self.element())
        return items

    def element_set(self):
        self.expect("{")
        items = self.element_list(closer="}")
        self.expect("}")
        return items

    def form_value(self) -> QuasiPForm:
        t = self.tok
        v = self.value()
        if not isinstance(v, QuasiPForm):
            raise self.error("expected a form", t)
        return v

    def extension_value(self) -> ExtensionSpec:
        t = self.tok
        v = self.value()
        if not isinstance(v, ExtensionSpec):
            raise self.error("expected an extension", t)
        return v

    # extensions --------------------------------------------------------------

    def extend_literal(self) -> ExtensionSpec:
        self.expect("extend")
        return self.root_list()

    def root_list(self, closer=None, opened=False):
        field = self.need_field()
        if opened:
            self.expect("(")
        pairs = []
        while True:
            if closer is not None and self.at(closer) and not pairs:
                break
            pairs.append(self.root())
            if not self.at(","):
                break
            self.advance()
        if closer is not None:
            self.expect(closer)
        return ExtensionSpec(field, pairs)

    def root(self):
        """base ^ (1/q) with q = p^n, n >= 1."""
        t = self.tok
        base = self.atom()
        if not isinstance(base, RatFunc):
            raise self.error("roots can only be taken of field elements", t)
        self.expect("^")
        self.expect("(")
        one = self.tok
        if self.expect_int() != 1:
            raise self.error("root exponents have the form 1/p^n", one)
        self.expect("/")
        qt = self.tok
        q = self.expect_int()
        if self.at("^"):
            self.advance()
            q = q ** self.expect_int()
        self.expect(")")
        p = self.field.p
        n = 0
        while q > 1 and q % p == 0:
            q //= p
            n += 1
        if q != 1 or n == 0:
            raise self.error(f"root exponent must be 1/{p}^n with n >= 1", qt)
        if base.is_zero():
            raise self.error("cannot adjoin a root of zero", t)
        return base, n


def parse_program(source: str, field: FieldDescriptor | None = None, bindings=None,
                  max_degree: int | None = None):
    """Parse ``source`` into evaluated statements; returns (statements, parser)."""
    parser = Parser(tokenize(source), field, bindings, max_degree)
    return parser.statements(), parser


def _single(source, field, want, what):
    parser = Parser(tokenize(source), field)
    t = parser.tok
    v = parser.value()
    if parser.tok.kind != "end":
        raise parser.error(f"unexpected {parser.tok} after {what}")
    if not isinstance(v, want):
        raise ParseError(f"expected {what}", t.line, t.column)
    return v


def parse_element(source: str, field: FieldDescriptor) -> RatFunc:
    return _single(source, field, RatFunc, "a field element")


def parse_form(source: str, field: FieldDescriptor) -> QuasiPForm:
    return _single(source, field, QuasiPForm, "a form")


def parse_extension(source: str, field: FieldDescriptor) -> ExtensionSpec:
    return _single(source, field, ExtensionSpec, "an extension")
