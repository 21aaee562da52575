"""Sparse multivariate polynomials over the prime field F_p.

Storage and the heavy kernels (multiplication, exact division, GCD) are
delegated to FLINT's ``nmod_mpoly`` in graded-lexicographic order.  This module
adds the descriptor bookkeeping, the degree guard and the textual form used by
the CLI grammar.
"""

from __future__ import annotations

from ..errors import ArithmeticFailure, ResourceError, UsageError
from .field import FieldDescriptor


def guard(field: FieldDescriptor, raw):
    """Raise if ``raw`` exceeds the field's total-degree cap; return it otherwise."""
    if raw.total_degree() > field.max_degree:
        raise ResourceError(
            f"intermediate polynomial of total degree {raw.total_degree()} exceeds "
            f"the cap {field.max_degree}"
        )
    return raw


def format_monomial(variables, exps) -> str:
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_terms(variables, items) -> str:
    """Render ``(exponents, coefficient)`` pairs, leading term first."""
    out = []
    for exps, c in items:
        mono = format_monomial(variables, exps)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return "+".join(out) if out else "0"


class MultiPoly:
    """An element of F_p[x_1, ..., x_m].

    Immutable.  ``terms`` is a dict from exponent tuples to nonzero
    coefficients in ``range(1, p)``, iterated in descending graded-lex order.
    """

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldDescriptor, raw):
        self.field = field
        self.raw = raw

    # constructors -------------------------------------------------------------

    @classmethod
    def from_terms(cls, field: FieldDescriptor, terms) -> "MultiPoly":
        p = field.p
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(exps)
            if len(exps) != field.nvars or any(e < 0 for e in exps):
                raise UsageError(f"bad exponent vector {exps} for {field}")
            c %= p
            if c:
                clean[exps] = (clean.get(exps, 0) + c) % p
        return cls(field, guard(field, field.ctx.from_dict(clean)))

    @classmethod
    def constant(cls, field: FieldDescriptor, c: int) -> "MultiPoly":
        return cls(field, field.ctx.constant(c % field.p))

    @classmethod
    def zero(cls, field):
        return cls.constant(field, 0)

    @classmethod
    def one(cls, field):
        return cls.constant(field, 1)

    @classmethod
    def monomial(cls, field: FieldDescriptor, exps, coeff: int = 1) -> "MultiPoly":
        return cls.from_terms(field, {tuple(exps): coeff})

    @classmethod
    def variable(cls, field: FieldDescriptor, name: str) -> "MultiPoly":
        try:
            i = field.variables.index(name)
        except ValueError:
            raise UsageError(f"unknown variable {name!r} in {field}") from None
        exps = [0] * field.nvars
        exps[i] = 1
        return cls.monomial(field, exps)

    # inspection -----------------------------------------------------------------

    @property
    def terms(self) -> dict:
        return {m: int(c) for m, c in self.raw.terms()}

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def is_one(self) -> bool:
        return self.raw.is_one()

    def is_constant(self) -> bool:
        return self.raw.is_constant()

    def is_monomial(self) -> bool:
        """True for a single term c*x^e with c != 0."""
        return len(self.raw) == 1

    def total_degree(self) -> int:
        return self.raw.total_degree()

    def leading_coefficient(self) -> int:
        return int(self.raw.leading_coefficient()) if not self.is_zero() else 0

    def leading_monomial(self):
        return self.raw.monoms()[0]

    def __len__(self):
        return len(self.raw)

    # arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self.field.check(other.field)
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.field, self.raw + other.raw)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.field, self.raw - other.raw)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return MultiPoly(self.field, -self.raw)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.field, guard(self.field, self.raw * other.raw))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("polynomial exponents must be non-negative integers")
        if n and self.total_degree() * n > self.field.max_degree:
            raise ResourceError(
                f"power of total degree {self.total_degree() * n} exceeds the cap {self.field.max_degree}"
            )
        return MultiPoly(self.field, self.raw ** n)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises if the division leaves a remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ArithmeticFailure("polynomial division by zero")
        try:
            return MultiPoly(self.field, self.raw / other.raw)
        except Exception as exc:  # flint raises DomainError
            raise ArithmeticFailure(f"{other} does not divide {self}") from exc

    def gcd(self, other: "MultiPoly") -> "MultiPoly":
        other = self._coerce(other)
        return MultiPoly(self.field, self.raw.gcd(other.raw))

    def frobenius(self) -> "MultiPoly":
        """The p-th power, computed by scaling exponents (coefficients are fixed by Frobenius)."""
        p = self.field.p
        return MultiPoly(
            self.field,
            guard(self.field, self.field.ctx.from_dict(
                {tuple(p * e for e in m): c for m, c in self.raw.terms()})),
        )

    def monic(self) -> "MultiPoly":
        lc = self.leading_coefficient()
        if lc in (0, 1):
            return self
        return self * pow(lc, -1, self.field.p)

    # comparison -----------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.field, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.raw == other.raw

    def __hash__(self):
        return hash((self.field, tuple(self.raw.terms())))

    def __str__(self):
        return format_terms(self.field.variables, ((m, int(c)) for m, c in self.raw.terms()))

    def __repr__(self):
        return f"MultiPoly({self}, {self.field})"


def poly_arith(op_kind: str, a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Dispatch ``add``/``sub``/``mul`` on two polynomials over one field."""
    a.field.check(b.field)
    if op_kind == "add":
        return a + b
    if op_kind == "sub":
        return a - b
    if op_kind == "mul":
        return a * b
    raise UsageError(f"unknown polynomial operation {op_kind!r}")
