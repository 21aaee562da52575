"""Exact elements of F = F_p(x_1, ..., x_m) and their F^p-coordinates.

F has the F^p-basis {x^e : e in {0..p-1}^m}.  Writing a = f/g as
f*g^(p-1) / g^p and splitting the numerator by exponent residues gives

    a = sum_e  x^e * (q_e / g)^p

with q_e obtained from the residue-e part of f*g^(p-1) by dividing its
exponents by p (coefficients of F_p are fixed by Frobenius).  The elements
r_e = q_e/g are the coordinates used for every F^p-linear algebra question.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ArithmeticFailure, ResourceError, UsageError
from .field import FieldDescriptor
from .poly import MultiPoly, format_terms, guard


def _normalize(field, num, den):
    if den.is_zero():
        raise ArithmeticFailure("division by zero in F")
    if num.is_zero():
        return num, field.ctx.constant(1)
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    lc = int(den.leading_coefficient())
    if lc != 1:
        inv = pow(lc, -1, field.p)
        num = num * inv
        den = den * inv
    return num, den


class RatFunc:
    """A reduced fraction num/den with monic (graded-lex) denominator."""

    __slots__ = ("field", "num", "den", "_coords", "_hash")

    def __init__(self, field: FieldDescriptor, num, den=None, *, normalized=False):
        if isinstance(num, MultiPoly):
            field.check(num.field)
            num = num.raw
        if den is None:
            den = field.ctx.constant(1)
            normalized = True
        elif isinstance(den, MultiPoly):
            field.check(den.field)
            den = den.raw
        if not normalized:
            num, den = _normalize(field, num, den)
        self.field = field
        self.num = num
        self.den = den
        self._coords = None
        self._hash = None

    # constructors -------------------------------------------------------------

    @classmethod
    def constant(cls, field: FieldDescriptor, c: int) -> "RatFunc":
        return cls(field, field.ctx.constant(c % field.p))

    @classmethod
    def variable(cls, field: FieldDescriptor, name: str) -> "RatFunc":
        return cls(field, MultiPoly.variable(field, name))

    @classmethod
    def monomial(cls, field: FieldDescriptor, exps, coeff: int = 1) -> "RatFunc":
        """c * x^e where e may contain negative entries."""
        coeff %= field.p
        if not coeff:
            return cls.constant(field, 0)
        exps = tuple(exps)
        num = tuple(max(e, 0) for e in exps)
        den = tuple(max(-e, 0) for e in exps)
        ctx = field.ctx
        return cls(field, guard(field, ctx.from_dict({num: coeff})),
                   guard(field, ctx.from_dict({den: 1})), normalized=True)

    @classmethod
    def from_polys(cls, num: MultiPoly, den: MultiPoly | None = None) -> "RatFunc":
        return cls(num.field, num, den)

    # inspection -----------------------------------------------------------------

    @property
    def numerator(self) -> MultiPoly:
        return MultiPoly(self.field, self.num)

    @property
    def denominator(self) -> MultiPoly:
        return MultiPoly(self.field, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def as_monomial(self):
        """Return ``(unit, exponents)`` when self = unit * x^exponents, else None.

        Exponents may be negative.  Zero is not a monomial.
        """
        if len(self.num) != 1 or len(self.den) != 1:
            return None
        (en, c), = self.num.terms()
        (ed, _), = self.den.terms()
        return int(c), tuple(a - b for a, b in zip(en, ed))

    # arithmetic -----------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            self.field.check(other.field)
            return other
        if isinstance(other, int):
            return RatFunc.constant(self.field, other)
        if isinstance(other, MultiPoly):
            return RatFunc(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if self.den == other.den:
            return RatFunc(f, self.num + other.num, self.den)
        return RatFunc(
            f,
            guard(f, self.num * other.den + other.num * self.den),
            guard(f, self.den * other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if self.is_zero() or other.is_zero():
            return RatFunc.constant(f, 0)
        return RatFunc(f, guard(f, self.num * other.num), guard(f, self.den * other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ArithmeticFailure("inverse of zero in F")
        return RatFunc(self.field, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ArithmeticFailure("division by zero in F")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise UsageError("exponents in F must be integers")
        if n < 0:
            return self.inverse() ** (-n)
        f = self.field
        if n and max(self.num.total_degree(), self.den.total_degree()) * n > f.max_degree:
            raise ResourceError(f"power {n} of {self} exceeds the degree cap {f.max_degree}")
        return RatFunc(f, self.num ** n, self.den ** n, normalized=True)

    # equality -------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.constant(self.field, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.field != other.field:
            return False
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, tuple(self.num.terms()), tuple(self.den.terms())))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # text -----------------------------------------------------------------------

    def __str__(self):
        names = self.field.variables
        num = format_terms(names, ((m, int(c)) for m, c in self.num.terms()))
        if self.den.is_one():
            return num
        den = format_terms(names, ((m, int(c)) for m, c in self.den.terms()))
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({self}, {self.field})"


@dataclass(frozen=True)
class FpCoordinates:
    """element = sum over e of coords[e]**p * x**e; zero coordinates are omitted."""

    element: RatFunc
    coords: dict

    def reconstruct(self) -> RatFunc:
        field = self.element.field
        total = RatFunc.constant(field, 0)
        for e, r in self.coords.items():
            total = total + frobenius_power(r) * RatFunc.monomial(field, e)
        return total


def coordinate_column(a: RatFunc):
    """Polynomial coordinates of ``a`` over a common denominator.

    Returns ``(q, g)`` with ``q`` a dict residue -> raw nonzero polynomial and
    ``g`` the raw denominator, so that a = sum_e x^e (q[e]/g)^p.
    """
    field = a.field
    p = field.p
    h = guard(field, a.num * a.den ** (p - 1))
    parts: dict = {}
    for exps, c in h.terms():
        e = tuple(x % p for x in exps)
        parts.setdefault(e, {})[tuple(x // p for x in exps)] = int(c)
    ctx = field.ctx
    return {e: ctx.from_dict(t) for e, t in parts.items()}, a.den


def fp_coordinates(a: RatFunc) -> FpCoordinates:
    if a._coords is None:
        q, g = coordinate_column(a)
        field = a.field
        order = {e: i for i, e in enumerate(field.residues)}
        a._coords = {
            e: RatFunc(field, q[e], g) for e in sorted(q, key=order.__getitem__)
        }
    return FpCoordinates(a, dict(a._coords))


def frobenius_power(a: RatFunc) -> RatFunc:
    field = a.field
    return RatFunc(
        field,
        MultiPoly(field, a.num).frobenius().raw,
        MultiPoly(field, a.den).frobenius().raw,
        normalized=True,
    )


def frobenius_root(a: RatFunc) -> RatFunc | None:
    """The unique r with r^p = a, or None when a is not a p-th power."""
    coords = fp_coordinates(a).coords
    zero = (0,) * a.field.nvars
    if not coords:
        return RatFunc.constant(a.field, 0)
    if set(coords) != {zero}:
        return None
    return coords[zero]


def ratfunc_arith(op_kind: str, a: RatFunc, b: RatFunc) -> RatFunc:
    a.field.check(b.field)
    if op_kind == "add":
        return a + b
    if op_kind == "sub":
        return a - b
    if op_kind == "mul":
        return a * b
    if op_kind == "div":
        return a / b
    raise UsageError(f"unknown operation {op_kind!r}")
