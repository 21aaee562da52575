"""Field descriptors for F = F_p(x_1, ..., x_m)."""

from __future__ import annotations

import re
from functools import cached_property

import flint

from ..errors import FieldMismatchError, UsageError

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

DEFAULT_MAX_DEGREE = 512
DEFAULT_MAX_PRIME = 31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldDescriptor:
    """The rational function field F_p(v_1, ..., v_m).

    Two descriptors are equal when they have the same characteristic and the
    same ordered variable names.  The degree cap is a resource guard and does
    not take part in equality.
    """

    def __init__(self, p: int, variables=(), *, max_degree: int = DEFAULT_MAX_DEGREE,
                 max_prime: int = DEFAULT_MAX_PRIME):
        if not isinstance(p, int) or not is_prime(p):
            raise UsageError(f"characteristic {p!r} is not a prime")
        if p > max_prime:
            raise UsageError(f"characteristic {p} exceeds the configured limit {max_prime}")
        variables = tuple(variables)
        for v in variables:
            if not isinstance(v, str) or not _IDENT.match(v):
                raise UsageError(f"invalid variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise UsageError(f"duplicate variable names in {variables}")
        self.p = p
        self.variables = variables
        self.max_degree = max_degree

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @cached_property
    def ctx(self):
        return flint.nmod_mpoly_ctx.get(self.variables, ordering="deglex", modulus=self.p)

    @cached_property
    def residues(self) -> tuple:
        """All residue exponent vectors in {0..p-1}^m, in graded-lex order (smallest first)."""
        import itertools

        vecs = itertools.product(range(self.p), repeat=self.nvars)
        return tuple(sorted(vecs, key=lambda e: (sum(e), e)))

    def with_max_degree(self, max_degree: int) -> "FieldDescriptor":
        return FieldDescriptor(self.p, self.variables, max_degree=max_degree, max_prime=self.p)

    def check(self, other: "FieldDescriptor") -> None:
        if other is not self and other != self:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")

    def __eq__(self, other):
        if not isinstance(other, FieldDescriptor):
            return NotImplemented
        return self.p == other.p and self.variables == other.variables

    def __hash__(self):
        return hash((self.p, self.variables))

    def __repr__(self):
        return f"FieldDescriptor({self.p}, {list(self.variables)!r})"

    def __str__(self):
        return f"GF({self.p})({','.join(self.variables)})"

    # convenience constructors ---------------------------------------------

    def gens(self):
        from .ratfunc import RatFunc

        return tuple(RatFunc.variable(self, v) for v in self.variables)

    def __call__(self, value):
        """Coerce an int, a variable name or an expression string into this field."""
        from .ratfunc import RatFunc

        if isinstance(value, RatFunc):
            self.check(value.field)
            return value
        if isinstance(value, int):
            return RatFunc.constant(self, value)
        if isinstance(value, str):
            from ..cli.parser import parse_element

            return parse_element(value, self)
        raise TypeError(f"cannot coerce {value!r} into {self}")
