"""Incremental F^p-linear spans of elements of F.

An element a is identified with its coordinate column (r_e(a))_e, where
a = sum_e r_e^p x^e.  F^p-linear relations among elements are exactly
F-linear relations among these columns, because Frobenius is an isomorphism
F -> F^p.  A kernel vector w therefore gives sum_j w_j^p a_j = 0 directly.
"""

from __future__ import annotations

from .field import FieldDescriptor
from .linalg import ColumnEchelon
from .ratfunc import RatFunc, coordinate_column


def coordinate_entries(a: RatFunc):
    """The cleared coordinate column of ``a`` in residue order, with its scale."""
    field = a.field
    q, g = coordinate_column(a)
    zero = field.ctx.constant(0)
    return [q.get(e, zero) for e in field.residues], g


class FpSpan:
    """A growing F^p-subspace of F, with greedy first-come basis selection."""

    def __init__(self, field: FieldDescriptor):
        self.field = field
        self._ech = ColumnEchelon(field, len(field.residues))
        self.basis = []
        self.basis_keys = []

    @property
    def rank(self) -> int:
        return self._ech.rank

    @property
    def full(self) -> bool:
        """True once the span is all of F (rank p^m)."""
        return self._ech.full

    def contains(self, a: RatFunc) -> bool:
        self.field.check(a.field)
        if a.is_zero():
            return True
        return self._ech.contains(coordinate_entries(a)[0])

    def add(self, a: RatFunc, key=None) -> bool:
        """Insert ``a``; return True if it enlarged the span."""
        self.field.check(a.field)
        if key is None:
            key = len(self._ech._columns)
        col, g = coordinate_entries(a)
        new = self._ech.add(col, key=key, scale=g)
        if new:
            self.basis.append(a)
            self.basis_keys.append(key)
        return new

    def relations(self):
        """One relation per rejected element: dict key -> w with sum w^p a = 0."""
        return self._ech.kernel()

    def express(self, a: RatFunc):
        """dict basis key -> v with a = sum v^p * basis element, or None."""
        self.field.check(a.field)
        if a.is_zero():
            zero = RatFunc.constant(self.field, 0)
            return {k: zero for k in self.basis_keys}
        col, g = coordinate_entries(a)
        return self._ech.express(col, g)


def fp_rank(elements) -> int:
    elements = list(elements)
    if not elements:
        return 0
    span = FpSpan(elements[0].field)
    for a in elements:
        if span.full:
            break
        if not a.is_zero():
            span.add(a)
    return span.rank
