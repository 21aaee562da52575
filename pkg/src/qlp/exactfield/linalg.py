"""Exact linear algebra over F = F_p(x_1, ..., x_m).

Matrices are given as rows of :class:`RatFunc`.  Denominators are cleared
column by column (column scaling changes neither rank nor which columns are
pivots), then a fraction-free Gaussian elimination runs over F_p[x].

The elimination is *left-looking*: columns are fed one at a time and reduced
against the recorded pivot steps.  This makes "greedy first-come independent
subset" and "is this vector in the span so far" the same cheap operation, and
lets callers stop as soon as the rank reaches the number of rows.

Every entry produced after k pivot steps equals a (k+1)x(k+1) minor of the
input, so the division by the previous pivot is exact (Sylvester's identity).
"""

from __future__ import annotations

from ..errors import UsageError
from .field import FieldDescriptor
from .poly import guard
from .ratfunc import RatFunc


_RHS = object()


class ColumnEchelon:
    """Incremental fraction-free column echelon form of a polynomial matrix."""

    def __init__(self, field: FieldDescriptor, nrows: int):
        self.field = field
        self.nrows = nrows
        self._zero = field.ctx.constant(0)
        self._one = field.ctx.constant(1)
        # per pivot step: (pivot value, swapped row, multipliers below the pivot)
        self._steps = []
        # per processed column: (key, scale, rank when processed, entries, kind)
        # kind is True for pivots, False for reduced dependents, None for raw columns
        self._columns = []
        self.pivot_keys = []

    @property
    def rank(self) -> int:
        return len(self._steps)

    @property
    def full(self) -> bool:
        return self.rank == self.nrows

    def _reduce(self, col):
        v = list(col)
        if len(v) != self.nrows:
            raise UsageError(f"column of length {len(v)} fed to a {self.nrows}-row echelon")
        field = self.field
        prev = self._one
        for k, (piv, swap, mult) in enumerate(self._steps):
            if swap != k:
                v[k], v[swap] = v[swap], v[k]
            vk = v[k]
            exact = not prev.is_one()
            for i in range(k + 1, self.nrows):
                if vk.is_zero():
                    if v[i].is_zero():
                        continue
                    t = guard(field, piv * v[i])
                else:
                    t = guard(field, piv * v[i] - mult[i - k - 1] * vk)
                v[i] = t / prev if exact else t
            prev = piv
        return v

    def contains(self, col) -> bool:
        """True if ``col`` lies in the span of the columns added so far."""
        if self.full:
            return True
        v = self._reduce(col)
        return all(x.is_zero() for x in v[self.rank:])

    def add(self, col, key=None, scale=None) -> bool:
        """Feed one column; return True if it is independent of the previous ones.

        ``scale`` is the polynomial the caller multiplied the original column
        by; kernel vectors are reported for the unscaled columns.
        """
        if key is None:
            key = len(self._columns)
        r = self.rank
        if self.full:
            # reduced lazily, only if a kernel is requested
            self._columns.append((key, scale, r, list(col), None))
            return False
        v = self._reduce(col)
        best = None
        for i in range(r, self.nrows):
            if not v[i].is_zero() and (best is None or len(v[i]) < len(v[best])):
                best = i
        if best is None:
            self._columns.append((key, scale, r, v[:r], False))
            return False
        v[r], v[best] = v[best], v[r]
        self._steps.append((v[r], best, v[r + 1:]))
        self._columns.append((key, scale, r, v[: r + 1], True))
        self.pivot_keys.append(key)
        return True

    def kernel(self):
        """One kernel vector per dependent column, as dicts key -> RatFunc.

        The vector attached to a dependent column has coordinate 1 there (up
        to the column scale), zero on every other dependent column, and
        rational entries on the pivot columns processed before it.
        """
        pivots = []
        out = []
        for key, scale, r, upper, is_pivot in self._columns:
            if is_pivot:
                pivots.append((key, scale, upper))
            else:
                if is_pivot is None:  # stored unreduced while the rank was full
                    upper = self._reduce(upper)[:r]
                out.append(self._back_substitute(key, scale, r, upper, pivots[:r]))
        return out

    def express(self, col, scale=None):
        """Coefficients over the pivot columns reproducing ``col``, or None.

        Returns a dict key -> RatFunc with sum_k c_k * column_k = col, where
        the columns are the unscaled ones the caller fed in.
        """
        v = self._reduce(col)
        r = self.rank
        if any(not x.is_zero() for x in v[r:]):
            return None
        pivots = [(key, s, upper) for key, s, _, upper, is_pivot in self._columns if is_pivot]
        vec = self._back_substitute(_RHS, scale, r, v[:r], pivots)
        t = vec.pop(_RHS)
        return {key: -x / t for key, x in vec.items()}

    def _back_substitute(self, key, scale, r, upper, pivots):
        field = self.field
        zero = RatFunc.constant(field, 0)
        x = [zero] * r
        for k in range(r - 1, -1, -1):
            acc = RatFunc(field, upper[k])
            for t in range(k + 1, r):
                entry = pivots[t][2][k]
                if not entry.is_zero() and not x[t].is_zero():
                    acc = acc + RatFunc(field, entry) * x[t]
            x[k] = -acc / RatFunc(field, pivots[k][2][k])
        vec = {key: _scaled(field, RatFunc.constant(field, 1), scale)}
        for t in range(r):
            pkey, pscale, _ = pivots[t]
            vec[pkey] = _scaled(field, x[t], pscale)
        return vec


def _scaled(field, value: RatFunc, scale) -> RatFunc:
    if scale is None:
        return value
    return value * RatFunc(field, scale)


def _as_matrix(M):
    rows = [list(r) for r in M]
    if not rows:
        return rows, 0, None
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise UsageError("ragged matrix")
    field = None
    for r in rows:
        for a in r:
            if not isinstance(a, RatFunc):
                raise UsageError(f"matrix entry {a!r} is not a RatFunc")
            if field is None:
                field = a.field
            else:
                field.check(a.field)
    return rows, ncols, field


def cleared_column(field, entries):
    """Scale a column of RatFunc to polynomials; return (raw column, scale)."""
    scale = field.ctx.constant(1)
    for a in entries:
        if not a.den.is_one():
            scale = guard(field, scale * (a.den / scale.gcd(a.den)))
    col = []
    for a in entries:
        if a.is_zero():
            col.append(field.ctx.constant(0))
        elif scale.is_one():
            col.append(a.num)
        else:
            col.append(guard(field, a.num * (scale / a.den)))
    return col, scale


def _echelon_of(rows, ncols, field, stop_when_full=False):
    ech = ColumnEchelon(field, len(rows))
    for j in range(ncols):
        if stop_when_full and ech.full:
            break
        col, scale = cleared_column(field, [r[j] for r in rows])
        ech.add(col, key=j, scale=scale)
    return ech


def matrix_rank(M) -> int:
    rows, ncols, field = _as_matrix(M)
    if not rows or not ncols:
        return 0
    return _echelon_of(rows, ncols, field, stop_when_full=True).rank


def matrix_rank_kernel(M):
    """Return ``(rank, kernel_basis)`` of a matrix of RatFunc.

    Kernel vectors are tuples of RatFunc with M*v = 0.
    """
    rows, ncols, field = _as_matrix(M)
    if not rows:
        return 0, []
    ech = _echelon_of(rows, ncols, field)
    basis = []
    zero = RatFunc.constant(field, 0)
    for vec in ech.kernel():
        basis.append(tuple(vec.get(j, zero) for j in range(ncols)))
    return ech.rank, basis


def solve_linear(M, b):
    """A solution v of M*v = b, or None when the system is inconsistent."""
    rows, ncols, field = _as_matrix(M)
    b = list(b)
    if len(b) != len(rows):
        raise UsageError(f"right-hand side of length {len(b)} for {len(rows)} rows")
    if not rows:
        return ()
    for x in b:
        field.check(x.field)
    ech = _echelon_of(rows, ncols, field)
    col, scale = cleared_column(field, b)
    coeffs = ech.express(col, scale)
    if coeffs is None:
        return None
    zero = RatFunc.constant(field, 0)
    return tuple(coeffs.get(j, zero) for j in range(ncols))
