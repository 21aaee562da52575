"""Small dense linear algebra over the prime field F_p (exponent residues)."""

from __future__ import annotations


def rref_mod_p(rows, p: int):
    """Reduced row echelon form of integer vectors mod p.

    Returns ``(basis, pivots)``; ``basis`` is a tuple of tuples, canonical for
    the row space, so it can serve as a dictionary key.
    """
    rows = [[x % p for x in r] for r in rows]
    ncols = len(rows[0]) if rows else 0
    out = []
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(len(out), len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        r = len(out)
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        out.append(rows[r])
        pivots.append(c)
    return tuple(tuple(r) for r in out), tuple(pivots)


def rank_mod_p(rows, p: int) -> int:
    return len(rref_mod_p(rows, p)[0])


def in_row_space(basis, pivots, v, p: int) -> bool:
    """Membership of ``v`` in the row space of an RREF basis."""
    v = [x % p for x in v]
    for row, c in zip(basis, pivots):
        if v[c]:
            f = v[c]
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return not any(v)
