"""Rank of a RatFunc matrix after specializing the variables into GF(p^k).

This is an independent, probabilistic cross-check of the exact elimination
in :mod:`linalg`: it never touches FLINT arithmetic beyond reading off the
terms of numerators and denominators.  The finite field is built here from a
primitive polynomial found by brute force, with Zech logarithms for addition.
Specialized rank never exceeds the true rank; equality holds unless the
random point hits a proper subvariety (probability at most deg/q).
"""

from __future__ import annotations

import random
from functools import lru_cache

from ..errors import ArithmeticFailure

ZERO = -1  # log of zero


class GFq:
    """GF(p^k) in logarithmic representation: nonzero a <-> n with a = g^n."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.q = p ** k
        self.order = self.q - 1
        exp, log = _tables(p, k)
        self._exp = exp
        self._log = log
        # zech[n]: g^n + 1 = g^zech[n]
        zech = [0] * self.order
        for n in range(self.order):
            zech[n] = log[_plus_one(exp[n], p)]
        self._zech = zech
        self.minus_one = 0 if p == 2 else self.order // 2

    def from_int(self, c: int) -> int:
        c %= self.p
        return ZERO if c == 0 else self._log[c]

    def mul(self, a: int, b: int) -> int:
        if a == ZERO or b == ZERO:
            return ZERO
        return (a + b) % self.order

    def div(self, a: int, b: int) -> int:
        if b == ZERO:
            raise ArithmeticFailure("division by zero in GF(q)")
        if a == ZERO:
            return ZERO
        return (a - b) % self.order

    def neg(self, a: int) -> int:
        return ZERO if a == ZERO else (a + self.minus_one) % self.order

    def add(self, a: int, b: int) -> int:
        if a == ZERO:
            return b
        if b == ZERO:
            return a
        # g^a + g^b = g^b (g^(a-b) + 1)
        z = self._zech[(a - b) % self.order]
        return ZERO if z == ZERO else (z + b) % self.order

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def random_element(self, rng: random.Random) -> int:
        v = rng.randrange(self.q)
        return ZERO if v == 0 else self._log[v]


def _plus_one(v: int, p: int) -> int:
    d = v % p
    return v - d + (d + 1) % p


def _times_x(v: int, p: int, k: int, low_digits) -> int:
    """Multiply the encoded residue v by x modulo the monic polynomial x^k - low."""
    top = v // p ** (k - 1)
    v = (v % p ** (k - 1)) * p
    if top:
        out = 0
        scale = 1
        for i in range(k):
            d = (v // scale + top * low_digits[i]) % p
            out += d * scale
            scale *= p
        v = out
    return v


@lru_cache(maxsize=None)
def _tables(p: int, k: int):
    q = p ** k
    # candidates x^k = sum low_i x^i with nonzero constant term
    for code in range(1, q):
        low = [(code // p ** i) % p for i in range(k)]
        if low[0] == 0:
            continue
        exp = [1]
        v = 1
        for _ in range(q - 2):
            v = _times_x(v, p, k, low)
            if v == 1:
                break
            exp.append(v)
        else:
            if _times_x(v, p, k, low) != 1:
                continue
            log = [ZERO] * q
            for n, e in enumerate(exp):
                log[e] = n
            return exp, log
    raise AssertionError(f"no primitive polynomial of degree {k} over F_{p}")


def default_extension_degree(p: int, bound: int = 1 << 16) -> int:
    k = 1
    while p ** (k + 1) <= bound:
        k += 1
    return k


@lru_cache(maxsize=None)
def gf(p: int, k: int | None = None) -> GFq:
    return GFq(p, k or default_extension_degree(p))


def _eval_raw(F: GFq, raw, point) -> int:
    acc = ZERO
    for exps, c in raw.terms():
        t = F.from_int(int(c))
        for e, x in zip(exps, point):
            if e:
                if x == ZERO:
                    t = ZERO
                    break
                t = (t + e * x) % F.order
        acc = F.add(acc, t)
    return acc


def evaluate(F: GFq, a, point) -> int:
    """Value of the RatFunc ``a`` at ``point`` (logs); raises if the denominator vanishes."""
    den = _eval_raw(F, a.den, point)
    if den == ZERO:
        raise ArithmeticFailure("denominator vanishes at the specialization point")
    return F.div(_eval_raw(F, a.num, point), den)


def rank_mod(F: GFq, rows) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != ZERO), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c] == ZERO:
                continue
            f = F.div(rows[i][c], pr[c])
            rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def specialized_rank(M, seed: int = 0, attempts: int = 20, k: int | None = None) -> int:
    """Rank of M at a random point of GF(p^k)^m keeping every denominator nonzero."""
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    field = rows[0][0].field
    F = gf(field.p, k)
    rng = random.Random(seed)
    for _ in range(attempts):
        point = [F.random_element(rng) for _ in range(field.nvars)]
        try:
            vals = [[evaluate(F, a, point) for a in r] for r in rows]
        except ArithmeticFailure:
            continue
        return rank_mod(F, vals)
    raise ArithmeticFailure("no specialization point avoided the denominators")
