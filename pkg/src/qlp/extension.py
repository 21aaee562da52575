"""Forms over purely inseparable extensions E = F(a_1^(1/p^n_1), ..., a_r^(1/p^n_r)).

The defect over E only depends on the exponent-one field K = F(a_i^(1/p)),
and K^p = F^p(a_1, ..., a_r).  With a p-basis c_1..c_s of that field, the
monomials c^e (0 <= e < p) form an F^p-basis of K^p, so K^p-linear algebra on
elements of F becomes F^p-linear algebra on the products u * c^e.  Nothing
here constructs arithmetic in E except :func:`direct_defect_modular`, which
is kept independent on purpose.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import UsageError, VerificationError
from .exactfield import FieldDescriptor, RatFunc, frobenius_root, matrix_rank
from .exactfield.modp import rref_mod_p
from .exactfield.ratfunc import fp_coordinates
from .exactfield.span import FpSpan
from .pform import QuasiPForm, RepresentedSpace, decompose, quasi_pfister, represented_space, tensor
from .pindep import extract_p_basis, is_p_independent

_SIMPLE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$|^[0-9]+$")


def _atom(a: RatFunc) -> str:
    s = str(a)
    return s if _SIMPLE.match(s) else f"({s})"


class ExtensionSpec:
    """The extension F(a_1^(1/p^n_1), ..., a_r^(1/p^n_r)) as pairs (a_i, n_i)."""

    __slots__ = ("field", "adjoined")

    def __init__(self, field: FieldDescriptor, adjoined=()):
        pairs = []
        for a, n in adjoined:
            if not isinstance(a, RatFunc):
                a = field(a)
            field.check(a.field)
            if a.is_zero():
                raise UsageError("cannot adjoin a root of zero")
            if not isinstance(n, int) or n < 1:
                raise UsageError(f"root exponent must be a positive integer, got {n!r}")
            pairs.append((a, n))
        self.field = field
        self.adjoined = tuple(pairs)

    @classmethod
    def simple(cls, field: FieldDescriptor, gens) -> "ExtensionSpec":
        """F(g_1^(1/p), ..., g_k^(1/p))."""
        return cls(field, [(g, 1) for g in gens])

    @property
    def generators(self):
        return tuple(a for a, _ in self.adjoined)

    @property
    def exponent(self) -> int:
        return max((n for _, n in self.adjoined), default=0)

    def __len__(self):
        return len(self.adjoined)

    def __add__(self, other: "ExtensionSpec") -> "ExtensionSpec":
        self.field.check(other.field)
        return ExtensionSpec(self.field, self.adjoined + other.adjoined)

    def __eq__(self, other):
        if not isinstance(other, ExtensionSpec):
            return NotImplemented
        return self.field == other.field and self.adjoined == other.adjoined

    def __hash__(self):
        return hash((self.field, self.adjoined))

    def __str__(self):
        if not self.adjoined:
            return "F"
        p = self.field.p
        parts = [f"{_atom(a)}^(1/{p ** n})" for a, n in self.adjoined]
        return "F(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"ExtensionSpec({self}, {self.field})"

    def to_json(self) -> dict:
        return {"adjoined": [[str(a), n] for a, n in self.adjoined]}

    @classmethod
    def from_json(cls, field: FieldDescriptor, obj) -> "ExtensionSpec":
        try:
            pairs = [(field(str(a)), int(n)) for a, n in obj["adjoined"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed extension JSON: {obj!r}") from exc
        return cls(field, pairs)


def reduce_to_exponent_one(spec: ExtensionSpec) -> ExtensionSpec:
    return ExtensionSpec(spec.field, [(a, 1) for a, _ in spec.adjoined])


# ---------------------------------------------------------------------------
# K^p-spans of elements of F


def _monomial_residues(elements, p):
    out = []
    for a in elements:
        mono = a.as_monomial()
        if mono is None:
            return None
        out.append(tuple(e % p for e in mono[1]))
    return out


class KpSpan:
    """Greedy K^p-span of elements of F, where K^p = F^p(c) for a p-basis c.

    With monomial data, d lies in the K^p-span of monomials u iff the residue
    class of d is congruent to some residue of u modulo the F_p-span H of the
    residues of c; the span is then a union of cosets of H.  Otherwise the
    products u * c^e are fed to an F^p-span.
    """

    def __init__(self, field: FieldDescriptor, pbasis, monomial: bool = True):
        self.field = field
        self.pbasis = tuple(pbasis)
        self.members = []
        res = _monomial_residues(self.pbasis, field.p) if monomial else None
        self._monomial = res is not None
        if self._monomial:
            self._H = rref_mod_p(res, field.p) if res else ((), ())
            self._cosets = set()
        else:
            self._start_general()

    def _start_general(self):
        self._monomial = False
        self._basis_monomials = quasi_pfister(self.pbasis, self.field).coefficients
        self._span = FpSpan(self.field)
        members, self.members = self.members, []
        for u in members:
            self.add(u)

    def _coset(self, residue):
        p = self.field.p
        v = list(residue)
        for row, c in zip(*self._H):
            if v[c]:
                f = v[c]
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return tuple(v)

    def _coset_of(self, d):
        mono = d.as_monomial()
        if mono is None:
            return None
        return self._coset([e % self.field.p for e in mono[1]])

    @property
    def dim(self) -> int:
        return len(self.members)

    def contains(self, d: RatFunc) -> bool:
        self.field.check(d.field)
        if d.is_zero():
            return True
        if self._monomial:
            key = self._coset_of(d)
            if key is not None:
                return key in self._cosets
            self._start_general()
        return self._span.contains(d)

    def add(self, u: RatFunc) -> bool:
        """Insert ``u``; return True if it was K^p-independent of the members."""
        if self.contains(u):
            return False
        if self._monomial:
            key = self._coset_of(u)
            if key is None:
                self._start_general()
                return self.add(u)
            self._cosets.add(key)
        else:
            for m in self._basis_monomials:
                self._span.add(u * m)
        self.members.append(u)
        return True


# ---------------------------------------------------------------------------
# defect over an extension


@dataclass(frozen=True)
class RelativeDecomposition:
    """iql and a K^p-basis of D_K(phi) (as elements of F) for phi over K."""

    defect: int
    anisotropic_dim: int
    representatives: tuple
    pbasis_used: tuple

    def anisotropic_form(self, field: FieldDescriptor) -> QuasiPForm:
        return QuasiPForm(field, self.representatives)


def spec_pbasis(spec: ExtensionSpec):
    """A p-basis c_1..c_s of F^p(a_1, ..., a_r); p-th powers are dropped."""
    return tuple(extract_p_basis(spec.generators))


def _tensor_defect_monomial(phi: QuasiPForm, pbasis) -> int:
    """iql(phi (x) <<c>>) for monomial data by counting residue classes of products."""
    p = phi.field.p
    m = phi.field.nvars
    nonzero = [c for c in phi if not c.is_zero()]
    if not nonzero:
        return phi.dim * p ** len(pbasis)
    R = np.array([[e % p for e in c.as_monomial()[1]] for c in nonzero], dtype=np.int64).reshape(-1, m)
    offsets = np.zeros((1, m), dtype=np.int64)
    for g in pbasis:
        gv = np.array([e % p for e in g.as_monomial()[1]], dtype=np.int64).reshape(1, m)
        offsets = np.concatenate([(offsets + j * gv) % p for j in range(p)])
    codes = np.zeros((R.shape[0], offsets.shape[0]), dtype=np.int64)
    weight = 1
    for k in range(m):
        codes += ((R[:, k][:, None] + offsets[:, k][None, :]) % p) * weight
        weight *= p
    distinct = np.unique(codes).size
    return phi.dim * offsets.shape[0] - distinct


def tensor_defect(phi: QuasiPForm, pbasis, method: str = "auto") -> int:
    """iql(phi (x) <<c_1, ..., c_s>>)."""
    field = phi.field
    if method != "general" and phi.is_monomial() and all(c.as_monomial() for c in pbasis):
        return _tensor_defect_monomial(phi, pbasis)
    return decompose(tensor(phi, quasi_pfister(pbasis, field)), method="general").defect


def extended_core(phi: QuasiPForm, spec: ExtensionSpec, method: str = "auto") -> RelativeDecomposition:
    """Defect and K^p-basis of values of phi over the extension ``spec``.

    Two routes are computed and compared: iql(phi (x) <<c>>) / p^s, and a
    greedy K^p-rank of the coefficients.  ``method='general'`` disables the
    monomial shortcuts on both routes.
    """
    field = phi.field
    field.check(spec.field)
    p = field.p
    spec = reduce_to_exponent_one(spec)
    c = spec_pbasis(spec)
    s = len(c)
    td = tensor_defect(phi, c, method)
    if td % p ** s:
        raise VerificationError(f"iql(phi (x) <<c>>) = {td} is not divisible by p^{s}")
    span = KpSpan(field, c, monomial=(method != "general"))
    for u in phi:
        span.add(u)
    greedy_defect = phi.dim - span.dim
    if td // p ** s != greedy_defect:
        raise VerificationError(
            f"defect over {spec}: tensor route {td // p ** s}, greedy route {greedy_defect}"
        )
    return RelativeDecomposition(greedy_defect, span.dim, tuple(span.members), c)


def represents_over(phi: QuasiPForm, d: RatFunc, spec: ExtensionSpec) -> bool:
    """Is d in D_K(phi), K the exponent-one field of ``spec``?"""
    span = KpSpan(phi.field, spec_pbasis(spec))
    for u in phi:
        span.add(u)
    return span.contains(d)


def is_isometric_over(phi: QuasiPForm, psi: QuasiPForm, spec: ExtensionSpec) -> bool:
    """Isometry of phi_K and psi_K: equal dimensions and equal K^p-spans of values."""
    phi.field.check(psi.field)
    if phi.dim != psi.dim:
        return False
    c = spec_pbasis(spec)
    a = KpSpan(phi.field, c)
    b = KpSpan(phi.field, c)
    for u in phi:
        a.add(u)
    for u in psi:
        b.add(u)
    return a.dim == b.dim and all(a.contains(u) for u in b.members)


def values_over_simple_ext(phi: QuasiPForm, a: RatFunc) -> RepresentedSpace:
    """F-side model of D_K(phi) for K = F(a^(1/p)): the values of <<a>> (x) phi."""
    if frobenius_root(a) is not None:
        raise UsageError(f"{a} is a p-th power; F({a}^(1/p)) = F")
    return represented_space(tensor(quasi_pfister([a], phi.field), phi))


# ---------------------------------------------------------------------------
# direct computation in L = F(b_1, ..., b_r), b_i^(p^n_i) = a_i


def _components(columns):
    """Connected components of columns linked by shared row keys."""
    parent = list(range(len(columns)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for j, col in enumerate(columns):
        for key in col:
            if key in owner:
                ri, rj = find(owner[key]), find(j)
                if ri != rj:
                    parent[ri] = rj
            else:
                owner[key] = j
    groups = defaultdict(list)
    for j in range(len(columns)):
        groups[find(j)].append(j)
    return list(groups.values())


def direct_defect_modular(phi: QuasiPForm, spec: ExtensionSpec) -> int:
    """iql(phi_L) computed inside L for a modular extension L/F.

    Elements of L are F-combinations of the monomials b^f, 0 <= f_i < p^n_i.
    A relation sum lambda_j c_j = 0 with lambda_j in L^p is expanded as
    lambda_j = sum_e mu_{j,e}^p b^(p e), mu in F; each b^(p e) reduces to an
    F-multiple of a single basis monomial, and splitting the resulting
    equations by F^p-coordinates leaves an F-linear system in the mu whose
    kernel has dimension iql(phi_L) * [L:F].
    """
    field = phi.field
    field.check(spec.field)
    gens = spec.generators
    if gens and not is_p_independent(gens):
        raise UsageError(f"{spec} is not modular: its generators are p-dependent")
    p = field.p
    bounds = [p ** n for _, n in spec.adjoined]
    degree = 1
    for b in bounds:
        degree *= b
    coeffs = [c for c in phi if not c.is_zero()]
    zero_count = phi.dim - len(coeffs)
    if not coeffs:
        return phi.dim

    # b^(p e) = prod a_i^(q_i) * b^(g), with p e_i = q_i p^n_i + g_i
    columns = []
    entries = []
    for j, c in enumerate(coeffs):
        for e in itertools.product(*(range(b) for b in bounds)):
            w = c
            g = []
            for i, (ei, b) in enumerate(zip(e, bounds)):
                q, r = divmod(p * ei, b)
                if q:
                    w = w * gens[i] ** q
                g.append(r)
            coords = fp_coordinates(w).coords
            columns.append({(tuple(g), eps): r for eps, r in coords.items()})
            entries.append((j, e))
    kernel = 0
    cache = {}
    for comp in _components(columns):
        rows = []
        index = {}
        for j in comp:
            for key in columns[j]:
                if key not in index:
                    index[key] = len(index)
                    rows.append(key)
        sig = tuple(
            tuple(sorted((index[key], val) for key, val in columns[j].items()))
            for j in comp
        )
        if sig not in cache:
            zero = RatFunc.constant(field, 0)
            M = [[columns[j].get(key, zero) for j in comp] for key in rows]
            cache[sig] = len(comp) - matrix_rank(M)
        kernel += cache[sig]
    if kernel % degree:
        raise VerificationError(f"kernel dimension {kernel} is not a multiple of [L:F] = {degree}")
    return zero_count + kernel // degree
