"""Splitting patterns of p-forms over purely inseparable extensions.

Every reported dimension comes with a witness extension, and every witness is
pushed through :func:`extended_core` before it is reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import UsageError, VerificationError
from .exactfield import FieldDescriptor, RatFunc
from .exactfield.modp import in_row_space, rref_mod_p
from .extension import ExtensionSpec, KpSpan, extended_core, is_isometric_over, represents_over
from .pform import QuasiPForm, decompose, is_anisotropic, orthogonal_sum, quasi_pfister, scale
from .pindep import is_minimal, is_p_independent, norm_data


def _require_anisotropic(phi, what):
    if phi.dim == 0 or not is_anisotropic(phi):
        raise UsageError(f"{what} expects a nonzero anisotropic form, got {phi}")


# ---------------------------------------------------------------------------
# the inseparable tower


@dataclass(frozen=True)
class TowerStage:
    spec: ExtensionSpec
    defect: int
    anisotropic_dim: int
    representatives: tuple


@dataclass(frozen=True)
class TowerReport:
    """Stages E_0 = F, E_i = F(a_1^(1/p), ..., a_i^(1/p)) for the norm p-basis a_1..a_m."""

    stages: tuple
    generators: tuple

    @property
    def dims(self):
        return tuple(s.anisotropic_dim for s in self.stages)


def insep_tower(phi: QuasiPForm) -> TowerReport:
    _require_anisotropic(phi, "insep_tower")
    field = phi.field
    psi = scale(phi[0].inverse(), phi)
    gens = norm_data(psi).generators
    one = RatFunc.constant(field, 1)
    stages = []
    for i in range(len(gens) + 1):
        spec = ExtensionSpec.simple(field, gens[:i])
        rd = extended_core(phi, spec)
        if stages and rd.defect <= stages[-1].defect:
            raise VerificationError(f"defect did not increase at stage {i} of the tower of {phi}")
        rest = KpSpan(field, rd.pbasis_used)
        for u in (one,) + gens[i:]:
            rest.add(u)
        if rest.dim != len(gens) - i + 1:
            raise VerificationError(f"<1, a_{i + 1}, ..., a_m> became isotropic at stage {i}")
        stages.append(TowerStage(spec, rd.defect, rd.anisotropic_dim, rd.representatives))
    if stages[-1].anisotropic_dim != 1:
        raise VerificationError(f"last tower stage of {phi} has dimension {stages[-1].anisotropic_dim}")
    return TowerReport(tuple(stages), tuple(gens))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SplittingReport:
    """Achieved anisotropic dimensions with one verified witness extension each.

    ``label`` is ``fsp`` only for the families where the closed form is
    proven to be the full splitting pattern; search results are ``pisp``.
    """

    dims: tuple
    witnesses: dict
    representatives: dict
    method: str
    label: str
    complete: bool = True
    notes: tuple = dc_field(default=())

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "witnesses": {str(d): str(self.witnesses[d]) for d in self.dims},
            "witness_specs": {str(d): self.witnesses[d].to_json() for d in self.dims},
            "representatives": {
                str(d): [str(r) for r in self.representatives[d]] for d in self.dims
            },
            "method": self.method,
            "label": self.label,
            "complete": self.complete,
        }


def verify_report(phi: QuasiPForm, report: SplittingReport) -> None:
    """Re-run every witness through extended_core; raise on any mismatch."""
    for d in report.dims:
        got = extended_core(phi, report.witnesses[d]).anisotropic_dim
        if got != d:
            raise VerificationError(f"witness {report.witnesses[d]} gives {got}, claimed {d}")


# ---------------------------------------------------------------------------
# search over exponent-one extensions


@dataclass(frozen=True)
class SearchBudget:
    """max_generators defaults to m + 1 for a norm p-basis of size m."""

    max_generators: int | None = None
    extra: tuple = ()
    max_candidates: int = 100_000


def _pool(field: FieldDescriptor, gens):
    p = field.p
    pool = []
    for e in sorted(itertools.product(range(p), repeat=len(gens)), key=lambda e: (sum(e), e)):
        if not any(e):
            continue
        b = RatFunc.constant(field, 1)
        for g, k in zip(gens, e):
            if k:
                b = b * g ** k
        pool.append((e, b))
    return pool


def pisp_search(phi: QuasiPForm, budget: SearchBudget | None = None) -> SplittingReport:
    """Anisotropic dimensions of phi over exponent-one extensions from a candidate pool.

    Candidates adjoin p-th roots of monomials in the norm-field p-basis of
    phi (one candidate per F_p-span of exponent residues) plus optional
    extra generators.
    """
    budget = budget or SearchBudget()
    field = phi.field
    p = field.p
    an = decompose(phi).anisotropic_part
    if an.dim == 0:
        trivial = ExtensionSpec(field)
        return SplittingReport((0,), {0: trivial}, {0: ()}, "search", "pisp")
    gens = norm_data(phi).generators
    m = len(gens)
    max_gens = m + 1 if budget.max_generators is None else budget.max_generators
    pool = _pool(field, gens)
    extra = [field(x) if not isinstance(x, RatFunc) else x for x in budget.extra]

    witnesses = {}
    reps = {}
    evaluated = 0
    complete = True

    def evaluate(chosen):
        spec = ExtensionSpec.simple(field, chosen)
        rd = extended_core(phi, spec)
        if rd.anisotropic_dim not in witnesses:
            witnesses[rd.anisotropic_dim] = spec
            reps[rd.anisotropic_dim] = rd.representatives

    evaluate([])
    evaluated = 1
    seen = {((), frozenset())}
    level = [((), (), frozenset(), [])]  # rref rows, pivots, extras used, generators
    for _ in range(max_gens):
        nxt = []
        for rows, pivots, used, chosen in level:
            options = [("m", e, b) for e, b in pool] + [("x", i, b) for i, b in enumerate(extra)]
            for kind, tag, b in options:
                if kind == "m":
                    if in_row_space(rows, pivots, tag, p):
                        continue
                    new_rows, new_pivots = rref_mod_p(list(rows) + [tag], p)
                    new_used = used
                else:
                    if tag in used:
                        continue
                    new_rows, new_pivots = rows, pivots
                    new_used = used | {tag}
                key = (new_rows, new_used)
                if key in seen:
                    continue
                if evaluated >= budget.max_candidates:
                    complete = False
                    break
                seen.add(key)
                evaluate(chosen + [b])
                evaluated += 1
                nxt.append((new_rows, new_pivots, new_used, chosen + [b]))
            if not complete:
                break
        if not complete or not nxt:
            break
        level = nxt
    dims = tuple(sorted(witnesses))
    return SplittingReport(dims, witnesses, reps, "search", "pisp", complete)


# ---------------------------------------------------------------------------
# closed forms


def fsp_minimal(phi: QuasiPForm) -> SplittingReport:
    """{1, ..., dim phi} for a minimal form, witnessed by the tower prefixes."""
    if not is_minimal(phi):
        raise UsageError(f"{phi} is not minimal")
    tower = insep_tower(phi)
    dims = tuple(range(1, phi.dim + 1))
    if tuple(sorted(tower.dims)) != dims:
        raise VerificationError(f"tower of the minimal form {phi} gives {tower.dims}")
    witnesses = {s.anisotropic_dim: s.spec for s in tower.stages}
    reps = {s.anisotropic_dim: s.representatives for s in tower.stages}
    return SplittingReport(dims, witnesses, reps, "closed-form", "fsp")


def fsp_quasi_pfister(gens, field: FieldDescriptor | None = None) -> SplittingReport:
    """{1, p, ..., p^n} for <<a_1, ..., a_n>>, witnessed by generator prefixes."""
    gens = list(gens)
    pi = quasi_pfister(gens, field)
    field = pi.field
    gens = [field(a) if not isinstance(a, RatFunc) else a for a in gens]
    if not is_anisotropic(pi):
        raise UsageError(f"<<{', '.join(map(str, gens))}>> is isotropic")
    p = field.p
    n = len(gens)
    witnesses = {}
    reps = {}
    for i in range(n + 1):
        spec = ExtensionSpec.simple(field, gens[:i])
        rd = extended_core(pi, spec)
        if rd.anisotropic_dim != p ** (n - i):
            raise VerificationError(f"{spec} gives dimension {rd.anisotropic_dim}, expected {p ** (n - i)}")
        witnesses[rd.anisotropic_dim] = spec
        reps[rd.anisotropic_dim] = rd.representatives
    dims = tuple(sorted(witnesses))
    return SplittingReport(dims, witnesses, reps, "closed-form", "fsp")


# ---------------------------------------------------------------------------
# neighbors  phi = <<a_1..a_n>>  (+)  d <1, a_1, ..., a_s>


class NeighborInput:
    """pi = <<a_1, ..., a_n>>, sigma = <1, a_1, ..., a_s>, phi = pi (+) d sigma."""

    def __init__(self, pfister_gens, sigma_prefix: int, d, field: FieldDescriptor | None = None):
        gens = list(pfister_gens)
        if field is None:
            if isinstance(d, RatFunc):
                field = d.field
            elif gens and isinstance(gens[0], RatFunc):
                field = gens[0].field
            else:
                raise UsageError("NeighborInput needs a field")
        gens = [a if isinstance(a, RatFunc) else field(a) for a in gens]
        d = d if isinstance(d, RatFunc) else field(d)
        n = len(gens)
        if not isinstance(sigma_prefix, int) or not 0 <= sigma_prefix <= n:
            raise UsageError(f"sigma prefix must lie in 0..{n}, got {sigma_prefix!r}")
        if d.is_zero():
            raise UsageError("the neighbor scalar d must be nonzero")
        if any(a.is_zero() for a in gens) or not is_p_independent(gens):
            raise UsageError("quasi-Pfister generators must be p-independent")
        self.field = field
        self.pfister_gens = tuple(gens)
        self.sigma_prefix = sigma_prefix
        self.d = d
        self.pi = quasi_pfister(gens, field)
        self.sigma = QuasiPForm(field, (RatFunc.constant(field, 1),) + self.pfister_gens[:sigma_prefix])
        self.phi = orthogonal_sum(self.pi, scale(d, self.sigma))
        if decompose(self.phi).defect:
            raise UsageError(f"{self.phi} is isotropic")

    @property
    def n(self) -> int:
        return len(self.pfister_gens)

    @property
    def s(self) -> int:
        return self.sigma_prefix


@dataclass(frozen=True)
class NeighborSplit:
    case: str  # "d-represented" or "d-not-represented"
    anisotropic_dim: int
    defect: int
    representatives: tuple


def neighbor_split(inp: NeighborInput, spec: ExtensionSpec) -> NeighborSplit:
    """Defect of phi_E from the values of pi_E and sigma_E, checked against extended_core."""
    field = inp.field
    pi_e = extended_core(inp.pi, spec)
    direct = extended_core(inp.phi, spec)
    if represents_over(inp.pi, inp.d, spec):
        case = "d-represented"
        defect = pi_e.defect + inp.sigma.dim
        expected = QuasiPForm(field, pi_e.representatives)
    else:
        case = "d-not-represented"
        sigma_e = extended_core(inp.sigma, spec)
        defect = pi_e.defect + sigma_e.defect
        expected = QuasiPForm(field, pi_e.representatives + tuple(inp.d * u for u in sigma_e.representatives))
    if defect != direct.defect:
        raise VerificationError(f"neighbor split over {spec}: {defect} vs extended_core {direct.defect}")
    if not is_isometric_over(expected, QuasiPForm(field, direct.representatives), spec):
        raise VerificationError(f"anisotropic part over {spec} differs from the neighbor prediction")
    return NeighborSplit(case, inp.phi.dim - defect, defect, direct.representatives)


def neighbor_pattern(p: int, n: int, s: int):
    """The pairs (k, l) of the closed form, l = 0 standing for the value p^k alone."""
    pairs = [(k, 0) for k in range(n + 1)]
    for k in range(n + 1):
        for l in range(max(1, k - n + s + 1), min(s + 1, p ** k) + 1):
            pairs.append((k, l))
    return pairs


def lambda_choices(p: int, k: int, count: int):
    """``count`` exponent tuples lambda in {0..p-1}^k with sum > 1.

    Ordered by largest entry, then total, then descending lexicographic, so
    square-free products come first.
    """
    cands = [lam for lam in itertools.product(range(p), repeat=k) if sum(lam) > 1]
    cands.sort(key=lambda lam: (max(lam), sum(lam), tuple(-x for x in lam)))
    if len(cands) < count:
        raise AssertionError(f"only {len(cands)} exponent tuples for {count} roots (p={p}, k={k})")
    return cands[:count]


def _power_product(field, gens, lam):
    out = RatFunc.constant(field, 1)
    for g, e in zip(gens, lam):
        if e:
            out = out * g ** e
    return out


def neighbor_witness(inp: NeighborInput, k: int, l: int) -> ExtensionSpec:
    """The extension realizing p^k + l in the closed-form construction."""
    field = inp.field
    a = inp.pfister_gens
    n, s = inp.n, inp.s
    if l == 0:
        # D_k = F(a_{k+1}, ..., a_n, d)
        return ExtensionSpec.simple(field, a[k:] + (inp.d,))
    if l <= k + 1:
        if (k, l) == (n, s + 1):
            return ExtensionSpec(field)
        # E_{k,l} = F(a_l, ..., a_{n-(k-l)-1}), 1-based
        return ExtensionSpec.simple(field, a[l - 1 : n - (k - l) - 1])
    # G_{k,l}: roots of a^lambda_j / a_{k+j} and of a_l, ..., a_n
    lams = lambda_choices(field.p, k, l - k - 1)
    roots = [_power_product(field, a[:k], lam) / a[k + j] for j, lam in enumerate(lams)]
    return ExtensionSpec.simple(field, roots + list(a[l - 1 :]))


def _p_log_ceil(x: int, p: int) -> int:
    k = 0
    while p ** k < x:
        k += 1
    return k


def fsp_neighbor(inp: NeighborInput) -> SplittingReport:
    """Closed-form splitting pattern of pi (+) d sigma with explicit verified witnesses."""
    field = inp.field
    p, n, s = field.p, inp.n, inp.s
    if s < 1:
        raise UsageError("the closed form needs dim sigma >= 2")
    witnesses = {}
    reps = {}
    for k, l in neighbor_pattern(p, n, s):
        spec = neighbor_witness(inp, k, l)
        rd = extended_core(inp.phi, spec)
        if rd.anisotropic_dim != p ** k + l:
            raise VerificationError(f"witness {spec} for ({k},{l}) gives {rd.anisotropic_dim}")
        pi_dim = extended_core(inp.pi, spec).anisotropic_dim
        sigma_dim = extended_core(inp.sigma, spec).anisotropic_dim
        kk = _p_log_ceil(pi_dim, p)
        if p ** kk != pi_dim:
            raise VerificationError(f"(pi_E)_an has dimension {pi_dim}, not a power of p")
        if sigma_dim < kk - n + s + 1 or pi_dim < p ** _p_log_ceil(sigma_dim, p):
            raise VerificationError(f"bounds on (sigma_E)_an violated at {spec}")
        m = p ** k + l
        if m not in witnesses:
            witnesses[m] = spec
            reps[m] = rd.representatives
    dims = tuple(sorted(witnesses))
    superset = {p ** k + l for k in range(n + 1) for l in range(s + 2)}
    if not set(dims) <= superset:
        raise VerificationError(f"{dims} escapes the superset {sorted(superset)}")
    return SplittingReport(dims, witnesses, reps, "closed-form", "fsp")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundCheck:
    norm_exponent: int
    achieved: int
    holds: bool


def pisp_lower_bound_check(phi: QuasiPForm) -> LowerBoundCheck:
    """|pisp(phi)| >= m + 1 for ndeg phi = p^m, witnessed by the tower."""
    an = decompose(phi).anisotropic_part
    if an.dim == 0:
        return LowerBoundCheck(0, 1, True)
    tower = insep_tower(an)
    m = len(tower.generators)
    achieved = len(set(tower.dims))
    if achieved < m + 1:
        raise VerificationError(f"tower of {phi} realizes only {achieved} dimensions")
    return LowerBoundCheck(m, achieved, True)


def closed_form_set(p: int, n: int, s: int):
    """The closed-form dimension set, evaluated arithmetically."""
    return sorted({p ** k + l for k, l in neighbor_pattern(p, n, s)})


__all__ = [
    "LowerBoundCheck",
    "NeighborInput",
    "NeighborSplit",
    "SearchBudget",
    "SplittingReport",
    "TowerReport",
    "TowerStage",
    "closed_form_set",
    "fsp_minimal",
    "fsp_neighbor",
    "fsp_quasi_pfister",
    "insep_tower",
    "lambda_choices",
    "neighbor_pattern",
    "neighbor_split",
    "neighbor_witness",
    "pisp_lower_bound_check",
    "pisp_search",
    "verify_report",
]
