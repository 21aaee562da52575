"""Random instances and cross-check suites.

Each suite draws instances from a seeded ``random.Random`` and compares two
independent computations of the same invariant.  A suite never stops at the
first disagreement: it collects every failing instance so a report can show
all of them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

from .errors import QLPError, VerificationError
from .exactfield import FieldDescriptor, RatFunc
from .extension import (
    ExtensionSpec,
    KpSpan,
    direct_defect_modular,
    extended_core,
    reduce_to_exponent_one,
    spec_pbasis,
    tensor_defect,
)
from .pform import QuasiPForm, decompose
from .pindep import is_p_independent, norm_data, product_anisotropy
from .splitting import insep_tower

VARIABLE_NAMES = ("x", "y", "z", "w")


def random_field(rng: random.Random, primes=(2, 3), nvars=(2, 3)) -> FieldDescriptor:
    return FieldDescriptor(rng.choice(primes), VARIABLE_NAMES[: rng.choice(nvars)])


def random_monomial(field: FieldDescriptor, rng: random.Random, max_exp: int = 2, unit: bool = True) -> RatFunc:
    exps = [rng.randint(0, max_exp) for _ in range(field.nvars)]
    c = rng.randint(1, field.p - 1) if unit else 1
    return RatFunc.monomial(field, exps, c)


def random_polynomial(field: FieldDescriptor, rng: random.Random, max_degree: int = 2, max_terms: int = 3) -> RatFunc:
    """A nonzero polynomial of total degree <= max_degree."""
    while True:
        total = RatFunc.constant(field, 0)
        for _ in range(rng.randint(1, max_terms)):
            exps = [0] * field.nvars
            for _ in range(rng.randint(0, max_degree)):
                exps[rng.randrange(field.nvars)] += 1
            total = total + RatFunc.monomial(field, exps, rng.randint(1, field.p - 1))
        if not total.is_zero():
            return total


def random_element(field: FieldDescriptor, rng: random.Random, max_degree: int = 2, monomial: bool = False) -> RatFunc:
    if monomial:
        return random_monomial(field, rng, max_degree)
    a = random_polynomial(field, rng, max_degree)
    if rng.random() < 0.25:
        a = a / random_polynomial(field, rng, 1, 2)
    return a


def random_form(field: FieldDescriptor, rng: random.Random, dim: int, max_degree: int = 2,
                monomial: bool = False) -> QuasiPForm:
    """A form whose later coefficients often depend on earlier ones over F^p.

    Fresh coefficients are random; dependent ones are F^p-combinations or
    products with earlier coefficients, so that defects over F and over
    small extensions are frequently nonzero.
    """
    coeffs = []
    for _ in range(dim):
        roll = rng.random()
        if coeffs and roll < 0.25:
            u = random_monomial(field, rng, 1, unit=True)
            c = u ** field.p * rng.choice(coeffs)
            if not monomial and len(coeffs) > 1 and rng.random() < 0.5:
                v = random_element(field, rng, 1)
                c = c + v ** field.p * rng.choice(coeffs)
        elif coeffs and roll < 0.5:
            c = rng.choice(coeffs) * random_element(field, rng, 1, monomial=True)
        else:
            c = random_element(field, rng, 2, monomial)
        if c.is_zero():
            c = RatFunc.constant(field, 1)
        coeffs.append(c)
    return QuasiPForm(field, coeffs)


def random_independent(field: FieldDescriptor, rng: random.Random, r: int, monomial: bool = False,
                       max_degree: int = 2, tries: int = 50):
    """r p-independent elements (fewer if the field runs out of room)."""
    out = []
    for _ in range(tries):
        if len(out) == r:
            break
        a = random_element(field, rng, max_degree, monomial or rng.random() < 0.5)
        if a.is_one() or not is_p_independent(out + [a]):
            continue
        out.append(a)
    return out


def random_exponent_one_spec(field: FieldDescriptor, rng: random.Random, r: int, monomial: bool = False) -> ExtensionSpec:
    """Exponent-one spec whose generators need not be p-independent."""
    gens = [random_element(field, rng, 2, monomial or rng.random() < 0.5) for _ in range(r)]
    return ExtensionSpec.simple(field, gens)


def random_modular_spec(field: FieldDescriptor, rng: random.Random, r: int, max_exponent: int = 3,
                        monomial: bool = False) -> ExtensionSpec:
    gens = random_independent(field, rng, r, monomial)
    return ExtensionSpec(field, [(a, rng.randint(1, max_exponent)) for a in gens])


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: list = dc_field(default_factory=list)
    seconds: float = 0.0
    nontrivial: int = 0  # trials where the compared invariant was not the trivial value

    @property
    def passed(self) -> bool:
        return self.trials > 0 and not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "nontrivial": self.nontrivial,
            "failures": list(self.failures),
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
        }


def _run(name, count, seed, body):
    res = SuiteResult(name)
    rng = random.Random(seed)
    start = time.perf_counter()
    for i in range(count):
        try:
            outcome = body(rng)
        except QLPError as exc:
            res.failures.append(f"trial {i}: {type(exc).__name__}: {exc}")
            outcome = None
        if isinstance(outcome, str):
            res.failures.append(f"trial {i}: {outcome}")
        elif outcome:
            res.nontrivial += 1
        res.trials += 1
    res.seconds = time.perf_counter() - start
    return res


def check_modular(count: int, seed: int = 0, max_exponent: int = 3, max_dim: int = 6) -> SuiteResult:
    """direct_defect_modular against extended_core after exponent reduction."""

    def body(rng):
        field = random_field(rng)
        phi = random_form(field, rng, rng.randint(1, max_dim), monomial=rng.random() < 0.5)
        spec = random_modular_spec(field, rng, rng.randint(1, 2), max_exponent, monomial=rng.random() < 0.5)
        direct = direct_defect_modular(phi, spec)
        core = extended_core(phi, reduce_to_exponent_one(spec), method="general").defect
        if direct != core:
            return f"{phi} over {spec}: direct {direct}, extended_core {core}"
        return core > decompose(phi).defect

    return _run("modular-vs-core", count, seed, body)


def check_dual_path(count: int, seed: int = 0, max_dim: int = 6) -> SuiteResult:
    """iql(phi (x) <<c>>) / p^s against dim phi minus the greedy K^p-rank."""

    def body(rng):
        field = random_field(rng)
        monomial = rng.random() < 0.5
        phi = random_form(field, rng, rng.randint(1, max_dim), monomial=monomial)
        spec = random_exponent_one_spec(field, rng, rng.randint(0, 3), monomial=monomial)
        c = spec_pbasis(spec)
        td = tensor_defect(phi, c, method="general")
        p_s = field.p ** len(c)
        if td % p_s:
            return f"{phi} over {spec}: iql of the tensor product {td} not divisible by {p_s}"
        span = KpSpan(field, c, monomial=False)
        for u in phi:
            span.add(u)
        greedy = phi.dim - span.dim
        if td // p_s != greedy:
            return f"{phi} over {spec}: tensor route {td // p_s}, greedy route {greedy}"
        return greedy > 0

    return _run("tensor-vs-greedy", count, seed, body)


def check_towers(count: int, seed: int = 0, max_dim: int = 5) -> SuiteResult:
    """Strictly increasing tower defects and m + 1 stages on forms with 1 in D_F(phi)."""

    def body(rng):
        field = random_field(rng)
        phi = random_form(field, rng, rng.randint(1, max_dim), monomial=rng.random() < 0.5)
        phi = decompose(QuasiPForm(field, [RatFunc.constant(field, 1)] + list(phi))).anisotropic_part
        m = norm_data(phi).norm_degree_exponent
        tower = insep_tower(phi)
        defects = [s.defect for s in tower.stages]
        if any(b <= a for a, b in zip(defects, defects[1:])):
            return f"{phi}: tower defects {defects} not strictly increasing"
        if len(tower.stages) != m + 1:
            return f"{phi}: {len(tower.stages)} stages, norm exponent {m}"
        return m > 0

    return _run("tower", count, seed, body)


def check_products(count: int, seed: int = 0, max_dim: int = 3) -> SuiteResult:
    """Multiplicative norm degrees imply an anisotropic product."""

    def body(rng):
        field = random_field(rng)
        monomial = rng.random() < 0.6
        phi = decompose(random_form(field, rng, rng.randint(1, max_dim), monomial=monomial)).anisotropic_part
        psi = decompose(random_form(field, rng, rng.randint(1, max_dim), monomial=monomial)).anisotropic_part
        try:
            res = product_anisotropy(phi, psi)
        except VerificationError as exc:
            return str(exc)
        if res.criterion_holds and not res.product_anisotropic:
            return f"{phi}, {psi}: criterion holds but the product is isotropic"
        return res.criterion_holds

    return _run("product-criterion", count, seed, body)


def check_roundtrip(count: int, seed: int = 0) -> SuiteResult:
    """Elements, forms and extensions re-parse to equal values."""
    from .cli.parser import parse_element, parse_extension, parse_form

    def body(rng):
        field = random_field(rng)
        a = random_element(field, rng, 3)
        if parse_element(str(a), field) != a:
            return f"element {a} does not round-trip"
        phi = random_form(field, rng, rng.randint(1, 4))
        if parse_form(str(phi), field) != phi:
            return f"form {phi} does not round-trip"
        spec = random_modular_spec(field, rng, rng.randint(0, 2))
        if parse_extension(str(spec), field) != spec:
            return f"extension {spec} does not round-trip"
        return True

    return _run("round-trip", count, seed, body)


SUITES = {
    "modular": check_modular,
    "dual-path": check_dual_path,
    "tower": check_towers,
    "product": check_products,
    "round-trip": check_roundtrip,
}


def run_checks(count: int, seed: int = 0, suites=None):
    names = list(SUITES) if suites is None else list(suites)
    return [SUITES[name](count, seed) for name in names]

