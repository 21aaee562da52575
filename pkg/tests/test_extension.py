import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import F, forms, monomials
from oracles import fp_rank as oracle_fp_rank
from qlp.errors import UsageError
from qlp.exactfield import FieldDescriptor
from qlp.extension import (
    ExtensionSpec,
    KpSpan,
    direct_defect_modular,
    extended_core,
    is_isometric_over,
    reduce_to_exponent_one,
    represents_over,
    tensor_defect,
    values_over_simple_ext,
)
from qlp.pform import QuasiPForm, RepresentedSpace, decompose, is_anisotropic, quasi_pfister, tensor
from qlp.pindep import extract_p_basis, is_p_independent


def form(K, *cs):
    return QuasiPForm(K, [K(c) for c in cs])


def spec(K, *pairs):
    return ExtensionSpec(K, [(K(a), n) for a, n in pairs])


small_fields = st.builds(
    lambda p, m: FieldDescriptor(p, ("x", "y", "z")[:m]),
    st.sampled_from([2, 3]),
    st.integers(1, 3),
)


# ---------------------------------------------------------------------------
# specs


def test_reduce_examples(F2xy):
    assert reduce_to_exponent_one(spec(F2xy, ("x", 3), ("y", 1))) == spec(F2xy, ("x", 1), ("y", 1))
    assert reduce_to_exponent_one(ExtensionSpec(F2xy)) == ExtensionSpec(F2xy)
    assert reduce_to_exponent_one(spec(F2xy, ("x^2*y", 2))) == spec(F2xy, ("x^2*y", 1))


def test_extension_validation(F2xy):
    with pytest.raises(UsageError):
        spec(F2xy, ("0", 1))
    with pytest.raises(UsageError):
        spec(F2xy, ("x", 0))


def test_extension_rendering_and_json(F2xy):
    E = spec(F2xy, ("x", 2), ("y", 1))
    assert str(E) == "F(x^(1/4), y^(1/2))"
    assert E.to_json() == {"adjoined": [["x", 2], ["y", 1]]}
    assert ExtensionSpec.from_json(F2xy, E.to_json()) == E
    assert str(ExtensionSpec(F2xy)) == "F"
    assert str(spec(F2xy, ("x*y+1", 1))) == "F((x*y+1)^(1/2))"
    with pytest.raises(UsageError):
        ExtensionSpec.from_json(F2xy, {"adjoin": []})


@given(st.data())
def test_extension_json_roundtrip(data):
    K = data.draw(small_fields)
    pairs = [(data.draw(monomials(K)) + data.draw(st.sampled_from([0, 1])), data.draw(st.integers(1, 3)))
             for _ in range(data.draw(st.integers(0, 3)))]
    pairs = [(a, n) for a, n in pairs if not a.is_zero()]
    E = ExtensionSpec(K, pairs)
    assert ExtensionSpec.from_json(K, E.to_json()) == E


# ---------------------------------------------------------------------------
# extended_core


def test_extended_core_examples(F2xy):
    pi = quasi_pfister([F2xy("x"), F2xy("y")])
    rd = extended_core(pi, spec(F2xy, ("x", 1)))
    assert rd.defect == 2 and rd.anisotropic_dim == 2
    assert rd.representatives == (F2xy(1), F2xy("y"))
    assert rd.pbasis_used == (F2xy("x"),)
    K = F(2, "x")
    assert extended_core(form(K, 1, "x"), spec(K, ("x", 2))).defect == 1


def test_extended_core_dependent_generators():
    K = FieldDescriptor(2, ["a1", "a2", "a3", "b1"])
    phi = form(K, 1, "a1", "a2", "a3")
    E = spec(K, ("b1", 1), ("(a1*b1+a3)/a2", 1))
    assert decompose(phi).defect == 0
    assert extended_core(phi, E).defect >= 1
    assert extended_core(phi, E, method="general").defect == extended_core(phi, E).defect


def test_pth_power_generators_are_dropped(F2xy):
    phi = form(F2xy, 1, "x", "y")
    rd = extended_core(phi, spec(F2xy, ("x^2", 1), ("y^2+1", 2)))
    assert rd.pbasis_used == () and rd.defect == 0


def test_dependent_generators_are_dropped(F2xy):
    rd = extended_core(form(F2xy, 1, "x"), spec(F2xy, ("x", 1), ("x^3", 1), ("x*y^2", 1)))
    assert rd.pbasis_used == (F2xy("x"),) and rd.defect == 1


@given(st.data())
def test_trivial_extension_is_decompose(data):
    K = data.draw(small_fields)
    phi = data.draw(forms(K, 0, 4))
    rd = extended_core(phi, ExtensionSpec(K))
    dec = decompose(phi)
    assert rd.defect == dec.defect and rd.anisotropic_dim == dec.anisotropic_part.dim
    assert RepresentedSpace.spanned_by(K, rd.representatives) == RepresentedSpace.spanned_by(
        K, dec.anisotropic_part
    )


@given(st.data())
def test_defect_matches_sympy_tensor_oracle(data):
    K = data.draw(st.sampled_from([F(2, "x,y,z"), F(3, "x,y")]))
    phi = data.draw(forms(K, 1, 3))
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(0, 2)))]
    E = ExtensionSpec.simple(K, gens)
    c = extract_p_basis(gens)
    prod = tensor(phi, quasi_pfister(c, K))
    nonzero = [str(u) for u in prod if not u.is_zero()]
    rank = oracle_fp_rank(nonzero, K.variables, K.p) if nonzero else 0
    iql = prod.dim - rank
    assert iql % K.p ** len(c) == 0
    assert extended_core(phi, E, method="general").defect == iql // K.p ** len(c)


@given(st.data())
def test_monotone_in_generators(data):
    K = data.draw(small_fields)
    phi = data.draw(forms(K, 1, 4, monomial=data.draw(st.booleans())))
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(0, 3)))]
    prev = -1
    for i in range(len(gens) + 1):
        d = extended_core(phi, ExtensionSpec.simple(K, gens[:i])).defect
        assert d >= prev
        prev = d


@given(st.data())
def test_pth_powers_change_nothing(data):
    K = data.draw(small_fields)
    phi = data.draw(forms(K, 1, 4))
    gens = [data.draw(monomials(K, 2)) ** K.p for _ in range(data.draw(st.integers(1, 2)))]
    assert extended_core(phi, ExtensionSpec.simple(K, gens)).defect == decompose(phi).defect


@given(st.data())
def test_representatives_are_a_kp_basis(data):
    K = data.draw(small_fields)
    phi = data.draw(forms(K, 1, 4))
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(1, 2)))]
    E = ExtensionSpec.simple(K, gens)
    rd = extended_core(phi, E)
    assert len(rd.representatives) == rd.anisotropic_dim == phi.dim - rd.defect
    assert all(represents_over(QuasiPForm(K, rd.representatives), u, E) for u in phi)
    assert is_isometric_over(QuasiPForm(K, rd.representatives), QuasiPForm(K, rd.representatives), E)
    # the representatives are K^p-independent
    span = KpSpan(K, rd.pbasis_used, monomial=False)
    assert all(span.add(u) for u in rd.representatives)


# ---------------------------------------------------------------------------
# values over a simple extension


def test_values_examples():
    K = F(2, "x")
    assert values_over_simple_ext(form(K, 1), K("x")) == RepresentedSpace(K, [K(1), K("x")])
    assert values_over_simple_ext(form(K, 1, "x"), K("x")) == RepresentedSpace(K, [K(1), K("x")])
    K2 = F(2)
    D = values_over_simple_ext(form(K2, 1, "y"), K2("x"))
    assert D == RepresentedSpace(K2, [K2(1), K2("x"), K2("y"), K2("x*y")])
    with pytest.raises(UsageError):
        values_over_simple_ext(form(K, 1), K("x^2+1"))


def test_isometry_over_extension(F2xy):
    E = spec(F2xy, ("x", 1))
    assert is_isometric_over(form(F2xy, 1, "y"), form(F2xy, "x", "y"), E)
    assert not is_isometric_over(form(F2xy, 1, "y"), form(F2xy, 1, "x*y"), ExtensionSpec(F2xy))
    assert is_isometric_over(form(F2xy, 1, "y"), form(F2xy, 1, "x*y"), E)


# ---------------------------------------------------------------------------
# the direct oracle in L


def test_direct_examples():
    K = F(2, "x")
    assert direct_defect_modular(form(K, 1, "x"), spec(K, ("x", 2))) == 1
    K2 = F(2)
    assert direct_defect_modular(form(K2, 1, "x", "y", "x*y"), spec(K2, ("x", 2))) == 2
    assert direct_defect_modular(form(K2, 1, "x"), spec(K2, ("y", 2))) == 0
    with pytest.raises(UsageError):
        direct_defect_modular(form(K2, 1), spec(K2, ("x", 1), ("x^3", 1)))


def test_direct_non_monomial():
    K = F(3)
    phi = form(K, 1, "x+y", "x*y+y^3")
    E = spec(K, ("x+y", 2))
    assert direct_defect_modular(phi, E) == extended_core(phi, E).defect == 1


@given(st.data())
def test_direct_oracle_agrees(data):
    K = data.draw(st.sampled_from([F(2, "x"), F(2), F(3, "x"), F(3)]))
    phi = data.draw(forms(K, 1, 3))
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(1, 2)))]
    gens = [g for g in gens if not g.as_monomial() or any(e % K.p for e in g.as_monomial()[1])]
    assume(gens and is_p_independent(gens))
    n = [data.draw(st.integers(1, 3 if K.p == 2 else 2)) for _ in gens]
    assume(sum(n) <= 4)
    E = ExtensionSpec(K, list(zip(gens, n)))
    assert direct_defect_modular(phi, E) == extended_core(phi, reduce_to_exponent_one(E)).defect


@given(st.data())
def test_equivalence_triple(data):
    K = data.draw(st.sampled_from([F(2), F(3, "x")]))
    phi = data.draw(forms(K, 1, 3))
    assume(decompose(phi).defect == 0)
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(1, 2)))]
    assume(is_p_independent(gens))
    E = ExtensionSpec(K, [(g, data.draw(st.integers(1, 2))) for g in gens])
    c = extract_p_basis(gens)
    iso_tensor = not is_anisotropic(tensor(phi, quasi_pfister(c, K)))
    assert iso_tensor == (extended_core(phi, E).defect > 0) == (direct_defect_modular(phi, E) > 0)


def test_tensor_defect_monomial_matches_general():
    K = F(3)
    phi = form(K, 1, "x", "x^2*y", "y^4")
    c = (K("x*y"),)
    assert tensor_defect(phi, c) == tensor_defect(phi, c, method="general")
