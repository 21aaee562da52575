import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import F, monomials
from qlp.errors import UsageError, VerificationError
from qlp.exactfield import FieldDescriptor
from qlp.extension import ExtensionSpec, extended_core, is_isometric_over
from qlp.pform import QuasiPForm, quasi_pfister
from qlp.pindep import is_p_independent
from qlp.splitting import (
    LowerBoundCheck,
    NeighborInput,
    SearchBudget,
    closed_form_set,
    fsp_minimal,
    fsp_neighbor,
    fsp_quasi_pfister,
    insep_tower,
    lambda_choices,
    neighbor_pattern,
    neighbor_split,
    neighbor_witness,
    pisp_lower_bound_check,
    pisp_search,
    verify_report,
)


def form(K, *cs):
    return QuasiPForm(K, [K(c) for c in cs])


def neighbor(p, n, s, names=None):
    names = names or [f"a{i}" for i in range(1, n + 1)]
    K = FieldDescriptor(p, names + ["d"])
    return NeighborInput([K(a) for a in names], s, K("d"))


# ---------------------------------------------------------------------------
# towers


def test_tower_examples(F2xy):
    t = insep_tower(form(F2xy, 1, "x", "y"))
    assert t.dims == (3, 2, 1)
    assert [str(s.spec) for s in t.stages] == ["F", "F(x^(1/2))", "F(x^(1/2), y^(1/2))"]
    assert insep_tower(form(F2xy, 1)).dims == (1,)
    assert insep_tower(quasi_pfister([F2xy("x"), F2xy("y")])).dims == (4, 2, 1)
    with pytest.raises(UsageError):
        insep_tower(form(F2xy, 1, "x", "x"))


def test_tower_scales_first_coefficient(F2xy):
    t = insep_tower(form(F2xy, "x", "x*y", "y"))
    assert t.dims[0] == 3 and t.dims[-1] == 1
    assert [s.defect for s in t.stages] == sorted({s.defect for s in t.stages})


@given(st.data())
def test_tower_defects_strictly_increase(data):
    K = data.draw(st.sampled_from([F(2, "x,y,z"), F(3, "x,y")]))
    gens = [data.draw(monomials(K, 2)) for _ in range(data.draw(st.integers(0, 3)))]
    assume(gens == [] or is_p_independent(gens))
    a0 = data.draw(monomials(K, 2))
    phi = QuasiPForm(K, [a0 * g for g in [K(1)] + gens])
    t = insep_tower(phi)
    defects = [s.defect for s in t.stages]
    assert all(a < b for a, b in zip(defects, defects[1:]))
    assert len(t.stages) == len(t.generators) + 1
    assert t.stages[0].spec == ExtensionSpec(K)


# ---------------------------------------------------------------------------
# search


def test_pisp_examples(F2xy, F2xyz):
    assert pisp_search(form(F2xy, 1, "x", "y")).dims == (1, 2, 3)
    K3 = F(3)
    assert pisp_search(quasi_pfister([K3("x"), K3("y")])).dims == (1, 3, 9)
    phi = quasi_pfister([F2xyz("x"), F2xyz("y")]) + form(F2xyz, "z", "x*z")
    r = pisp_search(phi)
    assert r.dims == (1, 2, 3, 4, 6) and r.label == "pisp" and r.complete
    verify_report(phi, r)


def test_pisp_isotropic_and_budget(F2xy):
    r = pisp_search(form(F2xy, "x", "x"))
    assert r.dims == (1,)
    r = pisp_search(form(F2xy, 0))
    assert r.dims == (0,)
    r = pisp_search(form(F2xy, 1, "x", "y"), SearchBudget(max_candidates=2))
    assert not r.complete


def test_pisp_extra_generators():
    K = FieldDescriptor(2, ["a1", "a2", "a3", "b1"])
    phi = form(K, 1, "a1", "a2", "a3")
    r = pisp_search(phi, SearchBudget(max_generators=2, extra=("b1", "(a1*b1+a3)/a2")))
    verify_report(phi, r)
    assert set(r.dims) <= {1, 2, 3, 4}


def test_verify_report_catches_bad_witness(F2xy):
    phi = form(F2xy, 1, "x", "y")
    r = pisp_search(phi)
    bad = dict(r.witnesses)
    bad[3] = ExtensionSpec.simple(F2xy, [F2xy("x")])
    with pytest.raises(VerificationError):
        verify_report(phi, type(r)(r.dims, bad, r.representatives, r.method, r.label))


# ---------------------------------------------------------------------------
# closed forms


def test_fsp_minimal_examples(F2xyz):
    K = F(2, "x")
    assert fsp_minimal(form(K, 1, "x")).dims == (1, 2)
    r = fsp_minimal(form(F2xyz, 1, "x", "y", "x*y*z"))
    assert r.dims == (1, 2, 3, 4) and r.label == "fsp"
    assert fsp_minimal(form(F(3), 1, "x", "y")).dims == (1, 2, 3)
    with pytest.raises(UsageError):
        fsp_minimal(form(F(2), 1, "x", "y", "x*y"))


def test_fsp_pfister_examples():
    K5 = F(5, "x")
    assert fsp_quasi_pfister([K5("x")]).dims == (1, 5)
    K2 = F(2)
    r = fsp_quasi_pfister([K2("x"), K2("y")])
    assert r.dims == (1, 2, 4)
    assert str(r.witnesses[1]) == "F(x^(1/2), y^(1/2))"
    K3 = F(3, "x,y,z")
    assert fsp_quasi_pfister([K3("x"), K3("y"), K3("z")]).dims == (1, 3, 9, 27)
    with pytest.raises(UsageError):
        fsp_quasi_pfister([K2("x"), K2("x*y^2")])


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)])
def test_closed_forms_match_search(p, m):
    K = FieldDescriptor(p, ["x", "y", "z"][:m])
    gens = [K(v) for v in K.variables]
    phi = QuasiPForm(K, [K(1)] + gens)
    assert pisp_search(phi).dims == fsp_minimal(phi).dims
    pi = quasi_pfister(gens)
    assert pisp_search(pi).dims == fsp_quasi_pfister(gens).dims


# ---------------------------------------------------------------------------
# neighbors


def test_neighbor_input_checks():
    K = F(2, "x,y,z")
    with pytest.raises(UsageError):
        NeighborInput([K("x"), K("x*y^2")], 1, K("z"))
    with pytest.raises(UsageError):
        NeighborInput([K("x"), K("y")], 3, K("z"))
    with pytest.raises(UsageError):
        NeighborInput([K("x"), K("y")], 1, K(0))
    # d = x*y is represented by pi: the sum is isotropic
    with pytest.raises(UsageError):
        NeighborInput([K("x"), K("y")], 1, K("x*y"))


def test_neighbor_split_examples():
    K = F(2, "x,y,z")
    inp = NeighborInput([K("x"), K("y")], 1, K("z"))
    r = neighbor_split(inp, ExtensionSpec.simple(K, [K("z")]))
    assert (r.case, r.defect, r.anisotropic_dim) == ("d-represented", 2, 4)
    r = neighbor_split(inp, ExtensionSpec.simple(K, [K("y")]))
    assert (r.case, r.defect, r.anisotropic_dim) == ("d-not-represented", 2, 4)
    rd = extended_core(form(K, 1, "x", "z", "x*z"), ExtensionSpec.simple(K, [K("y")]))
    assert rd.defect == 0
    r = neighbor_split(inp, ExtensionSpec(K))
    assert (r.defect, r.anisotropic_dim) == (0, 6)


def test_neighbor_pattern_sizes():
    assert len(neighbor_pattern(5, 4, 3)) == 16
    assert len(neighbor_pattern(2, 4, 3)) == 14
    assert closed_form_set(2, 2, 1) == [1, 2, 3, 4, 6]
    assert closed_form_set(2, 4, 3) == [1, 2, 3, 4, 6, 7, 8, 11, 12, 16, 20]


def test_fsp_neighbor_small():
    inp = neighbor(2, 2, 1)
    r = fsp_neighbor(inp)
    assert r.dims == (1, 2, 3, 4, 6)
    assert pisp_search(inp.phi).dims == r.dims


def test_fsp_neighbor_p2_n4_s3():
    r = fsp_neighbor(neighbor(2, 4, 3))
    assert r.dims == (1, 2, 3, 4, 6, 7, 8, 11, 12, 16, 20)


def test_fsp_neighbor_g24_at_p5():
    inp = neighbor(5, 4, 3)
    K = inp.field
    E = neighbor_witness(inp, 2, 4)
    assert str(E) == "F((a1*a2/a3)^(1/5), a4^(1/5))"
    rd = extended_core(inp.phi, E)
    assert rd.anisotropic_dim == 29
    expected = quasi_pfister([K("a1"), K("a2")]) + form(K, "d", "d*a1", "d*a2", "d*a1*a2")
    assert is_isometric_over(QuasiPForm(K, rd.representatives), expected, E)


def test_lambda_choices():
    assert lambda_choices(5, 1, 2) == [(2,), (3,)]
    assert lambda_choices(5, 2, 1) == [(1, 1)]
    with pytest.raises(AssertionError):
        lambda_choices(2, 1, 1)


@pytest.mark.parametrize(
    "p,n,s", [(2, 1, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2), (2, 3, 3), (3, 1, 1), (3, 2, 1), (3, 2, 2)]
)
def test_neighbor_search_equals_closed_form(p, n, s):
    inp = neighbor(p, n, s)
    closed = fsp_neighbor(inp)
    assert pisp_search(inp.phi).dims == closed.dims
    assert list(closed.dims) == closed_form_set(p, n, s)


# ---------------------------------------------------------------------------
# lower bound


def test_lower_bound_examples(F2xy, F2xyz):
    assert pisp_lower_bound_check(form(F2xy, 1, "x", "y")) == LowerBoundCheck(2, 3, True)
    assert pisp_lower_bound_check(form(F2xy, 1)) == LowerBoundCheck(0, 1, True)
    phi = quasi_pfister([F2xyz("x"), F2xyz("y")]) + form(F2xyz, "z", "x*z")
    lb = pisp_lower_bound_check(phi)
    assert lb.norm_exponent == 3 and lb.achieved >= 4 and lb.holds
    # totally isotropic forms: only the zero form remains
    assert pisp_lower_bound_check(form(F2xy, 0)) == LowerBoundCheck(0, 1, True)
