import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qlp.exactfield import FieldDescriptor, RatFunc
from qlp.pform import QuasiPForm

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "qlp", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qlp")

VARS = ("x", "y", "z")


def F(p, names="x,y"):
    return FieldDescriptor(p, [v for v in names.split(",") if v])


@pytest.fixture
def F2xy():
    return F(2, "x,y")


@pytest.fixture
def F2xyz():
    return F(2, "x,y,z")


@pytest.fixture
def F3xy():
    return F(3, "x,y")


fields = st.builds(
    lambda p, m: FieldDescriptor(p, VARS[:m]),
    st.sampled_from([2, 3, 5]),
    st.integers(1, 3),
)


@st.composite
def polynomials(draw, field, max_degree=2, max_terms=3, nonzero=True):
    m = field.nvars
    terms = draw(
        st.lists(
            st.tuples(
                st.lists(st.integers(0, max_degree), min_size=m, max_size=m),
                st.integers(1, field.p - 1),
            ),
            min_size=1 if nonzero else 0,
            max_size=max_terms,
        )
    )
    total = RatFunc.constant(field, 0)
    for exps, c in terms:
        total = total + RatFunc.monomial(field, exps, c)
    if nonzero and total.is_zero():
        total = RatFunc.constant(field, 1)
    return total


@st.composite
def elements(draw, field, max_degree=2, nonzero=False):
    num = draw(polynomials(field, max_degree, nonzero=nonzero))
    if draw(st.booleans()):
        num = num / draw(polynomials(field, 1, 2))
    return num


@st.composite
def monomials(draw, field, max_exp=3):
    exps = draw(st.lists(st.integers(0, max_exp), min_size=field.nvars, max_size=field.nvars))
    return RatFunc.monomial(field, exps, draw(st.integers(1, field.p - 1)))


@st.composite
def forms(draw, field, min_dim=0, max_dim=5, monomial=False):
    n = draw(st.integers(min_dim, max_dim))
    coeffs = []
    for _ in range(n):
        if coeffs and draw(st.integers(0, 3)) == 0:
            # a coefficient that is F^p-dependent on earlier ones
            u = draw(monomials(field, 1))
            c = u ** field.p * draw(st.sampled_from(coeffs))
        else:
            c = draw(monomials(field)) if monomial else draw(elements(field, nonzero=True))
        coeffs.append(c)
    return QuasiPForm(field, coeffs)
