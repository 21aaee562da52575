"""p-independence, p-bases, norm fields and minimal forms.

For a p-independent set B the F^p-span of the monomials prod b^e with
0 <= e < p is the field F^p(B); the greedy p-basis extraction below keeps
that span up to date and uses it as the membership test.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError, VerificationError
from .exactfield import FieldDescriptor, RatFunc, frobenius_power
from .exactfield.modp import in_row_space, rank_mod_p, rref_mod_p
from .exactfield.span import FpSpan
from .pform import (
    QuasiPForm,
    RepresentedSpace,
    decompose,
    is_anisotropic,
    quasi_pfister,
    tensor,
)


def _checked(S):
    S = list(S)
    for a in S:
        if not isinstance(a, RatFunc):
            raise UsageError(f"{a!r} is not a field element")
        if a.is_zero():
            raise UsageError("p-independence is only defined for nonzero elements")
    if S:
        for a in S[1:]:
            S[0].field.check(a.field)
    return S


def _residues(S, p):
    out = []
    for a in S:
        mono = a.as_monomial()
        if mono is None:
            return None
        out.append([e % p for e in mono[1]])
    return out


def is_p_independent(S, method: str = "auto") -> bool:
    """True iff <<S>> is anisotropic."""
    S = _checked(S)
    if not S:
        return True
    field = S[0].field
    res = _residues(S, field.p) if method in ("auto", "monomial") else None
    if res is not None:
        return rank_mod_p(res, field.p) == len(S)
    if method == "monomial":
        raise UsageError("monomial path requested for non-monomial elements")
    return decompose(quasi_pfister(S, field), method="general").defect == 0


def p_basis_indices(S, method: str = "auto"):
    """Indices of the greedy first-come p-basis of F^p(S) inside S."""
    S = _checked(S)
    if not S:
        return ()
    field = S[0].field
    p = field.p
    res = _residues(S, p) if method in ("auto", "monomial") else None
    keep = []
    if res is not None:
        basis, pivots = (), ()
        for i, r in enumerate(res):
            if not in_row_space(basis, pivots, r, p):
                keep.append(i)
                basis, pivots = rref_mod_p([res[j] for j in keep], p)
        return tuple(keep)
    if method == "monomial":
        raise UsageError("monomial path requested for non-monomial elements")
    span = FpSpan(field)
    monomials = [RatFunc.constant(field, 1)]
    span.add(monomials[0])
    for i, a in enumerate(S):
        if span.full or span.contains(a):
            continue
        keep.append(i)
        new = []
        power = RatFunc.constant(field, 1)
        for _ in range(p - 1):
            power = power * a
            new.extend(m * power for m in monomials)
        for m in new:
            span.add(m)
        monomials.extend(new)
    return tuple(keep)


def extract_p_basis(S, method: str = "auto"):
    """Greedy subsequence B of S, p-independent, with F^p(B) = F^p(S)."""
    S = list(S)
    return [S[i] for i in p_basis_indices(S, method)]


def degree_over_fp(S) -> int:
    """[F^p(S) : F^p] as an exact integer."""
    S = _checked(S)
    if not S:
        return 1
    return S[0].field.p ** len(p_basis_indices(S))


def in_fp_field(a: RatFunc, basis) -> bool:
    """Membership of ``a`` in F^p(basis) for a p-independent ``basis``."""
    field = a.field
    span = FpSpan(field)
    for m in quasi_pfister(basis, field):
        span.add(m)
    return span.contains(a)


# ---------------------------------------------------------------------------
# norm fields


@dataclass(frozen=True)
class NormData:
    """A p-basis of N_F(phi) over F^p, ndeg = p^n and the norm form <<generators>>.

    ``scalar`` is the coefficient a_0 the ratios were taken against and
    ``indices`` locate the generators' numerators in the anisotropic part.
    """

    generators: tuple
    norm_degree_exponent: int
    norm_form: QuasiPForm
    scalar: RatFunc
    indices: tuple

    @property
    def norm_degree(self) -> int:
        return self.scalar.field.p ** self.norm_degree_exponent


def norm_data(phi: QuasiPForm) -> NormData:
    an = decompose(phi).anisotropic_part
    if an.dim == 0:
        raise UsageError("the norm field of a totally isotropic form is undefined")
    a0 = an[0]
    ratios = [a / a0 for a in an[1:]]
    idx = p_basis_indices(ratios)
    gens = tuple(ratios[i] for i in idx)
    return NormData(
        generators=gens,
        norm_degree_exponent=len(gens),
        norm_form=quasi_pfister(gens, phi.field),
        scalar=a0,
        indices=tuple(i + 1 for i in idx),
    )


def _require_anisotropic(phi, what):
    if not is_anisotropic(phi):
        raise UsageError(f"{what} expects an anisotropic form, got {phi}")


def is_minimal(phi: QuasiPForm) -> bool:
    """ndeg phi = p^(dim phi - 1)."""
    _require_anisotropic(phi, "is_minimal")
    if phi.dim == 0:
        raise UsageError("minimality of the zero-dimensional form is undefined")
    return norm_data(phi).norm_degree_exponent == phi.dim - 1


def minimal_subform(phi: QuasiPForm) -> QuasiPForm:
    """a_0 <1, b_1, ..., b_k> for the norm-field p-basis ratios b_j of phi_an."""
    nd = norm_data(phi)
    if nd.norm_degree_exponent == 0:
        raise UsageError("norm degree 1: no minimal subform of dimension >= 2")
    an = decompose(phi).anisotropic_part
    return QuasiPForm(phi.field, [an[0]] + [an[i] for i in nd.indices])


@dataclass(frozen=True)
class ProductAnisotropy:
    criterion_holds: bool
    product_anisotropic: bool


def product_anisotropy(phi: QuasiPForm, psi: QuasiPForm) -> ProductAnisotropy:
    """Compare ndeg(phi (x) psi) with ndeg phi * ndeg psi and test the product."""
    phi.field.check(psi.field)
    _require_anisotropic(phi, "product_anisotropy")
    _require_anisotropic(psi, "product_anisotropy")
    if phi.dim == 0 or psi.dim == 0:
        raise UsageError("product_anisotropy needs nonzero forms")
    prod = tensor(phi, psi)
    n_prod = norm_data(prod).norm_degree_exponent
    criterion = n_prod == norm_data(phi).norm_degree_exponent + norm_data(psi).norm_degree_exponent
    aniso = is_anisotropic(prod)
    if criterion and not aniso:
        raise VerificationError(f"multiplicative norm degrees but {phi} (x) {psi} is isotropic")
    return ProductAnisotropy(criterion, aniso)


def subspace_intersection(A: RepresentedSpace, B: RepresentedSpace) -> RepresentedSpace:
    """F^p-basis of A n B from the relations between the two stacked bases."""
    A.field.check(B.field)
    field: FieldDescriptor = A.field
    span = FpSpan(field)
    for i, a in enumerate(A.basis):
        span.add(a, key=("A", i))
    for j, b in enumerate(B.basis):
        span.add(b, key=("B", j))
    elements = []
    zero = RatFunc.constant(field, 0)
    for rel in span.relations():
        total = zero
        for key, w in rel.items():
            if key[0] == "A" and not w.is_zero():
                total = total + frobenius_power(w) * A.basis[key[1]]
        elements.append(total)
    return RepresentedSpace.spanned_by(field, elements)
