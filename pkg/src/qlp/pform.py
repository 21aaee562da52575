"""Quasilinear p-forms  phi = <c_1, ..., c_n>,  phi(v) = sum c_i v_i^p.

The set D_F(phi) of represented values is the F^p-span of the coefficients,
so every question about a single form (defect, anisotropic part, values,
isometry) is F^p-linear algebra on coefficient coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import UsageError
from .exactfield import FieldDescriptor, RatFunc
from .exactfield.span import FpSpan


def _coerce(field: FieldDescriptor, c) -> RatFunc:
    if isinstance(c, RatFunc):
        field.check(c.field)
        return c
    return field(c)


class QuasiPForm:
    """A diagonal p-form given by its coefficient sequence (zeros allowed)."""

    __slots__ = ("field", "coefficients")

    def __init__(self, field: FieldDescriptor, coefficients=()):
        self.field = field
        self.coefficients = tuple(_coerce(field, c) for c in coefficients)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __len__(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def value(self, v) -> RatFunc:
        """phi(v) = sum c_i v_i^p, evaluated exactly."""
        v = list(v)
        if len(v) != self.dim:
            raise UsageError(f"vector of length {len(v)} for a form of dimension {self.dim}")
        p = self.field.p
        total = RatFunc.constant(self.field, 0)
        for c, x in zip(self.coefficients, v):
            x = _coerce(self.field, x)
            if not c.is_zero() and not x.is_zero():
                total = total + c * x ** p
        return total

    def is_monomial(self) -> bool:
        """True when every nonzero coefficient is a unit times a Laurent monomial."""
        return all(c.is_zero() or c.as_monomial() is not None for c in self.coefficients)

    # operators: (+) is orthogonal sum, (*) is tensor or scaling
    def __add__(self, other):
        if not isinstance(other, QuasiPForm):
            return NotImplemented
        return orthogonal_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, QuasiPForm):
            return tensor(self, other)
        if isinstance(other, (RatFunc, int)):
            return scale(_coerce(self.field, other), self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFunc, int)):
            return scale(_coerce(self.field, other), self)
        return NotImplemented

    def __eq__(self, other):
        """Structural equality of coefficient sequences (not isometry)."""
        if not isinstance(other, QuasiPForm):
            return NotImplemented
        return self.field == other.field and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.field, self.coefficients))

    def __str__(self):
        return "<" + ",".join(str(c) for c in self.coefficients) + ">"

    def __repr__(self):
        return f"QuasiPForm({self}, {self.field})"


def orthogonal_sum(phi: QuasiPForm, psi: QuasiPForm) -> QuasiPForm:
    phi.field.check(psi.field)
    return QuasiPForm(phi.field, phi.coefficients + psi.coefficients)


def tensor(phi: QuasiPForm, psi: QuasiPForm) -> QuasiPForm:
    """All products a_i * b_j in row-major order (i outer, j inner)."""
    phi.field.check(psi.field)
    return QuasiPForm(phi.field, [a * b for a in phi for b in psi])


def compose(kind: str, phi: QuasiPForm, psi: QuasiPForm) -> QuasiPForm:
    if kind in ("orthogonal-sum", "sum", "+"):
        return orthogonal_sum(phi, psi)
    if kind in ("tensor", "*"):
        return tensor(phi, psi)
    raise UsageError(f"unknown composition {kind!r}")


def scale(c: RatFunc, phi: QuasiPForm) -> QuasiPForm:
    c = _coerce(phi.field, c)
    if c.is_zero():
        raise UsageError("scaling a form by zero")
    return QuasiPForm(phi.field, [c * a for a in phi])


def quasi_pfister(gens, field: FieldDescriptor | None = None) -> QuasiPForm:
    """<<a_1, ..., a_n>> = <1, a_1, ..., a_1^(p-1)> (x) ... (x) <1, a_n, ..., a_n^(p-1)>."""
    gens = list(gens)
    if field is None:
        if not gens or not isinstance(gens[0], RatFunc):
            raise UsageError("quasi_pfister needs a field when no RatFunc generator is given")
        field = gens[0].field
    gens = [_coerce(field, a) for a in gens]
    if any(a.is_zero() for a in gens):
        raise UsageError("quasi-Pfister generators must be nonzero")
    p = field.p
    form = QuasiPForm(field, [RatFunc.constant(field, 1)])
    for a in gens:
        powers = [RatFunc.constant(field, 1)]
        for _ in range(p - 1):
            powers.append(powers[-1] * a)
        form = tensor(form, QuasiPForm(field, powers))
    return form


# ---------------------------------------------------------------------------
# anisotropic part and defect


@dataclass(frozen=True)
class Decomposition:
    """phi = phi_an  (+)  defect x <0>, with witnesses spanning the isotropic subspace.

    Each witness is normalized to have entry 1 at the coefficient it
    eliminates, so the witnesses are in echelon form and the decomposition
    is unique for a given coefficient order.
    """

    anisotropic_part: QuasiPForm
    defect: int
    isotropy_witnesses: tuple
    anisotropic_indices: tuple = dc_field(default=())


def _normalized_witness(dim, entries, pivot, field):
    zero = RatFunc.constant(field, 0)
    lead = entries[pivot]
    vec = [zero] * dim
    for i, w in entries.items():
        vec[i] = w / lead
    return tuple(vec)


def _decompose_general(phi: QuasiPForm) -> Decomposition:
    field = phi.field
    dim = phi.dim
    span = FpSpan(field)
    dependent = {}
    for i, c in enumerate(phi):
        if c.is_zero():
            dependent[i] = None
        elif not span.add(c, key=i):
            dependent[i] = True
    relations = iter(span.relations())
    witnesses = []
    for i in sorted(dependent):
        if dependent[i] is None:
            entries = {i: RatFunc.constant(field, 1)}
        else:
            entries = next(relations)
        witnesses.append(_normalized_witness(dim, entries, i, field))
    keep = tuple(span.basis_keys)
    return Decomposition(
        QuasiPForm(field, [phi[i] for i in keep]), dim - len(keep), tuple(witnesses), keep
    )


def _decompose_monomial(phi: QuasiPForm) -> Decomposition:
    field = phi.field
    p = field.p
    dim = phi.dim
    zero = RatFunc.constant(field, 0)
    first = {}  # residue class -> (index, unit, exponents)
    keep = []
    witnesses = []
    for j, c in enumerate(phi):
        if c.is_zero():
            vec = [zero] * dim
            vec[j] = RatFunc.constant(field, 1)
            witnesses.append(tuple(vec))
            continue
        unit, exps = c.as_monomial()
        cls = tuple(e % p for e in exps)
        if cls not in first:
            first[cls] = (j, unit, exps)
            keep.append(j)
            continue
        i, u0, e0 = first[cls]
        # c_j = (c_j/c_i) x^(p D) c_i  with D = (e_j - e_i)/p; units are p-th powers of themselves
        shift = tuple((a - b) // p for a, b in zip(exps, e0))
        w = RatFunc.monomial(field, shift, -unit * pow(u0, -1, p))
        vec = [zero] * dim
        vec[i] = w
        vec[j] = RatFunc.constant(field, 1)
        witnesses.append(tuple(vec))
    keep = tuple(keep)
    return Decomposition(
        QuasiPForm(field, [phi[i] for i in keep]), dim - len(keep), tuple(witnesses), keep
    )


def decompose(phi: QuasiPForm, method: str = "auto") -> Decomposition:
    """Defect, anisotropic part and isotropy witnesses of ``phi``.

    The anisotropic part keeps the coefficients that are F^p-independent of
    the ones before them.  ``method`` selects ``general`` (coordinate
    elimination), ``monomial`` (residue bookkeeping) or ``auto``.
    """
    if method == "general":
        return _decompose_general(phi)
    if method == "monomial":
        if not phi.is_monomial():
            raise UsageError("monomial path requested for a form with non-monomial coefficients")
        return _decompose_monomial(phi)
    if method != "auto":
        raise UsageError(f"unknown decomposition method {method!r}")
    if phi.is_monomial():
        return _decompose_monomial(phi)
    return _decompose_general(phi)


def defect(phi: QuasiPForm) -> int:
    return decompose(phi).defect


def anisotropic_part(phi: QuasiPForm) -> QuasiPForm:
    return decompose(phi).anisotropic_part


def is_anisotropic(phi: QuasiPForm) -> bool:
    return decompose(phi).defect == 0


# ---------------------------------------------------------------------------
# represented values


class RepresentedSpace:
    """A finite-dimensional F^p-subspace of F given by an F^p-basis."""

    __slots__ = ("field", "basis", "_span")

    def __init__(self, field: FieldDescriptor, basis=()):
        self.field = field
        span = FpSpan(field)
        kept = []
        for b in basis:
            b = _coerce(field, b)
            if b.is_zero() or not span.add(b):
                raise UsageError(f"{b} is F^p-dependent on the previous basis elements")
            kept.append(b)
        self.basis = tuple(kept)
        self._span = span

    @classmethod
    def spanned_by(cls, field: FieldDescriptor, elements) -> "RepresentedSpace":
        """Greedy first-come basis of the F^p-span of ``elements``."""
        span = FpSpan(field)
        for a in elements:
            a = _coerce(field, a)
            if not a.is_zero():
                span.add(a)
        out = cls.__new__(cls)
        out.field = field
        out.basis = tuple(span.basis)
        out._span = span
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def contains(self, a) -> bool:
        return self._span.contains(_coerce(self.field, a))

    __contains__ = contains

    def express(self, a):
        """Tuple v with a = sum v_i^p * basis_i, or None when a is outside the space."""
        coeffs = self._span.express(_coerce(self.field, a))
        if coeffs is None:
            return None
        return tuple(coeffs[k] for k in self._span.basis_keys)

    def is_subspace_of(self, other: "RepresentedSpace") -> bool:
        self.field.check(other.field)
        return self.dim <= other.dim and all(other.contains(b) for b in self.basis)

    def same_space(self, other: "RepresentedSpace") -> bool:
        return self.dim == other.dim and self.is_subspace_of(other)

    def __eq__(self, other):
        if not isinstance(other, RepresentedSpace):
            return NotImplemented
        return self.field == other.field and self.same_space(other)

    __hash__ = None

    def __str__(self):
        return "span{" + ",".join(str(b) for b in self.basis) + "}"

    def __repr__(self):
        return f"RepresentedSpace({self}, {self.field})"


def represented_space(phi: QuasiPForm) -> RepresentedSpace:
    return RepresentedSpace.spanned_by(phi.field, phi.coefficients)


def representation(phi: QuasiPForm, d):
    """A vector v with phi(v) = d, or None when d is not represented."""
    field = phi.field
    d = _coerce(field, d)
    zero = RatFunc.constant(field, 0)
    if d.is_zero():
        return tuple(zero for _ in phi)
    span = FpSpan(field)
    for i, c in enumerate(phi):
        if not c.is_zero():
            span.add(c, key=i)
    coeffs = span.express(d)
    if coeffs is None:
        return None
    return tuple(coeffs.get(i, zero) for i in range(phi.dim))


def represents(phi: QuasiPForm, d) -> bool:
    """True iff d lies in D_F(phi); see :func:`representation` for a vector."""
    d = _coerce(phi.field, d)
    if d.is_zero():
        return True
    span = FpSpan(phi.field)
    for c in phi:
        if not c.is_zero():
            span.add(c)
    return span.contains(d)


def is_isometric(phi: QuasiPForm, psi: QuasiPForm) -> bool:
    phi.field.check(psi.field)
    if phi.dim != psi.dim:
        return False
    return represented_space(phi).same_space(represented_space(psi))


def is_subform(sigma: QuasiPForm, phi: QuasiPForm) -> bool:
    """Is the anisotropic form ``sigma`` a subform of ``phi`` (up to isometry)?"""
    sigma.field.check(phi.field)
    if not is_anisotropic(sigma):
        raise UsageError(f"is_subform expects an anisotropic form, got {sigma}")
    space = represented_space(phi)
    return sigma.dim <= space.dim and all(space.contains(c) for c in sigma)


def is_similar_with(phi: QuasiPForm, psi: QuasiPForm, c) -> bool:
    c = _coerce(phi.field, c)
    if c.is_zero():
        raise UsageError("similarity factor must be nonzero")
    return is_isometric(scale(c, phi), psi)
