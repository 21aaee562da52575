"""The splitting table of <<a1,a2,a3,a4>> (+) d<1,a1,a2,a3> over F_p(a1,a2,a3,a4,d).

Rows are indexed by p^k (k = 0..4), columns by l = 0..4; the live cell (k, l)
holds an extension realizing dimension p^k + l and the anisotropic part
there.  Every live cell is checked through extended_core before it is
emitted.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..errors import UsageError, VerificationError
from ..exactfield import FieldDescriptor, RatFunc, is_prime
from ..extension import ExtensionSpec, extended_core, is_isometric_over
from ..pform import QuasiPForm, orthogonal_sum, quasi_pfister, scale
from ..splitting import NeighborInput, lambda_choices, neighbor_pattern

N, S = 4, 3
VARIABLES = ("a1", "a2", "a3", "a4", "d")


@dataclass(frozen=True)
class Cell:
    k: int
    l: int
    label: str  # D_k, E_{k,l}, G_{k,l} or X
    spec: ExtensionSpec | None
    form_text: str
    form: QuasiPForm | None
    dim: int | None
    verified: bool

    @property
    def live(self) -> bool:
        return self.spec is not None


def _pf_text(names):
    # the 0-fold quasi-Pfister form is <1>
    return "<<" + ",".join(names) + ">>" if names else "<1>"


def _diag_text(items):
    return "<" + ",".join(items) + ">"


def _mono_text(names, lam):
    parts = []
    for name, e in zip(names, lam):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _cell(field: FieldDescriptor, inp: NeighborInput, k: int, l: int) -> Cell:
    """Witness field and expected anisotropic part of cell (k, l)."""
    p = field.p
    a = field.gens()[:N]
    names = VARIABLES[:N]
    d = inp.d
    one = RatFunc.constant(field, 1)

    def pf(idx):
        return quasi_pfister([a[i - 1] for i in idx], field), _pf_text([names[i - 1] for i in idx])

    if l == 0:
        # D_k = F(a_1, ..., a_{n-k}, d); the part <<a_{n-k+1}, ..., a_n>> survives
        label = f"D_{k}"
        spec = ExtensionSpec.simple(field, list(a[: N - k]) + [d])
        form, text = pf(range(N - k + 1, N + 1))
    elif l <= k + 1:
        label = f"E_{{{k},{l}}}"
        if (k, l) == (N, S + 1):
            spec = ExtensionSpec(field)
        else:
            spec = ExtensionSpec.simple(field, a[l - 1 : N - (k - l) - 1])
        idx = list(range(1, l)) + list(range(N - (k - l), N + 1))
        pi_part, pi_text = pf(idx)
        sig = [one] + list(a[: l - 1])
        sig_text = ["1"] + list(names[: l - 1])
        form = orthogonal_sum(pi_part, scale(d, QuasiPForm(field, sig)))
        text = f"{pi_text} (+) d*{_diag_text(sig_text)}"
    else:
        label = f"G_{{{k},{l}}}"
        lams = lambda_choices(p, k, l - k - 1)
        roots = []
        sig = [one] + list(a[:k])
        sig_text = ["1"] + list(names[:k])
        for j, lam in enumerate(lams):
            num = one
            for g, e in zip(a[:k], lam):
                num = num * g ** e
            roots.append(num / a[k + j])
            sig.append(num)
            sig_text.append(_mono_text(names[:k], lam))
        spec = ExtensionSpec.simple(field, roots + list(a[l - 1 :]))
        pi_part, pi_text = pf(range(1, k + 1))
        form = orthogonal_sum(pi_part, scale(d, QuasiPForm(field, sig)))
        text = f"{pi_text} (+) d*{_diag_text(sig_text)}"
    return Cell(k, l, label, spec, text, form, p ** k + l, False)


def _verify(phi: QuasiPForm, cell: Cell) -> Cell:
    rd = extended_core(phi, cell.spec)
    if rd.anisotropic_dim != cell.dim:
        raise VerificationError(
            f"cell (p^{cell.k}, {cell.l}) {cell.label}: dimension {rd.anisotropic_dim}, expected {cell.dim}"
        )
    if extended_core(cell.form, cell.spec).defect:
        raise VerificationError(f"cell (p^{cell.k}, {cell.l}): {cell.form_text} is isotropic over {cell.spec}")
    if not is_isometric_over(cell.form, QuasiPForm(phi.field, rd.representatives), cell.spec):
        raise VerificationError(
            f"cell (p^{cell.k}, {cell.l}): anisotropic part is not {cell.form_text} over {cell.spec}"
        )
    return Cell(cell.k, cell.l, cell.label, cell.spec, cell.form_text, cell.form, cell.dim, True)


@dataclass(frozen=True)
class Table1:
    p: int
    cells: tuple

    @property
    def live_cells(self):
        return [c for c in self.cells if c.live]

    @property
    def dims(self):
        return sorted({c.dim for c in self.live_cells})


def emit_table1(p: int, max_degree: int | None = None) -> Table1:
    if not isinstance(p, int) or not is_prime(p):
        raise UsageError(f"verify-table1 needs a prime, got {p!r}")
    kwargs = {"max_prime": max(p, 31)}
    if max_degree is not None:
        kwargs["max_degree"] = max_degree
    field = FieldDescriptor(p, VARIABLES, **kwargs)
    a = field.gens()
    inp = NeighborInput(a[:N], S, a[N], field)
    live = set(neighbor_pattern(p, N, S))
    cells = []
    for k in range(N + 1):
        for l in range(S + 2):
            if (k, l) in live:
                cells.append(_verify(inp.phi, _cell(field, inp, k, l)))
            else:
                cells.append(Cell(k, l, "X", None, "X", None, None, False))
    return Table1(p, tuple(cells))


CSV_HEADER = ("row", "l", "cell", "field", "anisotropic_part", "dim", "verified")


def table1_csv(table: Table1) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in table.cells:
        if c.live:
            w.writerow((f"p^{c.k}", c.l, c.label, str(c.spec), c.form_text, c.dim, "yes"))
        else:
            w.writerow((f"p^{c.k}", c.l, "X", "X", "X", "", ""))
    return buf.getvalue()


def table1_json(table: Table1) -> dict:
    return {
        "command": "verify-table1",
        "p": table.p,
        "dims": table.dims,
        "cells": [
            {
                "k": c.k,
                "l": c.l,
                "label": c.label,
                "field": str(c.spec) if c.live else None,
                "anisotropic_part": c.form_text if c.live else None,
                "dim": c.dim,
                "verified": c.verified,
            }
            for c in table.cells
        ],
        "verified": all(c.verified for c in table.live_cells),
    }


def table1_text(table: Table1) -> str:
    lines = [f"Splitting of <<a1,a2,a3,a4>> (+) d*<1,a1,a2,a3> over GF({table.p})(a1,a2,a3,a4,d)"]
    for c in table.cells:
        head = f"p^{c.k} + {c.l}"
        if c.live:
            lines.append(f"  {head:<9} {c.label:<8} dim {c.dim:<4} {c.spec}")
            lines.append(f"  {'':<9} {'':<8} {'':<8} {c.form_text}")
        else:
            lines.append(f"  {head:<9} X")
    lines.append(f"live cells: {len(table.live_cells)}, all verified")
    return "\n".join(lines)

