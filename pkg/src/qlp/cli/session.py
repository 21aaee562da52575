"""Execution of parsed statements and rendering of their results."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field as dc_field

from ..exactfield import RatFunc
from ..extension import ExtensionSpec, extended_core
from ..pform import QuasiPForm, decompose, is_isometric, is_subform, representation
from ..pindep import (
    extract_p_basis,
    is_minimal,
    is_p_independent,
    minimal_subform,
    norm_data,
)
from ..randomized import run_checks
from ..splitting import (
    NeighborInput,
    SearchBudget,
    fsp_minimal,
    fsp_neighbor,
    fsp_quasi_pfister,
    insep_tower,
    pisp_search,
    verify_report,
)
from .parser import PfisterForm, Statement, parse_program
from .table1 import CSV_HEADER, emit_table1, table1_csv, table1_json, table1_text


@dataclass
class Result:
    """Output of one statement in the three renderings.

    ``rows`` is the CSV body (header first); ``csv_text`` overrides it when a
    command has its own canonical CSV.  ``failed`` marks a completed command
    whose self-check did not pass.
    """

    command: str
    text: str
    data: dict
    rows: list = dc_field(default_factory=list)
    csv_text: str | None = None
    failed: str | None = None

    def render(self, mode: str) -> str:
        if mode == "json":
            return json.dumps(self.data, sort_keys=False)
        if mode == "csv":
            if self.csv_text is not None:
                return self.csv_text.rstrip("\n")
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.rows)
            return buf.getvalue().rstrip("\n")
        return self.text


def _kind(v):
    if isinstance(v, RatFunc):
        return "element"
    if isinstance(v, QuasiPForm):
        return "form"
    if isinstance(v, ExtensionSpec):
        return "extension"
    return type(v).__name__


def _strs(xs):
    return [str(x) for x in xs]


def _report_result(cmd, phi_text, report, extra_text=()):
    data = {"command": cmd, "form": phi_text}
    data.update(report.to_json())
    width = max(len(str(d)) for d in report.dims)
    lines = [f"{report.label} of {phi_text}: {{{', '.join(map(str, report.dims))}}}"]
    lines.extend(extra_text)
    for d in report.dims:
        lines.append(f"  {d:>{width}}  {report.witnesses[d]}")
    if not report.complete:
        lines.append("  search budget exhausted; the set may be incomplete")
    rows = [("dim", "witness", "representatives")]
    rows += [(d, str(report.witnesses[d]), " ".join(map(str, report.representatives[d]))) for d in report.dims]
    return Result(cmd, "\n".join(lines), data, rows)


class Session:
    """Field declaration, bindings and options shared by consecutive programs."""

    def __init__(self, max_degree: int | None = None, max_gens: int | None = None, seed: int = 0):
        self.field = None
        self.bindings = {}
        self.max_degree = max_degree
        self.max_gens = max_gens
        self.seed = seed

    def parse(self, source: str):
        statements, parser = parse_program(source, self.field, self.bindings, self.max_degree)
        self.field = parser.field
        return statements

    def run(self, source: str):
        """Parse the whole program, then execute statement by statement (a generator)."""
        for st in self.parse(source):
            res = self.execute(st)
            if res is not None:
                yield res

    # commands ---------------------------------------------------------------

    def execute(self, st: Statement) -> Result | None:
        handler = getattr(self, "_cmd_" + st.command.replace("-", "_"))
        return handler(*st.args, **st.options)

    def _cmd_field(self, field):
        return None

    def _cmd_let(self, name, value):
        return None

    def _cmd_show(self, value):
        text = str(value)
        return Result("show", text, {"command": "show", "kind": _kind(value), "value": text},
                      [("kind", "value"), (_kind(value), text)])

    def _cmd_aniso(self, phi):
        dec = decompose(phi)
        an = str(dec.anisotropic_part)
        text = f"defect {dec.defect}\nanisotropic {an}"
        data = {
            "command": "aniso",
            "form": str(phi),
            "defect": dec.defect,
            "anisotropic_part": an,
            "anisotropic_dim": dec.anisotropic_part.dim,
            "witnesses": [_strs(w) for w in dec.isotropy_witnesses],
        }
        return Result("aniso", text, data, [("defect", "anisotropic_part"), (dec.defect, an)])

    def _cmd_defect(self, phi, spec):
        rd = extended_core(phi, spec)
        an = str(rd.anisotropic_form(phi.field))
        text = f"{rd.defect}\nanisotropic over {spec}: {an}"
        data = {
            "command": "defect",
            "form": str(phi),
            "extension": str(spec),
            "defect": rd.defect,
            "anisotropic_dim": rd.anisotropic_dim,
            "representatives": _strs(rd.representatives),
            "pbasis": _strs(rd.pbasis_used),
        }
        return Result("defect", text, data,
                      [("extension", "defect", "anisotropic_dim"), (str(spec), rd.defect, rd.anisotropic_dim)])

    def _cmd_norm(self, phi):
        nd = norm_data(phi)
        gens = ", ".join(_strs(nd.generators))
        text = (
            f"ndeg {nd.norm_degree} (exponent {nd.norm_degree_exponent})\n"
            f"p-basis {{{gens}}}\n"
            f"norm form <<{gens}>>"
        )
        data = {
            "command": "norm",
            "form": str(phi),
            "norm_degree": nd.norm_degree,
            "norm_degree_exponent": nd.norm_degree_exponent,
            "generators": _strs(nd.generators),
            "norm_form": str(nd.norm_form),
        }
        return Result("norm", text, data, [("norm_degree", "generators"),
                                           (nd.norm_degree, " ".join(_strs(nd.generators)))])

    def _cmd_pindep(self, elements):
        ok = is_p_independent(elements)
        text = "p-independent" if ok else "p-dependent"
        data = {"command": "pindep", "elements": _strs(elements), "p_independent": ok}
        return Result("pindep", text, data, [("p_independent",), (str(ok).lower(),)])

    def _cmd_pbasis(self, elements):
        basis = extract_p_basis(elements)
        text = "{" + ", ".join(_strs(basis)) + "}"
        data = {"command": "pbasis", "elements": _strs(elements), "basis": _strs(basis)}
        return Result("pbasis", text, data, [("basis",)] + [(b,) for b in _strs(basis)])

    def _cmd_minimal(self, phi):
        ok = is_minimal(phi)
        data = {"command": "minimal", "form": str(phi), "minimal": ok, "minimal_subform": None}
        text = "minimal" if ok else "not minimal"
        if norm_data(phi).norm_degree_exponent:
            sub = minimal_subform(phi)
            data["minimal_subform"] = str(sub)
            text += f"\nminimal subform {sub}"
        return Result("minimal", text, data,
                      [("minimal", "minimal_subform"), (str(ok).lower(), data["minimal_subform"] or "")])

    def _cmd_tower(self, phi):
        tower = insep_tower(phi)
        lines = [f"tower of {phi} over the norm p-basis {{{', '.join(_strs(tower.generators))}}}"]
        rows = [("stage", "extension", "defect", "anisotropic_dim")]
        stages = []
        for i, s in enumerate(tower.stages):
            lines.append(f"  E_{i}  defect {s.defect:<3} dim {s.anisotropic_dim:<3} {s.spec}")
            rows.append((i, str(s.spec), s.defect, s.anisotropic_dim))
            stages.append({
                "extension": str(s.spec),
                "defect": s.defect,
                "anisotropic_dim": s.anisotropic_dim,
                "representatives": _strs(s.representatives),
            })
        data = {"command": "tower", "form": str(phi), "generators": _strs(tower.generators),
                "dims": list(tower.dims), "stages": stages}
        return Result("tower", "\n".join(lines), data, rows)

    def _cmd_pisp(self, phi, max_gens=None, extra=()):
        if max_gens is None:
            max_gens = self.max_gens
        report = pisp_search(phi, SearchBudget(max_generators=max_gens, extra=tuple(extra)))
        verify_report(phi, report)
        return _report_result("pisp", str(phi), report)

    def _cmd_fsp_min(self, phi):
        report = fsp_minimal(phi)
        verify_report(phi, report)
        return _report_result("fsp-min", str(phi), report)

    def _cmd_fsp_pfister(self, gens):
        report = fsp_quasi_pfister(gens, self.field)
        pi = PfisterForm(self.field, gens)
        verify_report(pi, report)
        return _report_result("fsp-pfister", str(pi), report)

    def _cmd_fsp_neighbor(self, gens, s, d):
        inp = NeighborInput(gens, s, d, self.field)
        report = fsp_neighbor(inp)
        verify_report(inp.phi, report)
        name = f"<<{', '.join(_strs(gens))}>> (+) {d}*<{', '.join(['1'] + _strs(gens[:s]))}>"
        res = _report_result("fsp-neighbor", name, report)
        res.data.update({"n": inp.n, "s": inp.s})
        return res

    def _cmd_verify_table1(self, p):
        table = emit_table1(p, self.max_degree)
        return Result("verify-table1", table1_text(table), table1_json(table),
                      [CSV_HEADER], csv_text=table1_csv(table))

    def _cmd_check(self, count):
        results = run_checks(count, self.seed)
        lines = []
        rows = [("suite", "trials", "nontrivial", "failures", "passed")]
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.name}: {r.trials} trials, {r.nontrivial} nontrivial, "
                         f"{len(r.failures)} failures ({r.seconds:.1f} s)")
            lines.extend(f"    {f}" for f in r.failures[:10])
            rows.append((r.name, r.trials, r.nontrivial, len(r.failures), str(r.passed).lower()))
        data = {"command": "check", "count": count, "seed": self.seed,
                "suites": [r.to_json() for r in results],
                "passed": all(r.passed for r in results)}
        failed = None if data["passed"] else "randomized cross-checks failed"
        return Result("check", "\n".join(lines), data, rows, failed=failed)

    def _cmd_represents(self, phi, d):
        vec = representation(phi, d)
        ok = vec is not None
        data = {"command": "represents", "form": str(phi), "value": str(d), "represents": ok,
                "vector": _strs(vec) if ok else None}
        text = f"yes: {d} = {phi}({', '.join(_strs(vec))})" if ok else "no"
        return Result("represents", text, data, [("represents",), (str(ok).lower(),)])

    def _cmd_isometric(self, phi, psi):
        ok = is_isometric(phi, psi)
        data = {"command": "isometric", "left": str(phi), "right": str(psi), "isometric": ok}
        return Result("isometric", "yes" if ok else "no", data, [("isometric",), (str(ok).lower(),)])

    def _cmd_subform(self, sigma, phi):
        ok = is_subform(sigma, phi)
        data = {"command": "subform", "left": str(sigma), "right": str(phi), "subform": ok}
        return Result("subform", "yes" if ok else "no", data, [("subform",), (str(ok).lower(),)])


def run_source(source: str, **options):
    """Convenience wrapper: all results of ``source`` in a fresh session."""
    return list(Session(**options).run(source))

