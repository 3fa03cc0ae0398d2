"""Analysis-report assembly.

A report is a plain ordered tree (dicts/lists/strings) so the JSON
rendering is byte-deterministic for a given input; every scalar is
serialized exactly (integers and "p/q" fractions stay exact, symbolic
fields render through the canonical printer).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import sympy as sp

from . import classify as cls
from . import curvature as curv
from .errors import EngineError
from .geometry import TensorField
from .nullity import nullity_fit
from .nullity import check_irem_suite, check_parakaehler_consequence, check_q_commutator_nullity
from .parser import ManifoldDefinition
from .scalars import ScalarField
from .structures import (
    AlmostParacontactStructure,
    CheckItem,
    StructureAnalysis,
    identity_suite,
    leaf_second_fundamental_form,
    nijenhuis_normality,
    para_kenmotsu_biconditional,
    parakaehler_leaves_check,
)

EXIT_OK = 0
EXIT_STRUCTURAL = 2
EXIT_IDENTITY = 3
EXIT_PARSE = 4


def _item_dict(it: CheckItem) -> Dict[str, object]:
    out: Dict[str, object] = {"name": it.name, "status": it.status}
    if it.witness is not None:
        out["witness"] = str(it.witness)
    if it.reason is not None:
        out["reason"] = it.reason
    return out


def _items(items: Sequence[CheckItem]) -> List[Dict[str, object]]:
    return [_item_dict(it) for it in items]


def _scalar_str(fld) -> str:
    if fld is None:
        return "none"
    if isinstance(fld, ScalarField):
        return fld.serialize()
    return sp.sstr(sp.nsimplify(fld) if isinstance(fld, (int, Fraction)) else fld)


def _matrix_strs(t: TensorField) -> List[List[str]]:
    n = t.chart.dim
    return [[sp.sstr(t.array[i, j]) for j in range(n)] for i in range(n)]


class AnalysisReport:
    def __init__(self, tree: Dict[str, object]):
        self.tree = tree

    def to_json(self) -> str:
        return json.dumps(self.tree, indent=2, ensure_ascii=True) + "\n"

    @property
    def exit_code(self) -> int:
        return int(self.tree["summary"]["exit_code"])  # type: ignore[index,call-overload]

    def render_text(self, verbosity: int = 1) -> str:
        lines: List[str] = []
        self._render(self.tree, lines, verbosity, prefix="")
        summary = self.tree["summary"]
        lines.append(
            "summary: {passed} passed, {failed} failed, {skipped} skipped"
            " (exit {exit_code})".format(**summary)  # type: ignore[arg-type]
        )
        return "\n".join(lines) + "\n"

    def _render(self, node, lines, verbosity, prefix):
        if isinstance(node, dict):
            if set(node) >= {"name", "status"}:
                if node["status"] == "fail" or verbosity >= 2 or (
                    verbosity >= 1 and node["status"] == "skip"
                ):
                    extra = ""
                    if node.get("witness") and verbosity >= 1:
                        extra = f"  << {node['witness']}"
                    if node.get("reason") and verbosity >= 1:
                        extra = f"  ({node['reason']})"
                    lines.append(f"{prefix}[{node['status']}] {node['name']}{extra}")
                return
            for key, value in node.items():
                if key == "summary":
                    continue
                if isinstance(value, (dict, list)):
                    lines.append(f"{prefix}{key}:")
                    self._render(value, lines, verbosity, prefix + "  ")
                else:
                    lines.append(f"{prefix}{key}: {value}")
        elif isinstance(node, list):
            if node and all(not isinstance(v, (dict, list)) for v in node):
                lines.append(f"{prefix}[{', '.join(str(v) for v in node)}]")
                return
            for value in node:
                self._render(value, lines, verbosity, prefix)
        else:
            lines.append(f"{prefix}{node}")


def _collect_items(node, acc: List[Dict[str, object]]):
    if isinstance(node, dict):
        if set(node) >= {"name", "status"}:
            acc.append(node)
            return
        for value in node.values():
            _collect_items(value, acc)
    elif isinstance(node, list):
        for value in node:
            _collect_items(value, acc)


def _finish(tree: Dict[str, object], structural_failure: bool) -> AnalysisReport:
    acc: List[Dict[str, object]] = []
    _collect_items(tree, acc)
    passed = sum(1 for it in acc if it["status"] == "pass")
    failed = sum(1 for it in acc if it["status"] == "fail")
    skipped = sum(1 for it in acc if it["status"] == "skip")
    if structural_failure:
        code = EXIT_STRUCTURAL
    elif failed:
        code = EXIT_IDENTITY
    else:
        code = EXIT_OK
    tree["summary"] = {
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "failed_checks": [it["name"] for it in acc if it["status"] == "fail"],
        "exit_code": code,
    }
    return AnalysisReport(tree)


def run_verify(defn: ManifoldDefinition) -> AnalysisReport:
    """Axioms and the alpha gate only."""
    tree = _chart_section(defn)
    s = AlmostParacontactStructure.from_definition(defn)
    an = StructureAnalysis(s)
    tree["axioms"] = {"ok": an.axioms_ok, "items": _items(an.axiom_report)}
    structural = not an.axioms_ok
    if an.axioms_ok:
        tree["alpha_gate"] = _alpha_section(an)
        structural = not an.is_apc
    return _finish(tree, structural)


def _chart_section(defn: ManifoldDefinition) -> Dict[str, object]:
    return {
        "chart": {
            "dim": defn.dim,
            "coords": list(defn.coord_names),
            "base_point": [str(Fraction(p)) for p in defn.base_point],
            "generators": [
                {
                    "name": g.name,
                    "coord": defn.coord_names[g.coord_index],
                    "rate": sp.sstr(g.rate),
                }
                for g in defn.generators
            ],
        }
    }


def _alpha_section(an: StructureAnalysis) -> Dict[str, object]:
    ext = an.alpha_extraction
    out: Dict[str, object] = {"is_apc": ext.is_apc}
    if not ext.is_apc:
        out["reason"] = ext.reason
        return out
    out["alpha"] = _scalar_str(ext.alpha)
    out["constant"] = an.alpha_is_constant
    if ext.f is not None:
        out["f = xi(alpha)"] = _scalar_str(ext.f)
    return out


def run_analyze(
    defn: ManifoldDefinition, point: Optional[Sequence[Fraction]] = None
) -> AnalysisReport:
    """Full pipeline; structural failures are report entries, not raises."""
    tree = _chart_section(defn)
    s = AlmostParacontactStructure.from_definition(defn)
    an = StructureAnalysis(s)
    tree["axioms"] = {"ok": an.axioms_ok, "items": _items(an.axiom_report)}
    if not an.axioms_ok:
        return _finish(tree, structural_failure=True)
    tree["alpha_gate"] = _alpha_section(an)
    if not an.is_apc:
        return _finish(tree, structural_failure=True)

    tree["tensors"] = {
        "A": _matrix_strs(an.A),
        "h": _matrix_strs(an.h),
        "h_zero": an.h.is_zero(),
        "trace_A": sp.sstr(_trace(an.A)),
        "scalar_curvature": an.r.serialize(),
    }

    tree["identities"] = _items(identity_suite(an))

    N1, normal = nijenhuis_normality(s)
    norm_sec: Dict[str, object] = {"normal": normal}
    if not normal:
        idx, val = N1.first_nonzero()
        norm_sec["first_nonzero"] = {"index": list(idx), "value": sp.sstr(val)}
    tree["normality"] = norm_sec

    pk = parakaehler_leaves_check(an)
    leaves = leaf_second_fundamental_form(an)
    tree["leaves"] = {
        "para_kaehler": pk,
        "umbilical": leaves.umbilical,
        "geodesic": leaves.geodesic,
    }
    tree["para_kenmotsu"] = _item_dict(para_kenmotsu_biconditional(an))

    curvsec: Dict[str, object] = {}
    curvsec["reeb_curvature"] = _items(curv.check_rxyxi_general(an))
    curvsec["ricci_suite"] = _items(curv.check_r2_suite(an))
    curvsec["phi_average"] = _item_dict(curv.check_r3_identity(an))
    curvsec["ricci_commutator"] = _item_dict(curv.check_q_commutator(an))
    ccr = curv.constant_curvature_probe(an)
    curvsec["constant_curvature"] = {
        "is_constant": ccr.is_space_form,
        "c": _scalar_str(ccr.c) if ccr.is_space_form else "none",
    }
    if ccr.is_space_form:
        curvsec["space_form"] = _items(curv.check_space_form_constraints(an))
    curvsec["rough_laplacian"] = _item_dict(curv.check_rough_laplacian_formula(an))
    curvsec["jacobi_self_adjoint"] = _item_dict(curv.check_jacobi_self_adjoint(an))
    harmonic, hwit = curv.xi_is_harmonic(an)
    harm: Dict[str, object] = {"harmonic": harmonic}
    if hwit is not None:
        harm["witness"] = str(hwit)
    curvsec["harmonicity"] = harm
    tree["curvature"] = curvsec

    fit = nullity_fit(an)
    nulsec: Dict[str, object] = {
        "status": fit.status,
        "kappa": _scalar_str(fit.kappa),
        "mu": _scalar_str(fit.mu),
        "nu": _scalar_str(fit.nu),
        "unique": fit.unique,
    }
    if fit.witness is not None:
        nulsec["witness"] = str(fit.witness)
    if fit.status in ("exact", "degenerate_h_zero"):
        nulsec["consequences"] = _items(check_irem_suite(an, fit))
        nulsec["leaves_consequence"] = _item_dict(check_parakaehler_consequence(an, fit))
        nulsec["commutator"] = _item_dict(check_q_commutator_nullity(an, fit))
    tree["nullity"] = nulsec

    if s.dim == 3:
        tree["classification"] = _classification_section(an, point)

    return _finish(tree, structural_failure=False)


def _trace(t: TensorField) -> sp.Expr:
    return sp.cancel(sum(t.array[i, i] for i in range(t.chart.dim)))


def _classification_section(
    an: StructureAnalysis, point: Optional[Sequence[Fraction]]
) -> Dict[str, object]:
    out: Dict[str, object] = {}
    try:
        htype = cls.classify_h(an, point)
    except EngineError as exc:
        out["error"] = str(exc)
        return out
    out["h_type"] = htype.tag
    out["lambda2"] = _scalar_str(htype.lambda2) if htype.lambda2 is not None else "none"
    out["point"] = [str(p) for p in htype.point]
    try:
        frame = cls.build_adapted_frame(an, htype)
    except EngineError as exc:
        out["frame_error"] = str(exc)
        return out
    out["frame"] = {
        "kind": frame.kind,
        "exact": frame.exact,
        "e1": [sp.sstr(frame.e1.array[i]) for i in range(3)],
        "e2": [sp.sstr(frame.e2.array[i]) for i in range(3)],
    }
    if frame.lam is not None:
        out["frame"]["lambda"] = sp.sstr(frame.lam)
    if frame.sigma_sign is not None:
        out["frame"]["sigma_sign"] = frame.sigma_sign
    table = cls.verify_frame_tables(an, frame, htype)
    out["frame_table"] = {
        "a": sp.sstr(table.a),
        "b": {k: sp.sstr(v) for k, v in sorted(table.b.items())},
        "items": _items(table.items),
    }
    out["ricci_closed_form"] = _item_dict(cls.verify_ricci_formula(an))
    rep = cls.harmonic_nullity_equivalence(an)
    out["harmonic_nullity"] = {
        "harmonic": rep.harmonic,
        "nullity": rep.nullity,
        "equivalent": rep.equivalent,
        "items": _items(rep.case_items),
    }
    if not rep.equivalent:
        out["harmonic_nullity"]["items"].append(
            _item_dict(
                CheckItem(
                    "harmonicity <=> nullity",
                    "fail",
                    witness=f"harmonic = {rep.harmonic}, nullity = {rep.nullity}",
                )
            )
        )
    return out


def run_deform(
    defn: ManifoldDefinition,
    gamma=None,
    beta: Optional[ScalarField] = None,
    u: Optional[ScalarField] = None,
) -> AnalysisReport:
    """Deform, re-verify the axioms, and check the transformation laws."""
    from .deform import (
        conformal_deform,
        d_homothetic_deform,
        invariant_I0,
        transform_kmn,
        verify_deformation_laws,
    )

    tree = _chart_section(defn)
    s = AlmostParacontactStructure.from_definition(defn)
    an = StructureAnalysis(s)
    if not an.axioms_ok or not an.is_apc:
        tree["axioms"] = {"ok": an.axioms_ok, "items": _items(an.axiom_report)}
        if an.axioms_ok:
            tree["alpha_gate"] = _alpha_section(an)
        return _finish(tree, structural_failure=True)
    tree["source"] = {"alpha": _scalar_str(an.alpha)}

    if u is not None:
        s_t = conformal_deform(an, u)
        kind: Dict[str, object] = {"kind": "conformal", "u": u.serialize()}
    else:
        s_t = d_homothetic_deform(s, gamma, beta)
        kind = {
            "kind": "homothetic",
            "gamma": sp.sstr(sp.Rational(Fraction(gamma))),
            "beta": beta.serialize(),
        }
    an_t = StructureAnalysis(s_t)
    tree["deformation"] = kind
    tree["deformed_axioms"] = {
        "ok": an_t.axioms_ok,
        "items": _items(an_t.axiom_report),
    }
    tree["deformed"] = {"alpha": _scalar_str(an_t.alpha) if an_t.is_apc else "none",
                        "is_apc": an_t.is_apc}

    if u is None:
        tree["laws"] = _items(verify_deformation_laws(an, an_t, gamma, beta))
        fit = nullity_fit(an)
        if fit.status == "exact":
            dbeta_xi = an.xi_derivative(beta)
            kap_t, mu_t, nu_t = transform_kmn(
                fit.kappa, fit.mu, fit.nu, an.alpha, gamma, beta, dbeta_xi
            )
            fit_t = nullity_fit(an_t)
            pred = {
                "kappa": _scalar_str(kap_t),
                "mu": _scalar_str(mu_t),
                "nu": _scalar_str(nu_t),
            }
            got = {
                "kappa": _scalar_str(fit_t.kappa),
                "mu": _scalar_str(fit_t.mu),
                "nu": _scalar_str(fit_t.nu),
            }
            match = fit_t.status == "exact" and all(
                pred[k] == got[k] for k in pred
            )
            nul: Dict[str, object] = {
                "predicted": pred,
                "fitted": got,
                "items": [
                    _item_dict(
                        CheckItem(
                            "deformed nullity parameters match the closed form",
                            "pass" if match else "fail",
                            witness=None if match else f"{pred} vs {got}",
                        )
                    )
                ],
            }
            if fit.mu is not None and not fit.mu.is_zero():
                i0 = invariant_I0(fit.kappa, fit.mu, fit.nu, an.alpha)
                i0_t = invariant_I0(fit_t.kappa, fit_t.mu, fit_t.nu, an_t.alpha)
                nul["I0"] = _scalar_str(i0)
                nul["I0_deformed"] = _scalar_str(i0_t)
                nul["items"].append(
                    _item_dict(
                        CheckItem(
                            "I0 invariant",
                            "pass" if i0 == i0_t else "fail",
                            witness=None
                            if i0 == i0_t
                            else f"{_scalar_str(i0)} vs {_scalar_str(i0_t)}",
                        )
                    )
                )
            tree["nullity_transport"] = nul
    return _finish(tree, structural_failure=False)
