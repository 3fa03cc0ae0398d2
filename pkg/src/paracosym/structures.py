"""Almost paracontact metric structures on a chart.

Materializes the quadruple (phi, xi, eta, g), verifies its axioms, extracts
the proportionality function alpha from dPhi = 2*alpha*(eta^Phi), computes
the tensors A = -nabla(xi) and h = (1/2) L_xi phi, and runs the suite of
structural identities that hold on every almost alpha-paracosymplectic
manifold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Tuple

import sympy as sp

from .errors import ConventionBugError, StructureError
from .geometry import (
    Chart,
    ConnectionCoefficients,
    TensorField,
    apply11,
    christoffel,
    compose11,
    covariant_derivative,
    directional_covariant,
    exterior_derivative,
    identity_tensor,
    lie_derivative,
    metric_inverse,
    metric_matrix,
    ricci_operator,
    ricci_tensor,
    riemann,
    scalar_curvature,
    signature_at,
    trace11,
    wedge,
)
from .parser import ManifoldDefinition, parse_scalar
from .scalars import ScalarField


@dataclass
class CheckItem:
    """One verified identity/axiom: pass, fail (with witness), or skip."""

    name: str
    status: str  # "pass" | "fail" | "skip"
    witness: Optional[str] = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def _residual_item(name: str, residual: TensorField) -> CheckItem:
    w = residual.first_nonzero()
    if w is None:
        return CheckItem(name, "pass")
    idx, value = w
    return CheckItem(name, "fail", witness=f"component {idx}: {sp.sstr(value)}")


def _scalar_item(name: str, value) -> CheckItem:
    v = sp.cancel(value if isinstance(value, sp.Expr) else value.expr)
    if v == 0:
        return CheckItem(name, "pass")
    return CheckItem(name, "fail", witness=sp.sstr(v))


class AlmostParacontactStructure:
    """(phi, xi, eta, g) on a chart with a rational base point."""

    def __init__(
        self,
        chart: Chart,
        phi: TensorField,
        xi: TensorField,
        eta: TensorField,
        g: TensorField,
        declared_alpha: Optional[ScalarField] = None,
    ):
        self.chart = chart
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self.g = g
        self.declared_alpha = declared_alpha

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    @classmethod
    def from_definition(cls, defn: ManifoldDefinition) -> "AlmostParacontactStructure":
        ctx = defn.context()
        chart = Chart(ctx, defn.base_point)

        def mat(rows):
            return [[parse_scalar(e, ctx).expr for e in row] for row in rows]

        def vec(entries):
            return [parse_scalar(e, ctx).expr for e in entries]

        phi = TensorField(chart, 1, 1, mat(defn.phi))
        xi = TensorField(chart, 1, 0, vec(defn.xi))
        eta = TensorField(chart, 0, 1, vec(defn.eta))
        g = TensorField(chart, 0, 2, mat(defn.metric))
        declared = (
            parse_scalar(defn.declared_alpha, ctx)
            if defn.declared_alpha is not None
            else None
        )
        return cls(chart, phi, xi, eta, g, declared)


# --------------------------------------------------------------------
# axioms


def verify_axioms(s: AlmostParacontactStructure) -> List[CheckItem]:
    n_tot = s.dim
    n = s.n
    chart = s.chart
    items: List[CheckItem] = []

    eta_xi = sum(s.eta.array[k] * s.xi.array[k] for k in range(n_tot))
    items.append(_scalar_item("eta(xi) = 1", eta_xi - 1))

    proj = identity_tensor(chart) - TensorField(
        chart, 1, 1, [[s.xi.array[i] * s.eta.array[j] for j in range(n_tot)] for i in range(n_tot)]
    )
    items.append(_residual_item("phi^2 = Id - eta(x)xi", compose11(s.phi, s.phi) - proj))

    # g(phi X, phi Y) = -g(X,Y) + eta(X) eta(Y)
    comp = sp.MutableDenseNDimArray.zeros(n_tot, n_tot)
    for i in range(n_tot):
        for j in range(n_tot):
            comp[i, j] = (
                sum(
                    s.phi.array[k, i] * s.phi.array[l, j] * s.g.array[k, l]
                    for k in range(n_tot)
                    for l in range(n_tot)
                )
                + s.g.array[i, j]
                - s.eta.array[i] * s.eta.array[j]
            )
    items.append(
        _residual_item(
            "g(phi.,phi.) = -g + eta(x)eta", TensorField(chart, 0, 2, comp)
        )
    )

    gxi = [sum(s.g.array[i, j] * s.xi.array[j] for j in range(n_tot)) for i in range(n_tot)]
    items.append(
        _residual_item("eta = g(xi,.)", TensorField(chart, 0, 1, gxi) - s.eta)
    )

    items.append(_residual_item("phi(xi) = 0", apply11(s.phi, s.xi)))

    eta_phi = [
        sum(s.eta.array[k] * s.phi.array[k, j] for k in range(n_tot)) for j in range(n_tot)
    ]
    items.append(
        _residual_item("eta o phi = 0", TensorField(chart, 0, 1, eta_phi))
    )

    try:
        sig = signature_at(s.g)
        if sig == (n + 1, n):
            items.append(CheckItem("signature (n+1,n) at base point", "pass"))
        else:
            items.append(
                CheckItem(
                    "signature (n+1,n) at base point",
                    "fail",
                    witness=f"got {sig}, expected {(n + 1, n)}",
                )
            )
    except Exception as exc:  # degenerate metric is a failure, not a crash
        items.append(
            CheckItem("signature (n+1,n) at base point", "fail", witness=str(exc))
        )

    # eigendistributions D+/D- of phi inside ker(eta) have dimension n each
    phi0 = s.phi.eval_at()
    m = sp.Matrix(n_tot, n_tot, lambda i, j: phi0[i, j])
    for sign, label in ((1, "D+"), (-1, "D-")):
        null_dim = n_tot - (m - sign * sp.eye(n_tot)).rank()
        if null_dim == n:
            items.append(CheckItem(f"dim {label} = n at base point", "pass"))
        else:
            items.append(
                CheckItem(
                    f"dim {label} = n at base point",
                    "fail",
                    witness=f"dim = {null_dim}, expected {n}",
                )
            )
    return items


# --------------------------------------------------------------------
# fundamental form and alpha


def fundamental_form(s: AlmostParacontactStructure) -> TensorField:
    """Phi(X,Y) = g(phi X, Y); must be antisymmetric with i_xi Phi = 0."""
    n_tot = s.dim
    comps = [
        [
            sum(s.phi.array[k, i] * s.g.array[k, j] for k in range(n_tot))
            for j in range(n_tot)
        ]
        for i in range(n_tot)
    ]
    Phi = TensorField(s.chart, 0, 2, comps)
    for i in range(n_tot):
        for j in range(i, n_tot):
            if sp.cancel(Phi.array[i, j] + Phi.array[j, i]) != 0:
                raise StructureError(
                    f"fundamental form has a symmetric part at ({i},{j})"
                )
    i_xi = [
        sum(s.xi.array[i] * Phi.array[i, j] for i in range(n_tot)) for j in range(n_tot)
    ]
    if any(sp.cancel(v) != 0 for v in i_xi):
        raise StructureError("i_xi Phi != 0")
    return Phi


@dataclass
class AlphaExtraction:
    alpha: Optional[ScalarField]
    f: Optional[ScalarField]  # f = xi(alpha); satisfies d(alpha) = f*eta
    is_apc: bool
    reason: Optional[str] = None


def extract_alpha(s: AlmostParacontactStructure, Phi: TensorField) -> AlphaExtraction:
    chart = s.chart
    n_tot = s.dim

    deta = exterior_derivative(s.eta)
    if not deta.is_zero():
        w = deta.first_nonzero()
        return AlphaExtraction(None, None, False, f"d(eta) != 0 at component {w[0]}")

    dPhi = exterior_derivative(Phi)
    ep = wedge(s.eta, Phi)

    # pick components where (eta^Phi) is nonzero at the base point
    subs = chart.point_subs()
    candidates = []
    for idx in itertools.combinations(range(n_tot), 3):
        val = ep.array[idx]
        if val == 0:
            continue
        num, den = sp.fraction(sp.cancel(val))
        if den.subs(subs) != 0 and num.subs(subs) != 0:
            candidates.append(idx)
        if len(candidates) >= 2:
            break
    if not candidates:
        raise StructureError("eta ^ Phi vanishes at the base point")

    idx = candidates[0]
    alpha = ScalarField(chart.context, dPhi.array[idx] / (2 * ep.array[idx]))
    if len(candidates) > 1:
        idx2 = candidates[1]
        alpha2 = ScalarField(chart.context, dPhi.array[idx2] / (2 * ep.array[idx2]))
        if alpha != alpha2:
            return AlphaExtraction(
                None, None, False,
                "d(Phi) is not proportional to eta ^ Phi "
                f"(ratios differ between components {idx} and {idx2})",
            )

    residual = dPhi - ep.scale(alpha * 2)
    if not residual.is_zero():
        w = residual.first_nonzero()
        return AlphaExtraction(
            None, None, False,
            f"d(Phi) - 2*alpha*(eta^Phi) != 0 at component {w[0]}",
        )

    # f = xi(alpha); in dim >= 5 we also demand d(alpha) = f * eta
    dalpha = [alpha.partial(c).expr for c in range(n_tot)]
    f = ScalarField(
        chart.context, sum(s.xi.array[c] * dalpha[c] for c in range(n_tot))
    )
    if s.n >= 2:
        res = [sp.cancel(dalpha[c] - f.expr * s.eta.array[c]) for c in range(n_tot)]
        if any(v != 0 for v in res):
            c = next(i for i, v in enumerate(res) if v != 0)
            return AlphaExtraction(
                alpha, f, False, f"d(alpha) != f*eta at coordinate {c}"
            )

    if s.declared_alpha is not None and s.declared_alpha != alpha:
        raise StructureError(
            f"declared alpha = {s.declared_alpha} but extracted alpha = {alpha}"
        )
    return AlphaExtraction(alpha, f, True)


# --------------------------------------------------------------------
# A and h


def tensor_A(s: AlmostParacontactStructure, conn: ConnectionCoefficients) -> TensorField:
    """A = -nabla(xi) as a (1,1)-tensor, A^i_j = -(nabla_j xi)^i."""
    nxi = covariant_derivative(s.xi, conn)
    return TensorField(s.chart, 1, 1, -nxi.array)


def tensor_h(s: AlmostParacontactStructure, conn: ConnectionCoefficients) -> TensorField:
    """h = (1/2) L_xi phi, cross-checked against (1/2)(A phi - phi A)."""
    h_lie = lie_derivative(s.xi, s.phi).scale(sp.Rational(1, 2))
    A = tensor_A(s, conn)
    h_alg = (compose11(A, s.phi) - compose11(s.phi, A)).scale(sp.Rational(1, 2))
    if h_lie != h_alg:
        w = (h_lie - h_alg).first_nonzero()
        raise ConventionBugError(
            f"(1/2)L_xi(phi) != (1/2)(A.phi - phi.A) at component {w[0]}"
        )
    return h_lie


# --------------------------------------------------------------------
# analysis container


class StructureAnalysis:
    """Derived data of a structure, computed lazily and cached."""

    def __init__(self, s: AlmostParacontactStructure):
        self.structure = s
        self.chart = s.chart

    @cached_property
    def axiom_report(self) -> List[CheckItem]:
        return verify_axioms(self.structure)

    @property
    def axioms_ok(self) -> bool:
        return all(item.ok for item in self.axiom_report)

    @cached_property
    def Phi(self) -> TensorField:
        return fundamental_form(self.structure)

    @cached_property
    def alpha_extraction(self) -> AlphaExtraction:
        return extract_alpha(self.structure, self.Phi)

    @property
    def is_apc(self) -> bool:
        return self.alpha_extraction.is_apc

    @property
    def alpha(self) -> ScalarField:
        return self.alpha_extraction.alpha

    @property
    def alpha_is_constant(self) -> bool:
        return self.alpha is not None and self.alpha.is_constant()

    @cached_property
    def conn(self) -> ConnectionCoefficients:
        return christoffel(self.structure.g)

    @cached_property
    def ginv(self) -> TensorField:
        return metric_inverse(self.structure.g)

    @cached_property
    def A(self) -> TensorField:
        return tensor_A(self.structure, self.conn)

    @cached_property
    def h(self) -> TensorField:
        return tensor_h(self.structure, self.conn)

    @cached_property
    def phih(self) -> TensorField:
        return compose11(self.structure.phi, self.h)

    @cached_property
    def R(self) -> TensorField:
        return riemann(self.conn)

    @cached_property
    def S(self) -> TensorField:
        return ricci_tensor(self.R)

    @cached_property
    def Q(self) -> TensorField:
        return ricci_operator(self.S, self.structure.g)

    @cached_property
    def r(self) -> ScalarField:
        return scalar_curvature(self.S, self.structure.g)

    @cached_property
    def l(self) -> TensorField:
        """Jacobi operator lX = R(X, xi)xi."""
        s = self.structure
        n = s.dim
        comps = [
            [
                sum(
                    self.R.array[i, j, a, b] * s.xi.array[a] * s.xi.array[b]
                    for a in range(n)
                    for b in range(n)
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        return TensorField(self.chart, 1, 1, comps)

    @cached_property
    def proj(self) -> TensorField:
        """Projection onto ker(eta): P = phi^2 = Id - eta(x)xi."""
        s = self.structure
        n = s.dim
        return identity_tensor(self.chart) - TensorField(
            self.chart,
            1,
            1,
            [[s.xi.array[i] * s.eta.array[j] for j in range(n)] for i in range(n)],
        )

    @cached_property
    def sigma(self) -> TensorField:
        """sigma = S(xi, .) restricted to ker(eta), as a covector."""
        s = self.structure
        n = s.dim
        sxi = [
            sum(self.S.array[a, j] * s.xi.array[a] for a in range(n)) for j in range(n)
        ]
        comps = [
            sum(sxi[b] * self.proj.array[b, j] for b in range(n)) for j in range(n)
        ]
        return TensorField(self.chart, 0, 1, comps)

    @cached_property
    def nabphi(self) -> TensorField:
        return covariant_derivative(self.structure.phi, self.conn)

    @cached_property
    def nabPhi(self) -> TensorField:
        return covariant_derivative(self.Phi, self.conn)

    @cached_property
    def nabphih(self) -> TensorField:
        return covariant_derivative(self.phih, self.conn)

    @cached_property
    def nabh(self) -> TensorField:
        return covariant_derivative(self.h, self.conn)

    def xi_derivative(self, fld: ScalarField) -> ScalarField:
        s = self.structure
        return ScalarField(
            self.chart.context,
            sum(s.xi.array[c] * fld.partial(c).expr for c in range(s.dim)),
        )


# --------------------------------------------------------------------
# identity suite


def identity_suite(an: StructureAnalysis) -> List[CheckItem]:
    """The structural identities valid on every almost
    alpha-paracosymplectic manifold (general, not necessarily constant,
    alpha)."""
    s = an.structure
    chart = an.chart
    n_tot = s.dim
    n = s.n
    if not an.is_apc:
        return [CheckItem("identity suite", "skip", reason="not an apc structure")]

    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    A, h = an.A, an.h
    alpha = an.alpha.expr
    Phi = an.Phi
    nabphi, nabPhi = an.nabphi.array, an.nabPhi.array
    rng = range(n_tot)
    items: List[CheckItem] = []

    def t11(comps):
        return TensorField(chart, 1, 1, comps)

    items.append(_residual_item("L_xi(eta) = 0", lie_derivative(s.xi, s.eta)))

    gA = [[sum(g[m, j] * A.array[m, i] for m in rng) for j in rng] for i in rng]
    sym = [[sp.cancel(gA[i][j] - gA[j][i]) for j in rng] for i in rng]
    items.append(_residual_item("A self-adjoint", TensorField(chart, 0, 2, sym)))

    items.append(_residual_item("A(xi) = 0", apply11(A, s.xi)))

    items.append(
        _residual_item(
            "L_xi(Phi) = 2*alpha*Phi",
            lie_derivative(s.xi, Phi) - Phi.scale(2 * alpha),
        )
    )

    twoga = [[2 * gA[i][j] for j in rng] for i in rng]
    items.append(
        _residual_item(
            "L_xi(g) = -2*g(A.,.)",
            lie_derivative(s.xi, s.g) + TensorField(chart, 0, 2, twoga),
        )
    )

    etaA = [sum(eta[m] * A.array[m, j] for m in rng) for j in rng]
    items.append(_residual_item("eta o A = 0", TensorField(chart, 0, 1, etaA)))

    if n >= 2:
        dal = [an.alpha.partial(c).expr for c in rng]
        f = an.alpha_extraction.f.expr
        res = [sp.cancel(dal[c] - f * eta[c]) for c in rng]
        items.append(
            _residual_item("d(alpha) = f*eta", TensorField(chart, 0, 1, res))
        )
    else:
        items.append(
            CheckItem("d(alpha) = f*eta", "skip", reason="stated only for dim >= 5")
        )

    items.append(
        _residual_item(
            "A.phi + phi.A = -2*alpha*phi",
            compose11(A, s.phi) + compose11(s.phi, A) + s.phi.scale(2 * alpha),
        )
    )

    nab_xi_phi = directional_covariant(s.phi, an.conn, s.xi)
    items.append(_residual_item("nabla_xi(phi) = 0", nab_xi_phi))

    gh = [[sum(g[m, j] * h.array[m, i] for m in rng) for j in rng] for i in rng]
    hsym = [[sp.cancel(gh[i][j] - gh[j][i]) for j in rng] for i in rng]
    items.append(_residual_item("h self-adjoint", TensorField(chart, 0, 2, hsym)))

    items.append(
        _residual_item(
            "h.phi + phi.h = 0", compose11(h, s.phi) + compose11(s.phi, h)
        )
    )

    items.append(_residual_item("h(xi) = 0", apply11(h, s.xi)))

    phi2 = compose11(s.phi, s.phi)
    items.append(
        _residual_item(
            "nabla(xi) = alpha*phi^2 + phi.h",
            phi2.scale(alpha) + an.phih + A,
        )
    )

    items.append(_scalar_item("tr(A.phi) = 0", trace11(compose11(A, s.phi))))
    items.append(_scalar_item("tr(h.phi) = 0", trace11(compose11(h, s.phi))))
    items.append(_scalar_item("tr(A) = -2*alpha*n", trace11(A) + 2 * n * alpha))
    items.append(_scalar_item("tr(h) = 0", trace11(h)))

    # (nabla_X Phi)(Y,Z) = g((nabla_X phi)Y, Z)
    res_i = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for c in rng:
        for j in rng:
            for k in rng:
                res_i[c, j, k] = nabPhi[j, k, c] - sum(
                    g[m, k] * nabphi[m, j, c] for m in rng
                )
    items.append(
        _residual_item("nabla(Phi) via nabla(phi)", TensorField(chart, 0, 3, res_i))
    )

    # (nabla_X Phi)(Z, phi Y) + (nabla_X Phi)(Y, phi Z)
    #   = -eta(Y) g(AX, Z) - eta(Z) g(AX, Y)
    res_ii = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for c in rng:
        for j in rng:
            for k in rng:
                lhs = sum(nabPhi[k, m, c] * phi[m, j] for m in rng) + sum(
                    nabPhi[j, m, c] * phi[m, k] for m in rng
                )
                rhs = -eta[j] * gA[c][k] - eta[k] * gA[c][j]
                res_ii[c, j, k] = lhs - rhs
    items.append(
        _residual_item("nabla(Phi) phi-shuffle (ii)", TensorField(chart, 0, 3, res_ii))
    )

    # (nabla_X Phi)(phi Y, phi Z) - (nabla_X Phi)(Y,Z)
    #   = eta(Y) g(AX, phi Z) - eta(Z) g(AX, phi Y)
    # g(AX, phi Z) with X = d_c, Z = d_k
    gAp = [
        [
            sum(g[m, mm] * A.array[m, c] * phi[mm, k] for m in rng for mm in rng)
            for k in rng
        ]
        for c in rng
    ]
    res_iii = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for c in rng:
        for j in rng:
            for k in rng:
                lhs = (
                    sum(
                        nabPhi[m, mm, c] * phi[m, j] * phi[mm, k]
                        for m in rng
                        for mm in rng
                    )
                    - nabPhi[j, k, c]
                )
                rhs = eta[j] * gAp[c][k] - eta[k] * gAp[c][j]
                res_iii[c, j, k] = lhs - rhs
    items.append(
        _residual_item(
            "nabla(Phi) phi-shuffle (iii)", TensorField(chart, 0, 3, res_iii)
        )
    )

    # (nabla_{phiX} phi)(phiY) - (nabla_X phi)Y - eta(Y) A phi X
    #   - 2 alpha (g(X, phi Y) xi + eta(Y) phi X) = 0
    gphi = [[sum(g[a, m] * phi[m, b] for m in rng) for b in rng] for a in rng]
    Aphi = compose11(A, s.phi).array
    res_B = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                t1 = sum(
                    phi[c, a] * phi[d, b] * nabphi[i, d, c] for c in rng for d in rng
                )
                t2 = nabphi[i, b, a]
                t3 = eta[b] * Aphi[i, a]
                t4 = 2 * alpha * (gphi[a][b] * xi[i] + eta[b] * phi[i, a])
                res_B[i, a, b] = t1 - t2 - t3 - t4
    items.append(
        _residual_item("phi-derivative symmetry (B)", TensorField(chart, 1, 2, res_B))
    )

    # (nabla_{phiX} phi)Y - (nabla_X phi)(phiY) + eta(Y) AX
    #   - 2 alpha (g(X,Y) xi - eta(Y) X) = 0
    res_a1 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    delta = sp.eye(n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                t1 = sum(phi[c, a] * nabphi[i, b, c] for c in rng)
                t2 = sum(nabphi[i, m, a] * phi[m, b] for m in rng)
                t3 = eta[b] * A.array[i, a]
                t4 = 2 * alpha * (g[a, b] * xi[i] - eta[b] * delta[i, a])
                res_a1[i, a, b] = t1 - t2 + t3 - t4
    items.append(
        _residual_item(
            "phi-derivative symmetry (first companion)",
            TensorField(chart, 1, 2, res_a1),
        )
    )

    # (nabla_{phiX} phi)Y + phi (nabla_X phi)Y - g(AX,Y) xi
    #   - 2 alpha (g(X,Y) xi - eta(Y) X) = 0
    res_a2 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                t1 = sum(phi[c, a] * nabphi[i, b, c] for c in rng)
                t2 = sum(phi[i, m] * nabphi[m, b, a] for m in rng)
                t3 = gA[a][b] * xi[i]
                t4 = 2 * alpha * (g[a, b] * xi[i] - eta[b] * delta[i, a])
                res_a2[i, a, b] = t1 + t2 - t3 - t4
    items.append(
        _residual_item(
            "phi-derivative symmetry (second companion)",
            TensorField(chart, 1, 2, res_a2),
        )
    )

    # phi (nabla_{phiX} phi)Y + (nabla_X phi)Y
    #   = -2 alpha eta(Y) phi X + g(alpha phi X + h X, Y) xi
    res_or = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                t1 = sum(
                    phi[i, m] * phi[c, a] * nabphi[m, b, c] for m in rng for c in rng
                )
                t2 = nabphi[i, b, a]
                rhs = -2 * alpha * eta[b] * phi[i, a] + (
                    alpha * gphi[b][a] + gh[a][b]
                ) * xi[i]
                res_or[i, a, b] = t1 + t2 - rhs
    items.append(
        _residual_item(
            "phi-derivative contraction with h-term",
            TensorField(chart, 1, 2, res_or),
        )
    )
    return items


# --------------------------------------------------------------------
# normality, para-Kaehler leaves, second fundamental form


def nijenhuis_normality(s: AlmostParacontactStructure) -> Tuple[TensorField, bool]:
    """N1(X,Y) = [phi,phi](X,Y) - 2 d(eta)(X,Y) xi; normal iff N1 = 0."""
    chart = s.chart
    n_tot = s.dim
    rng = range(n_tot)
    phi, xi = s.phi.array, s.xi.array
    deta = exterior_derivative(s.eta).array  # deta[i,j] = 2 d(eta)(d_i, d_j)
    out = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for k in rng:
        for i in rng:
            for j in rng:
                nij = sum(
                    phi[m, i] * chart.pdiff(phi[k, j], m)
                    - phi[m, j] * chart.pdiff(phi[k, i], m)
                    + phi[k, m] * chart.pdiff(phi[m, i], j)
                    - phi[k, m] * chart.pdiff(phi[m, j], i)
                    for m in rng
                )
                out[k, i, j] = nij - deta[i, j] * xi[k]
    N1 = TensorField(chart, 1, 2, out)
    return N1, N1.is_zero()


def parakaehler_leaves_residual(an: StructureAnalysis) -> TensorField:
    """Residual of (nabla_X phi)Y = alpha g(phiX,Y) xi + g(hX,Y) xi
    - alpha eta(Y) phi X - eta(Y) h X, as a (1,2)-tensor (i; X=a, Y=b)."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    h = an.h.array
    alpha = an.alpha.expr
    nabphi = an.nabphi.array
    out = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                gphiab = sum(g[m, b] * phi[m, a] for m in rng)
                ghab = sum(g[m, b] * h[m, a] for m in rng)
                rhs = (
                    alpha * gphiab * xi[i]
                    + ghab * xi[i]
                    - alpha * eta[b] * phi[i, a]
                    - eta[b] * h[i, a]
                )
                out[i, a, b] = nabphi[i, b, a] - rhs
    return TensorField(an.chart, 1, 2, out)


def parakaehler_leaves_check(an: StructureAnalysis) -> bool:
    return parakaehler_leaves_residual(an).is_zero()


def shape_operator_residual(an: StructureAnalysis) -> TensorField:
    """Residual of the equivalent leaves condition
    (nabla_X phi)Y = g(AX, phiY) xi + eta(Y) phi A X."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    A = an.A.array
    phiA = compose11(s.phi, an.A).array
    nabphi = an.nabphi.array
    out = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                gApb = sum(
                    g[m, mm] * A[m, a] * phi[mm, b] for m in rng for mm in rng
                )
                out[i, a, b] = nabphi[i, b, a] - (gApb * xi[i] + eta[b] * phiA[i, a])
    return TensorField(an.chart, 1, 2, out)


@dataclass
class LeafGeometry:
    second_fundamental_form: TensorField  # (0,2), supported on ker(eta)
    umbilical: bool
    geodesic: bool


def leaf_second_fundamental_form(an: StructureAnalysis) -> LeafGeometry:
    """II(X,Y) = -alpha g(PX, PY) - g(PX, phi h PY), P the ker(eta) projection."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    g = s.g.array
    P = an.proj.array
    phih = an.phih.array
    alpha = an.alpha.expr
    out = sp.MutableDenseNDimArray.zeros(n_tot, n_tot)
    for a in rng:
        for b in rng:
            px = [P[m, a] for m in rng]
            py = [P[m, b] for m in rng]
            gpp = sum(g[m, mm] * px[m] * py[mm] for m in rng for mm in rng)
            phpy = [sum(phih[m, mm] * py[mm] for mm in rng) for m in rng]
            gphp = sum(g[m, mm] * px[m] * phpy[mm] for m in rng for mm in rng)
            out[a, b] = -alpha * gpp - gphp
    II = TensorField(an.chart, 0, 2, out)
    h_zero = an.h.is_zero()
    alpha_zero = an.alpha.is_zero()
    return LeafGeometry(II, umbilical=h_zero and not alpha_zero, geodesic=h_zero and alpha_zero)


def para_kenmotsu_biconditional(an: StructureAnalysis) -> CheckItem:
    """A normal structure with alpha = 1 is characterized by A = -phi^2.

    Left side: normality (vanishing N^1) together with alpha = 1 and
    para-Kaehler leaves.  Right side: the shape operator equals -phi^2.
    Both sides are decidable exactly, and the check asserts they agree."""
    s = an.structure
    name = "para-Kenmotsu criterion: normal with alpha = 1 <=> A = -phi^2"
    if not an.is_apc:
        return CheckItem(name, "skip", reason="not an apc structure")
    _, normal = nijenhuis_normality(s)
    lhs = normal and an.alpha == 1 and parakaehler_leaves_check(an)
    phi2 = compose11(s.phi, s.phi)
    rhs = (an.A + phi2).is_zero()
    if lhs == rhs:
        return CheckItem(name, "pass")
    return CheckItem(
        name,
        "fail",
        witness=f"normal/alpha=1/leaves side = {lhs}, A = -phi^2 side = {rhs}",
    )
