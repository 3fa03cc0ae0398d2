"""Curvature identities tied to the Reeb field.

Everything here consumes a StructureAnalysis.  The identities fall into two
groups: those valid for arbitrary alpha (the general R(X,Y)xi formula) and
those requiring constant alpha (the Jacobi-operator suite, the Ricci
commutator, constant sectional curvature, harmonicity of xi).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from .errors import DegenerateMetricError
from .geometry import TensorField, compose11, directional_covariant, trace11
from .scalars import ScalarField
from .structures import CheckItem, StructureAnalysis, _residual_item, _scalar_item


def check_rxyxi_general(an: StructureAnalysis) -> List[CheckItem]:
    """R(X,Y)xi through derivatives of alpha and of phi.h (any alpha)."""
    s = an.structure
    chart = an.chart
    n_tot = s.dim
    rng = range(n_tot)
    if not an.is_apc:
        return [CheckItem("R(X,Y)xi formulas", "skip", reason="not apc")]

    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    alpha = an.alpha.expr
    phih = an.phih.array
    nabphih = an.nabphih.array
    R = an.R.array
    dal = [an.alpha.partial(c).expr for c in rng]
    delta = sp.eye(n_tot)
    items: List[CheckItem] = []

    res = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                lhs = sum(R[i, a, b, k] * xi[k] for k in rng)
                rhs = (
                    dal[a] * (delta[i, b] - eta[b] * xi[i])
                    - dal[b] * (delta[i, a] - eta[a] * xi[i])
                    + alpha * eta[a] * (alpha * delta[i, b] + phih[i, b])
                    - alpha * eta[b] * (alpha * delta[i, a] + phih[i, a])
                    + nabphih[i, b, a]
                    - nabphih[i, a, b]
                )
                res[i, a, b] = lhs - rhs
    items.append(
        _residual_item(
            "R(X,Y)xi via d(alpha) and nabla(phi.h)", TensorField(chart, 1, 2, res)
        )
    )

    if s.n >= 2 and an.alpha_extraction.f is not None:
        f = an.alpha_extraction.f.expr
        res2 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
        for i in rng:
            for a in rng:
                for b in rng:
                    lhs = sum(R[i, a, b, k] * xi[k] for k in rng)
                    rhs = (
                        (f + alpha**2)
                        * (eta[a] * delta[i, b] - eta[b] * delta[i, a])
                        + alpha * (eta[a] * phih[i, b] - eta[b] * phih[i, a])
                        + nabphih[i, b, a]
                        - nabphih[i, a, b]
                    )
                    res2[i, a, b] = lhs - rhs
        items.append(
            _residual_item(
                "R(X,Y)xi with f (higher dimension)", TensorField(chart, 1, 2, res2)
            )
        )
    else:
        items.append(
            CheckItem(
                "R(X,Y)xi with f (higher dimension)",
                "skip",
                reason="stated only for dim >= 5",
            )
        )
    return items


def divergence_phih(an: StructureAnalysis) -> TensorField:
    """div(phi.h)^k = g^{ij} (nabla_i phi.h)^k_j, a vector field."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    ginv = an.ginv.array
    nabphih = an.nabphih.array
    comps = [
        sum(ginv[i, j] * nabphih[k, j, i] for i in rng for j in rng) for k in rng
    ]
    return TensorField(an.chart, 1, 0, comps)


def check_r2_suite(an: StructureAnalysis) -> List[CheckItem]:
    """Jacobi-operator and Ricci consequences (constant alpha only)."""
    s = an.structure
    chart = an.chart
    n_tot, n = s.dim, s.n
    rng = range(n_tot)
    names = [
        "R(xi,X)xi via h and nabla_xi(h)",
        "nabla_xi(h) via the Jacobi operator",
        "phi-average of the Jacobi operator",
        "S(X,xi) via div(phi.h)",
        "S(xi,xi) = -2n alpha^2 + tr h^2",
    ]
    if not an.is_apc:
        return [CheckItem(nm, "skip", reason="not apc") for nm in names]
    if not an.alpha_is_constant:
        return [CheckItem(nm, "skip", reason="alpha is not constant") for nm in names]

    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    alpha = an.alpha.expr
    h = an.h
    phih = an.phih
    R = an.R.array
    items: List[CheckItem] = []

    nab_xi_h = directional_covariant(h, an.conn, s.xi)
    h2 = compose11(h, h)
    phi2 = compose11(s.phi, s.phi)

    # R(xi,X)xi = alpha^2 phi^2 X + 2 alpha phi h X - h^2 X + phi (nabla_xi h) X
    lhs = [
        [sum(R[i, a, j, k] * xi[a] * xi[k] for a in rng for k in rng) for j in rng]
        for i in rng
    ]
    rhs = (
        phi2.scale(alpha**2)
        + phih.scale(2 * alpha)
        - h2
        + compose11(s.phi, nab_xi_h)
    )
    items.append(
        _residual_item(names[0], TensorField(chart, 1, 1, lhs) - rhs)
    )

    # (nabla_xi h) X = -alpha^2 phi X - 2 alpha h X + phi h^2 X - phi R(X,xi)xi
    phil = compose11(s.phi, an.l)
    rhs2 = (
        -s.phi.scale(alpha**2)
        - h.scale(2 * alpha)
        + compose11(s.phi, h2)
        - phil
    )
    items.append(_residual_item(names[1], nab_xi_h - rhs2))

    # (1/2)(R(xi,X)xi + phi R(xi, phi X)xi) = alpha^2 phi^2 X - h^2 X
    lhs3 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot)
    for i in rng:
        for j in rng:
            first = sum(R[i, a, j, k] * xi[a] * xi[k] for a in rng for k in rng)
            second = sum(
                phi[i, m] * R[m, a, mm, k] * xi[a] * phi[mm, j] * xi[k]
                for m in rng
                for a in rng
                for mm in rng
                for k in rng
            )
            lhs3[i, j] = sp.Rational(1, 2) * (first + second)
    rhs3 = phi2.scale(alpha**2) - h2
    items.append(
        _residual_item(names[2], TensorField(chart, 1, 1, lhs3) - rhs3)
    )

    # S(X,xi) = -2n alpha^2 eta(X) + g(div(phi.h), X)
    div = divergence_phih(an).array
    S = an.S.array
    res4 = [
        sp.cancel(
            sum(S[j, k] * xi[k] for k in rng)
            + 2 * n * alpha**2 * eta[j]
            - sum(g[m, j] * div[m] for m in rng)
        )
        for j in rng
    ]
    items.append(_residual_item(names[3], TensorField(chart, 0, 1, res4)))

    szz = sum(S[a, b] * xi[a] * xi[b] for a in rng for b in rng)
    items.append(
        _scalar_item(names[4], szz + 2 * n * alpha**2 - trace11(h2).expr)
    )
    return items


def check_r3_identity(an: StructureAnalysis) -> CheckItem:
    """Four-term curvature average against the h-directional nabla(Phi)."""
    s = an.structure
    name = "curvature phi-average via nabla(Phi)"
    if not an.is_apc:
        return CheckItem(name, "skip", reason="not apc")
    if not an.alpha_is_constant:
        return CheckItem(name, "skip", reason="alpha is not constant")
    chart = an.chart
    n_tot = s.dim
    rng = range(n_tot)
    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    alpha = an.alpha.expr
    R = an.R.array
    nabPhi = an.nabPhi.array
    h = an.h.array
    phih = an.phih.array

    def rxi(a, b, i):  # (R(xi, d_a) d_b)^i
        return sum(R[i, m, a, b] * xi[m] for m in rng)

    gphih = [
        [sum(g[m, b] * phih[m, a] for m in rng) for b in rng] for a in rng
    ]
    res = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for a in rng:
        for b in rng:
            for c in rng:
                lhs = (
                    sum(g[i, c] * rxi(a, b, i) for i in rng)
                    + sum(
                        g[i, mm] * rxi(a, m, i) * phi[m, b] * phi[mm, c]
                        for i in rng
                        for m in rng
                        for mm in rng
                    )
                    - sum(
                        g[i, c] * R[i, m, mm, k] * xi[m] * phi[mm, a] * phi[k, b]
                        for i in rng
                        for m in rng
                        for mm in rng
                        for k in rng
                    )
                    - sum(
                        g[i, mm] * R[i, m, k, b] * xi[m] * phi[k, a] * phi[mm, c]
                        for i in rng
                        for m in rng
                        for k in rng
                        for mm in rng
                    )
                )
                rhs = (
                    2 * sum(h[d, a] * nabPhi[b, c, d] for d in rng)
                    + 2 * alpha**2 * eta[b] * g[a, c]
                    - 2 * alpha**2 * eta[c] * g[a, b]
                    - 2 * alpha * eta[c] * gphih[a][b]
                    + 2 * alpha * eta[b] * gphih[a][c]
                )
                res[a, b, c] = lhs - rhs
    return _residual_item(name, TensorField(chart, 0, 3, res))


def check_q_commutator(an: StructureAnalysis) -> CheckItem:
    """Ricci-operator commutator with phi (constant alpha, leaves condition)."""
    from .structures import parakaehler_leaves_check

    s = an.structure
    name = "Ricci commutator [Q,phi]"
    if not an.is_apc:
        return CheckItem(name, "skip", reason="not apc")
    if not an.alpha_is_constant:
        return CheckItem(name, "skip", reason="alpha is not constant")
    if not parakaehler_leaves_check(an):
        return CheckItem(name, "skip", reason="leaves are not para-Kaehler")
    chart = an.chart
    n_tot, n = s.dim, s.n
    rng = range(n_tot)
    phi, xi, eta = s.phi.array, s.xi.array, s.eta.array
    alpha = an.alpha.expr
    Q = an.Q
    l = an.l
    lhs = compose11(Q, s.phi) - compose11(s.phi, Q)
    base = (
        compose11(l, s.phi)
        - compose11(s.phi, l)
        - an.h.scale(4 * alpha * (1 - n))
    )
    phiQxi = [
        sum(phi[i, m] * Q.array[m, k] * xi[k] for m in rng for k in rng)
        for i in rng
    ]
    etaQphi = [
        sum(eta[m] * Q.array[m, k] * phi[k, j] for m in rng for k in rng)
        for j in rng
    ]
    corr = [
        [
            sp.cancel(-eta[j] * phiQxi[i] + etaQphi[j] * xi[i])
            for j in rng
        ]
        for i in rng
    ]
    rhs = base + TensorField(chart, 1, 1, corr)
    return _residual_item(name, lhs - rhs)


@dataclass
class ConstantCurvatureResult:
    is_space_form: bool
    c: Optional[sp.Rational]  # the sectional curvature when constant
    witness: Optional[str] = None


def constant_curvature_probe(an: StructureAnalysis) -> ConstantCurvatureResult:
    """Test R(X,Y)Z = c (g(Y,Z)X - g(X,Z)Y) and recover c exactly."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    g = s.g.array
    R = an.R.array
    delta = sp.eye(n_tot)

    model = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                for k in rng:
                    model[i, a, b, k] = g[b, k] * delta[i, a] - g[a, k] * delta[i, b]

    subs = an.chart.point_subs()
    c_expr = None
    for idx in an.R.indices():
        m = model[idx]
        if m == 0:
            continue
        num, den = sp.fraction(sp.cancel(m))
        if den.subs(subs) == 0 or num.subs(subs) == 0:
            continue
        c_expr = sp.cancel(R[idx] / m)
        break
    if c_expr is None:
        c_expr = sp.Integer(0)

    residual = an.R - TensorField(an.chart, 1, 3, model).scale(c_expr)
    if not residual.is_zero():
        w = residual.first_nonzero()
        return ConstantCurvatureResult(
            False, None, witness=f"component {w[0]}: {sp.sstr(w[1])}"
        )
    cf = ScalarField(an.chart.context, c_expr)
    if not cf.is_constant():
        return ConstantCurvatureResult(
            False, None, witness=f"c = {cf} is not constant"
        )
    return ConstantCurvatureResult(True, cf.constant_value())


def check_space_form_constraints(an: StructureAnalysis) -> List[CheckItem]:
    """If the metric has constant sectional curvature c, then c = -alpha^2
    and h^2 = 0."""
    probe = constant_curvature_probe(an)
    if not probe.is_space_form:
        return [
            CheckItem(
                "space-form constraints",
                "skip",
                reason="not of constant sectional curvature",
            )
        ]
    items = []
    alpha = an.alpha.expr
    items.append(
        _scalar_item("space form: c = -alpha^2", probe.c + alpha**2)
    )
    items.append(
        _residual_item("space form: h^2 = 0", compose11(an.h, an.h))
    )
    return items


# --------------------------------------------------------------------
# rough Laplacian of xi and harmonicity


def rough_laplacian_xi(an: StructureAnalysis) -> TensorField:
    """Trace of the second covariant derivative of xi, as a vector field."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    from .geometry import covariant_derivative

    nxi = covariant_derivative(s.xi, an.conn)  # [k, c]
    nnxi = covariant_derivative(nxi, an.conn)  # [k, c, d], d the new direction
    ginv = an.ginv.array
    comps = [
        sum(ginv[c, d] * nnxi.array[k, c, d] for c in rng for d in rng)
        for k in rng
    ]
    return TensorField(an.chart, 1, 0, comps)


def check_rough_laplacian_formula(an: StructureAnalysis) -> CheckItem:
    """-trace(nabla^2 xi) = (2n alpha^2 - tr h^2) xi - P(Q xi), with P the
    projection onto ker(eta).

    The right side equals -Q(xi), so the statement is trace(nabla^2 xi) =
    Q(xi); the closed form is stated for the Bochner-sign Laplacian
    (the one with nonnegative spectrum on a compact Riemannian manifold)."""
    s = an.structure
    name = "rough Laplacian of xi, closed form"
    if not an.is_apc:
        return CheckItem(name, "skip", reason="not apc")
    if not an.alpha_is_constant:
        return CheckItem(name, "skip", reason="alpha is not constant")
    n_tot, n = s.dim, s.n
    rng = range(n_tot)
    alpha = an.alpha.expr
    trh2 = trace11(compose11(an.h, an.h)).expr
    Qxi = [
        sum(an.Q.array[i, k] * s.xi.array[k] for k in rng) for i in rng
    ]
    PQxi = [
        sum(an.proj.array[i, m] * Qxi[m] for m in rng) for i in rng
    ]
    rhs = [
        sp.cancel((2 * n * alpha**2 - trh2) * s.xi.array[i] - PQxi[i])
        for i in rng
    ]
    lap = rough_laplacian_xi(an)
    return _residual_item(name, (-lap) - TensorField(an.chart, 1, 0, rhs))


def frame_laplacian_cross_check(
    an: StructureAnalysis,
    points: Sequence[Sequence[Fraction]],
    tol: float = 1e-9,
) -> CheckItem:
    """Numeric cross-check of the g-trace in rough_laplacian_xi against a
    pseudo-orthonormal frame built pointwise by congruence reduction."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    name = "rough Laplacian frame cross-check"
    from .geometry import covariant_derivative

    nxi = covariant_derivative(s.xi, an.conn)
    nnxi = covariant_derivative(nxi, an.conn)
    lap = rough_laplacian_xi(an)
    worst = 0.0
    for pt in points:
        gm = sp.Matrix(n_tot, n_tot, lambda i, j: 0)
        gnum = s.g.numeric_at(pt)
        for i in rng:
            for j in rng:
                gm[i, j] = sp.Float(gnum[i, j], 30)
        basis, signs = _numeric_frame(gm)
        nn = nnxi.numeric_at(pt)
        expect = lap.numeric_at(pt)
        for k in rng:
            acc = sp.Float(0, 30)
            for e, eps in zip(basis, signs):
                acc += eps * sum(
                    e[c] * e[d] * nn[k, c, d] for c in rng for d in rng
                )
            worst = max(worst, abs(float(acc - expect[k])))
    if worst <= tol:
        return CheckItem(name, "pass")
    return CheckItem(name, "fail", witness=f"max deviation {worst:.3e}")


def _numeric_frame(gm: sp.Matrix) -> Tuple[List[List[sp.Float]], List[int]]:
    """Vectors e_i with g(e_i, e_j) = eps_i delta_ij, by congruence
    reduction of the Gram matrix (floating point)."""
    n = gm.rows
    basis = [[sp.Float(1 if i == j else 0, 30) for j in range(n)] for i in range(n)]

    def inner(u, v):
        return sum(u[a] * gm[a, b] * v[b] for a in range(n) for b in range(n))

    frame, signs = [], []
    vecs = [list(b) for b in basis]
    for step in range(n):
        # pick the remaining vector with the largest self-inner-product,
        # mixing in another one if all diagonals are tiny
        best, best_val = None, 0.0
        for i, v in enumerate(vecs):
            val = abs(float(inner(v, v)))
            if val > best_val:
                best, best_val = i, val
        if best is None or best_val < 1e-12:
            v0 = vecs[0]
            for w in vecs[1:]:
                cand = [a + b for a, b in zip(v0, w)]
                if abs(float(inner(cand, cand))) > 1e-12:
                    vecs[0] = cand
                    break
            best = 0
        v = vecs.pop(best)
        q = inner(v, v)
        eps = 1 if float(q) > 0 else -1
        scale = sp.sqrt(abs(q))
        e = [comp / scale for comp in v]
        frame.append(e)
        signs.append(eps)
        vecs = [
            [w[a] - eps * inner(w, e) * e[a] for a in range(n)] for w in vecs
        ]
    return frame, signs


def xi_is_harmonic(an: StructureAnalysis) -> Tuple[bool, Optional[str]]:
    """xi is harmonic iff Q xi = S(xi,xi) xi, equivalently sigma = 0."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    szz = sum(
        an.S.array[a, b] * s.xi.array[a] * s.xi.array[b] for a in rng for b in rng
    )
    res = [
        sp.cancel(
            sum(an.Q.array[i, k] * s.xi.array[k] for k in rng) - szz * s.xi.array[i]
        )
        for i in rng
    ]
    t = TensorField(an.chart, 1, 0, res)
    w = t.first_nonzero()
    if w is None:
        return True, None
    return False, f"Q(xi) - S(xi,xi) xi has component {w[0]}: {sp.sstr(w[1])}"


def check_jacobi_self_adjoint(an: StructureAnalysis) -> CheckItem:
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    g = s.g.array
    l = an.l.array
    gl = [[sum(g[m, j] * l[m, i] for m in rng) for j in rng] for i in rng]
    res = [[sp.cancel(gl[i][j] - gl[j][i]) for j in rng] for i in rng]
    return _residual_item(
        "Jacobi operator self-adjoint", TensorField(an.chart, 0, 2, res)
    )


def three_dim_decomposition_residual(
    g: TensorField, ricci_sign: int = 1
) -> TensorField:
    """In three dimensions the curvature tensor is determined by the Ricci
    tensor:

    R(X,Y)Z = g(Y,Z)QX - g(X,Z)QY + g(QY,Z)X - g(QX,Z)Y
              - (r/2)(g(Y,Z)X - g(X,Z)Y).

    Returns the (1,3) residual for an arbitrary metric; ricci_sign = -1
    flips the sign convention of Q (and r) and must break the identity on
    any non-flat metric."""
    from .geometry import (
        christoffel,
        ricci_operator,
        ricci_tensor,
        riemann,
        scalar_curvature,
    )

    chart = g.chart
    if chart.dim != 3:
        raise ValueError("the decomposition is specific to three dimensions")
    conn = christoffel(g)
    R = riemann(conn)
    S = ricci_tensor(R)
    Q = ricci_operator(S, g).scale(sp.Integer(ricci_sign))
    r = scalar_curvature(S, g).expr * ricci_sign
    rng = range(3)
    ga, Qa = g.array, Q.array
    gQ = [[sum(ga[m, j] * Qa[m, i] for m in rng) for j in rng] for i in rng]
    delta = sp.eye(3)
    res = sp.MutableDenseNDimArray.zeros(3, 3, 3, 3)
    for i in rng:
        for a in rng:
            for b in rng:
                for k in rng:
                    model = (
                        ga[b, k] * Qa[i, a]
                        - ga[a, k] * Qa[i, b]
                        + gQ[b][k] * delta[i, a]
                        - gQ[a][k] * delta[i, b]
                        - (r / 2) * (ga[b, k] * delta[i, a] - ga[a, k] * delta[i, b])
                    )
                    res[i, a, b, k] = R.array[i, a, b, k] - model
    return TensorField(chart, 1, 3, res)
