"""(kappa, mu, nu)-nullity detection and its consequences.

A structure satisfies the nullity condition when
R(X,Y)xi = eta(Y) B X - eta(X) B Y with B = kappa*phi^2 + mu*h + nu*phi.h
for scalars kappa, mu, nu constant along the leaves (d(.)^eta = 0).
Setting Y = xi shows B must equal the Jacobi operator l, so the fit solves
l = kappa*phi^2 + mu*h + nu*phi.h componentwise over the rational-function
field by exact Gaussian elimination, then verifies the full two-argument
condition.  When h = 0 only kappa is determined (mu, nu unconstrained);
when {phi^2, h, phi.h} are linearly dependent with h != 0 (nilpotent h)
the fit solves on a maximal independent subset and reports the
representation as non-unique after global verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import sympy as sp

from .geometry import TensorField, compose11, directional_covariant, identity_tensor
from .scalars import ScalarField
from .structures import CheckItem, StructureAnalysis, _residual_item, _scalar_item


@dataclass
class NullityFit:
    status: str  # "exact" | "degenerate_h_zero" | "not_nullity"
    kappa: Optional[ScalarField] = None
    mu: Optional[ScalarField] = None
    nu: Optional[ScalarField] = None
    B: Optional[TensorField] = None
    witness: Optional[str] = None
    unique: bool = True  # False when the parameter representation is non-unique

    @property
    def triple(self):
        return (self.kappa, self.mu, self.nu)


def _solve_linear_field_system(
    rows: List[Tuple[List[sp.Expr], sp.Expr]], n_unknowns: int
) -> Optional[Tuple[List[Optional[sp.Expr]], bool]]:
    """Exact Gaussian elimination of an overdetermined linear system over
    the rational-function field.

    Returns (solution, unique) with None entries for unconstrained
    unknowns, or None if the system is inconsistent on the pivot rows.
    The caller must still verify the solution against all rows (a
    consistent pivot subset does not imply global consistency)."""
    rows = [([sp.cancel(c) for c in coeffs], sp.cancel(rhs)) for coeffs, rhs in rows]
    rows = [r for r in rows if any(c != 0 for c in r[0]) or r[1] != 0]
    pivots: List[Optional[int]] = [None] * n_unknowns
    reduced: List[Tuple[List[sp.Expr], sp.Expr]] = []
    for col in range(n_unknowns):
        pick = None
        for ridx, (coeffs, rhs) in enumerate(rows):
            if coeffs[col] != 0 and all(
                coeffs[c] == 0 for c in range(col) if pivots[c] is not None
            ):
                pick = ridx
                break
        if pick is None:
            continue
        coeffs, rhs = rows.pop(pick)
        inv = coeffs[col]
        coeffs = [sp.cancel(c / inv) for c in coeffs]
        rhs = sp.cancel(rhs / inv)
        reduced.append((coeffs, rhs))
        pivots[col] = len(reduced) - 1
        new_rows = []
        for rc, rr in rows:
            f = rc[col]
            if f != 0:
                rc = [sp.cancel(a - f * b) for a, b in zip(rc, coeffs)]
                rr = sp.cancel(rr - f * rhs)
            if any(c != 0 for c in rc) or rr != 0:
                new_rows.append((rc, rr))
        rows = new_rows
    if rows:
        # leftover rows have all-zero coefficients but nonzero rhs
        if any(rhs != 0 for _, rhs in rows):
            return None
    # back substitution, free unknowns set to None
    sol: List[Optional[sp.Expr]] = [None] * n_unknowns
    for col in reversed(range(n_unknowns)):
        if pivots[col] is None:
            continue
        coeffs, rhs = reduced[pivots[col]]
        acc = rhs
        for c in range(col + 1, n_unknowns):
            if coeffs[c] != 0:
                acc -= coeffs[c] * (sol[c] if sol[c] is not None else 0)
        sol[col] = sp.cancel(acc)
    unique = all(p is not None for p in pivots)
    return sol, unique


def _bi_residual(an: StructureAnalysis, B: TensorField) -> TensorField:
    """R(X,Y)xi - [eta(Y) B X - eta(X) B Y]."""
    s = an.structure
    n_tot = s.dim
    rng = range(n_tot)
    xi, eta = s.xi.array, s.eta.array
    R = an.R.array
    Ba = B.array
    out = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                out[i, a, b] = sum(R[i, a, b, k] * xi[k] for k in rng) - (
                    eta[b] * Ba[i, a] - eta[a] * Ba[i, b]
                )
    return TensorField(an.chart, 1, 2, out)


def _r_eta_ok(an: StructureAnalysis, fld: Optional[ScalarField]) -> Optional[str]:
    """d(fld) ^ eta = 0 check; returns a witness string on failure."""
    if fld is None:
        return None
    s = an.structure
    n_tot = s.dim
    d = [fld.partial(c).expr for c in range(n_tot)]
    eta = s.eta.array
    for i in range(n_tot):
        for j in range(i + 1, n_tot):
            v = sp.cancel(d[i] * eta[j] - d[j] * eta[i])
            if v != 0:
                return f"({i},{j}): {sp.sstr(v)}"
    return None


def nullity_fit(an: StructureAnalysis) -> NullityFit:
    s = an.structure
    ctx = an.chart.context
    n_tot = s.dim
    rng = range(n_tot)
    P = an.proj  # phi^2
    h = an.h
    phih = an.phih
    l = an.l

    if h.is_zero():
        # fit kappa alone: l = kappa * P
        rows = [([P.array[i, j]], l.array[i, j]) for i in rng for j in rng]
        solved = _solve_linear_field_system(rows, 1)
        if solved is None:
            return NullityFit("not_nullity", witness="l is not proportional to phi^2")
        (kv,), _ = solved
        kv = kv if kv is not None else sp.Integer(0)
        B = P.scale(kv)
        residual = _bi_residual(an, B)
        w = residual.first_nonzero()
        if w is not None:
            return NullityFit(
                "not_nullity",
                witness=f"component {w[0]}: {sp.sstr(w[1])}",
            )
        kappa = ScalarField(ctx, kv)
        bad = _r_eta_ok(an, kappa)
        if bad is not None:
            return NullityFit(
                "not_nullity", witness=f"d(kappa)^eta != 0 at {bad}"
            )
        return NullityFit("degenerate_h_zero", kappa=kappa, B=B)

    rows = [
        (
            [P.array[i, j], h.array[i, j], phih.array[i, j]],
            l.array[i, j],
        )
        for i in rng
        for j in rng
    ]
    solved = _solve_linear_field_system(rows, 3)
    if solved is None:
        return NullityFit(
            "not_nullity",
            witness="l is not in the span of {phi^2, h, phi.h}",
        )
    sol, unique = solved
    vals = [v if v is not None else sp.Integer(0) for v in sol]
    kv, mv, nv = vals
    B = P.scale(kv) + h.scale(mv) + phih.scale(nv)
    residual = _bi_residual(an, B)
    w = residual.first_nonzero()
    if w is not None:
        return NullityFit(
            "not_nullity", witness=f"component {w[0]}: {sp.sstr(w[1])}"
        )
    kappa, mu, nu = (ScalarField(ctx, v) for v in vals)
    for name, fld in (("kappa", kappa), ("mu", mu), ("nu", nu)):
        bad = _r_eta_ok(an, fld)
        if bad is not None:
            return NullityFit(
                "not_nullity", witness=f"d({name})^eta != 0 at {bad}"
            )
    return NullityFit("exact", kappa=kappa, mu=mu, nu=nu, B=B, unique=unique)


# --------------------------------------------------------------------
# consequences of the nullity condition


def check_irem_suite(an: StructureAnalysis, fit: NullityFit) -> List[CheckItem]:
    """The eleven consequences of an exact (kappa,mu,nu) fit with constant
    alpha."""
    names = [
        "l = kappa phi^2 + mu h + nu phi.h",
        "l.phi - phi.l = 2 mu h.phi - 2 nu h",
        "h^2 = (kappa + alpha^2) phi^2",
        "nabla_xi(h) = -(2 alpha + nu) h + mu h.phi",
        "nabla_xi(h^2) = -2(2 alpha + nu)(kappa + alpha^2) phi^2",
        "xi(kappa) = -2(2 alpha + nu)(kappa + alpha^2)",
        "R(xi,X)Y nullity expansion",
        "Q xi = 2 n kappa xi",
        "nabla(phi) collapses to the h-form",
        "antisymmetrized nabla(phi.h) expansion",
        "antisymmetrized nabla(h) expansion",
    ]
    if fit.status != "exact":
        return [
            CheckItem(nm, "skip", reason=f"fit status is {fit.status}")
            for nm in names
        ]
    if not an.alpha_is_constant:
        return [
            CheckItem(nm, "skip", reason="alpha is not constant") for nm in names
        ]

    s = an.structure
    chart = an.chart
    n_tot, n = s.dim, s.n
    rng = range(n_tot)
    g, phi, xi, eta = s.g.array, s.phi.array, s.xi.array, s.eta.array
    alpha = an.alpha.expr
    kappa, mu, nu = fit.kappa.expr, fit.mu.expr, fit.nu.expr
    h, phih, P = an.h, an.phih, an.proj
    delta = sp.eye(n_tot)
    items: List[CheckItem] = []

    items.append(
        _residual_item(
            names[0], an.l - (P.scale(kappa) + h.scale(mu) + phih.scale(nu))
        )
    )

    lphi = compose11(an.l, s.phi)
    phil = compose11(s.phi, an.l)
    hphi = compose11(h, s.phi)
    items.append(
        _residual_item(names[1], lphi - phil - hphi.scale(2 * mu) + h.scale(2 * nu))
    )

    h2 = compose11(h, h)
    items.append(_residual_item(names[2], h2 - P.scale(kappa + alpha**2)))

    nab_xi_h = directional_covariant(h, an.conn, s.xi)
    items.append(
        _residual_item(
            names[3], nab_xi_h + h.scale(2 * alpha + nu) - hphi.scale(mu)
        )
    )

    nab_xi_h2 = directional_covariant(h2, an.conn, s.xi)
    items.append(
        _residual_item(
            names[4],
            nab_xi_h2 + P.scale(2 * (2 * alpha + nu) * (kappa + alpha**2)),
        )
    )

    xikappa = an.xi_derivative(fit.kappa).expr
    items.append(
        _scalar_item(
            names[5], xikappa + 2 * (2 * alpha + nu) * (kappa + alpha**2)
        )
    )

    # R(xi,X)Y = kappa(g(X,Y)xi - eta(Y)X) + mu(g(X,hY)xi - eta(Y)hX)
    #   + nu(g(X,phi.h Y)xi - eta(Y) phi.h X)
    R = an.R.array
    gh = [[sum(g[a, m] * h.array[m, b] for m in rng) for b in rng] for a in rng]
    gphih = [
        [sum(g[a, m] * phih.array[m, b] for m in rng) for b in rng] for a in rng
    ]
    res7 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                lhs = sum(R[i, m, a, b] * xi[m] for m in rng)
                rhs = (
                    kappa * (g[a, b] * xi[i] - eta[b] * delta[i, a])
                    + mu * (gh[a][b] * xi[i] - eta[b] * h.array[i, a])
                    + nu * (gphih[a][b] * xi[i] - eta[b] * phih.array[i, a])
                )
                res7[i, a, b] = lhs - rhs
    items.append(_residual_item(names[6], TensorField(chart, 1, 2, res7)))

    Qxi = [
        sp.cancel(
            sum(an.Q.array[i, k] * xi[k] for k in rng) - 2 * n * kappa * xi[i]
        )
        for i in rng
    ]
    items.append(_residual_item(names[7], TensorField(chart, 1, 0, Qxi)))

    # (nabla_X phi)Y = g(Y, hX + alpha phi X) xi - eta(Y)(hX + alpha phi X)
    nabphi = an.nabphi.array
    res9 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                w = [
                    h.array[m, a] + alpha * phi[m, a] for m in rng
                ]  # hX + alpha phi X
                gyw = sum(g[b, m] * w[m] for m in rng)
                res9[i, a, b] = nabphi[i, b, a] - (gyw * xi[i] - eta[b] * w[i])
    items.append(_residual_item(names[8], TensorField(chart, 1, 2, res9)))

    # (nabla_X phi.h)Y - (nabla_Y phi.h)X = (kappa+alpha^2)(eta(Y)X - eta(X)Y)
    #   + mu(eta(Y)hX - eta(X)hY) + (nu+alpha)(eta(Y)phi.h X - eta(X)phi.h Y)
    nabphih = an.nabphih.array
    res10 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                lhs = nabphih[i, b, a] - nabphih[i, a, b]
                rhs = (
                    (kappa + alpha**2) * (eta[b] * delta[i, a] - eta[a] * delta[i, b])
                    + mu * (eta[b] * h.array[i, a] - eta[a] * h.array[i, b])
                    + (nu + alpha)
                    * (eta[b] * phih.array[i, a] - eta[a] * phih.array[i, b])
                )
                res10[i, a, b] = lhs - rhs
    items.append(_residual_item(names[9], TensorField(chart, 1, 2, res10)))

    # (nabla_X h)Y - (nabla_Y h)X = (kappa+alpha^2)(eta(Y)phiX - eta(X)phiY
    #   + 2 g(Y, phi X) xi) + mu(eta(Y)phi.h X - eta(X)phi.h Y)
    #   + (nu+alpha)(eta(Y)hX - eta(X)hY)
    nabh = an.nabh.array
    res11 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for b in rng:
                lhs = nabh[i, b, a] - nabh[i, a, b]
                gyphix = sum(g[b, m] * phi[m, a] for m in rng)
                rhs = (
                    (kappa + alpha**2)
                    * (
                        eta[b] * phi[i, a]
                        - eta[a] * phi[i, b]
                        + 2 * gyphix * xi[i]
                    )
                    + mu * (eta[b] * phih.array[i, a] - eta[a] * phih.array[i, b])
                    + (nu + alpha) * (eta[b] * h.array[i, a] - eta[a] * h.array[i, b])
                )
                res11[i, a, b] = lhs - rhs
    items.append(_residual_item(names[10], TensorField(chart, 1, 2, res11)))
    return items


def check_parakaehler_consequence(an: StructureAnalysis, fit: NullityFit) -> CheckItem:
    """Every exact (kappa,mu,nu)-space has para-Kaehler leaves."""
    from .structures import parakaehler_leaves_residual

    name = "nullity implies para-Kaehler leaves"
    if fit.status != "exact":
        return CheckItem(name, "skip", reason=f"fit status is {fit.status}")
    return _residual_item(name, parakaehler_leaves_residual(an))


def check_q_commutator_nullity(an: StructureAnalysis, fit: NullityFit) -> CheckItem:
    """On exact fits: Q.phi - phi.Q = 2 mu h.phi - 2(nu + 2 alpha(1-n)) h."""
    name = "[Q,phi] via (mu,nu)"
    if fit.status != "exact":
        return CheckItem(name, "skip", reason=f"fit status is {fit.status}")
    if not an.alpha_is_constant:
        return CheckItem(name, "skip", reason="alpha is not constant")
    s = an.structure
    n = s.n
    alpha = an.alpha.expr
    mu, nu = fit.mu.expr, fit.nu.expr
    lhs = compose11(an.Q, s.phi) - compose11(s.phi, an.Q)
    hphi = compose11(an.h, s.phi)
    rhs = hphi.scale(2 * mu) - an.h.scale(2 * (nu + 2 * alpha * (1 - n)))
    return _residual_item(name, lhs - rhs)
