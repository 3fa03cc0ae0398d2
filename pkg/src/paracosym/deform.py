"""Conformal and D_(gamma,beta)-homothetic deformations.

The homothetic deformation sends (phi, xi, eta, g) to
phi~ = phi, xi~ = xi/beta, eta~ = beta*eta,
g~ = gamma*g + (beta^2 - gamma)*eta(x)eta
with gamma a positive rational constant and beta a nonvanishing scalar
whose differential is proportional to eta.  It rescales the fundamental
form by gamma and turns an alpha-structure into an (alpha/beta)-structure;
A, h, and R(.,.)xi transform by explicit laws verified here.

The conformal deformation rescales the metric by e^{-2u}; the Reeb field
and its dual form must then rescale by e^{u} and e^{-u} so that the
almost-paracontact-metric axioms survive (g'(xi',xi') = 1 and the
phi-compatibility of g' both force the half rate).  The fundamental form
becomes e^{-2u} Phi and d(Phi') = 2 e^{-2u} (alpha*eta - du) ^ Phi, so the
deformation kills alpha exactly when du = alpha*eta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import sympy as sp

from .errors import DeformationParameterError
from .geometry import Chart, TensorField, compose11
from .scalars import GeneratorDecl, ScalarContext, ScalarField
from .structures import (
    AlmostParacontactStructure,
    CheckItem,
    StructureAnalysis,
    _residual_item,
)


def _check_eta_proportional(s: AlmostParacontactStructure, fld: ScalarField, what: str):
    """d(fld) ^ eta = 0, exactly."""
    n_tot = s.dim
    d = [fld.partial(c).expr for c in range(n_tot)]
    eta = s.eta.array
    for i in range(n_tot):
        for j in range(i + 1, n_tot):
            if sp.cancel(d[i] * eta[j] - d[j] * eta[i]) != 0:
                raise DeformationParameterError(
                    f"d({what}) ^ eta != 0 at component ({i},{j})"
                )


def _nonzero_at_base(s: AlmostParacontactStructure, fld: ScalarField, what: str):
    if fld.is_zero():
        raise DeformationParameterError(f"{what} is identically zero")
    pt = s.chart.base_point
    if fld.has_generators():
        if abs(fld.numeric_eval(pt)) < 1e-12:
            raise DeformationParameterError(f"{what} vanishes at the base point")
    else:
        if fld.eval(pt) == 0:
            raise DeformationParameterError(f"{what} vanishes at the base point")


def d_homothetic_deform(
    s: AlmostParacontactStructure,
    gamma: Union[int, Fraction, sp.Rational],
    beta: ScalarField,
) -> AlmostParacontactStructure:
    gamma = sp.Rational(Fraction(gamma)) if isinstance(gamma, (int, Fraction)) else sp.Rational(gamma)
    if gamma <= 0:
        raise DeformationParameterError(f"gamma must be positive, got {gamma}")
    if beta.context != s.chart.context:
        raise DeformationParameterError("beta lives in a different scalar context")
    _check_eta_proportional(s, beta, "beta")
    _nonzero_at_base(s, beta, "beta")

    n_tot = s.dim
    rng = range(n_tot)
    b = beta.expr
    xi_t = TensorField(s.chart, 1, 0, [s.xi.array[i] / b for i in rng])
    eta_t = TensorField(s.chart, 0, 1, [b * s.eta.array[i] for i in rng])
    g_t = TensorField(
        s.chart,
        0,
        2,
        [
            [
                gamma * s.g.array[i, j]
                + (b**2 - gamma) * s.eta.array[i] * s.eta.array[j]
                for j in rng
            ]
            for i in rng
        ],
    )
    return AlmostParacontactStructure(s.chart, s.phi, xi_t, eta_t, g_t)


def conformal_deform(
    an: StructureAnalysis, u: ScalarField
) -> AlmostParacontactStructure:
    """Requires du = alpha*eta (checked exactly); the output has alpha' = 0.

    u must be 0 or a rational multiple q*x_k of a single coordinate, so
    that e^{2u} is expressible by an exponential generator.
    """
    s = an.structure
    if not an.is_apc:
        raise DeformationParameterError("conformal deformation needs an apc input")
    n_tot = s.dim
    rng = range(n_tot)
    alpha = an.alpha.expr
    for c in rng:
        if sp.cancel(u.partial(c).expr - alpha * s.eta.array[c]) != 0:
            raise DeformationParameterError(
                f"du != alpha*eta at coordinate {c}; cannot conformally flatten alpha"
            )
    if u.is_zero():
        return AlmostParacontactStructure(s.chart, s.phi, s.xi, s.eta, s.g)

    coeff, coord_index = _linear_coordinate_form(u)
    ctx = s.chart.context
    rate = coeff
    decl = None
    for i, gen in enumerate(ctx.generators):
        if gen.coord_index == coord_index and gen.rate == rate:
            decl = gen
            break
    if decl is None:
        name = "E_conf"
        existing = {g.name for g in ctx.generators} | set(ctx.coord_names)
        k = 0
        while name in existing:
            k += 1
            name = f"E_conf{k}"
        decl = GeneratorDecl(name, coord_index, rate)
        ctx = ScalarContext(ctx.coord_names, ctx.generators + (decl,))
    chart = Chart(ctx, s.chart.base_point)
    E = sp.Symbol(decl.name)  # e^{u}

    phi_p = TensorField(chart, 1, 1, s.phi.array)
    xi_p = TensorField(chart, 1, 0, [E * s.xi.array[i] for i in rng])
    eta_p = TensorField(chart, 0, 1, [s.eta.array[i] / E for i in rng])
    g_p = TensorField(
        chart, 0, 2, [[s.g.array[i, j] / E**2 for j in rng] for i in rng]
    )
    return AlmostParacontactStructure(chart, phi_p, xi_p, eta_p, g_p)


def _linear_coordinate_form(u: ScalarField) -> Tuple[sp.Rational, int]:
    """Decompose u = q * x_k or fail."""
    ctx = u.context
    if u.has_generators():
        raise DeformationParameterError(f"u = {u} is not of the form q*coordinate")
    expr = sp.expand(u.expr)
    for k, x in enumerate(ctx.coord_symbols):
        q = sp.cancel(expr / x)
        if q.free_symbols:
            continue
        return sp.Rational(q), k
    raise DeformationParameterError(f"u = {u} is not of the form q*coordinate")


# --------------------------------------------------------------------
# transformation laws


def verify_deformation_laws(
    an: StructureAnalysis,
    an_t: StructureAnalysis,
    gamma,
    beta: ScalarField,
) -> List[CheckItem]:
    """Verify the connection, A, h, and R(.,.)xi transformation laws of the
    homothetic deformation, exactly."""
    s = an.structure
    chart = an.chart
    n_tot = s.dim
    rng = range(n_tot)
    gamma = sp.Rational(Fraction(gamma)) if isinstance(gamma, (int, Fraction)) else sp.Rational(gamma)
    b = beta.expr
    dbeta_xi = an.xi_derivative(beta).expr
    g, xi, eta = s.g.array, s.xi.array, s.eta.array
    A = an.A.array
    items: List[CheckItem] = []

    # connection: Gamma~^k_ab = Gamma^k_ab
    #   - ((b^2-gamma)/b^2) g(A d_a, d_b) xi^k + (dbeta(xi)/b) eta_a eta_b xi^k
    gA = [[sum(g[m, j] * A[m, i] for m in rng) for j in rng] for i in rng]
    res = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for k in rng:
        for a in rng:
            for bb in rng:
                expect = (
                    an.conn[k, a, bb]
                    - ((b**2 - gamma) / b**2) * gA[a][bb] * xi[k]
                    + (dbeta_xi / b) * eta[a] * eta[bb] * xi[k]
                )
                res[k, a, bb] = an_t.conn[k, a, bb] - expect
    items.append(
        _residual_item("deformed connection law", TensorField(chart, 1, 2, res))
    )

    items.append(
        _residual_item("A~ = A/beta", an_t.A - an.A.scale(1 / b))
    )
    items.append(
        _residual_item("h~ = h/beta", an_t.h - an.h.scale(1 / b))
    )

    # R~(X,Y)xi~ = (1/beta) R(X,Y)xi
    #   + (dbeta(xi)/beta^2) [eta(X) A Y - eta(Y) A X]
    R, Rt = an.R.array, an_t.R.array
    xi_t = an_t.structure.xi.array
    res7 = sp.MutableDenseNDimArray.zeros(n_tot, n_tot, n_tot)
    for i in rng:
        for a in rng:
            for bb in rng:
                lhs = sum(Rt[i, a, bb, k] * xi_t[k] for k in rng)
                rhs = (1 / b) * sum(R[i, a, bb, k] * xi[k] for k in rng) + (
                    dbeta_xi / b**2
                ) * (eta[a] * A[i, bb] - eta[bb] * A[i, a])
                res7[i, a, bb] = lhs - rhs
    items.append(
        _residual_item("R~(X,Y)xi~ law", TensorField(chart, 1, 2, res7))
    )
    return items


def transform_kmn(
    kappa: ScalarField,
    mu: Optional[ScalarField],
    nu: Optional[ScalarField],
    alpha: ScalarField,
    gamma,
    beta: ScalarField,
    dbeta_xi: ScalarField,
):
    """Closed-form (kappa~, mu~, nu~) of the deformed nullity parameters."""
    b = beta
    kappa_t = kappa / (b * b) + alpha * dbeta_xi / (b * b * b)
    mu_t = mu / b if mu is not None else None
    nu_t = nu / b + dbeta_xi / (b * b) if nu is not None else None
    return kappa_t, mu_t, nu_t


def invariant_I0(
    kappa: ScalarField, mu: ScalarField, nu: ScalarField, alpha: ScalarField
) -> ScalarField:
    """I0 = (kappa - alpha*nu)/mu^2; undefined when mu = 0."""
    if mu is None or mu.is_zero():
        raise DeformationParameterError("I0 is undefined when mu = 0")
    return (kappa - alpha * nu) / (mu * mu)
