import random
from fractions import Fraction

import pytest
import sympy as sp

from paracosym.deform import (
    conformal_deform,
    d_homothetic_deform,
    invariant_I0,
    transform_kmn,
    verify_deformation_laws,
)
from paracosym.errors import DeformationParameterError
from paracosym.nullity import nullity_fit
from paracosym.structures import StructureAnalysis


def _const(an, value):
    return an.chart.context.scalar(Fraction(value))


def _deform(an, gamma, beta):
    s_t = d_homothetic_deform(an.structure, gamma, beta)
    return StructureAnalysis(s_t)


def test_constant_deformation_laws(analyses):
    an = analyses("example_e")
    beta = _const(an, 2)
    an_t = _deform(an, 3, beta)
    assert an_t.axioms_ok and an_t.is_apc
    assert an_t.alpha == sp.Rational(1, 2)
    # A~ = A/2 and h~ = h/2, checked entrywise
    assert (an_t.A - an.A.scale(sp.Rational(1, 2))).is_zero()
    assert (an_t.h - an.h.scale(sp.Rational(1, 2))).is_zero()
    items = verify_deformation_laws(an, an_t, 3, beta)
    bad = [it for it in items if it.status == "fail"]
    assert not bad, [(b.name, b.witness) for b in bad]


def test_deformed_nullity_matches_closed_form(analyses):
    an = analyses("example_e")
    beta = _const(an, 2)
    an_t = _deform(an, 3, beta)
    fit = nullity_fit(an)
    fit_t = nullity_fit(an_t)
    assert fit.status == "exact" and fit_t.status == "exact"
    pred = transform_kmn(
        fit.kappa, fit.mu, fit.nu, an.alpha, 3, beta, an.xi_derivative(beta)
    )
    for predicted, fitted in zip(pred, fit_t.triple):
        assert predicted == fitted
    assert fit_t.kappa.is_zero()
    assert fit_t.mu == sp.Integer(1)
    assert fit_t.nu == sp.Integer(-1)


def test_identity_deformation(analyses):
    an = analyses("example_e")
    an_t = _deform(an, 1, _const(an, 1))
    assert (an_t.structure.g - an.structure.g).is_zero()
    assert (an_t.structure.xi - an.structure.xi).is_zero()


def test_functoriality_of_constant_deformations(analyses):
    an = analyses("example_e")
    b1, b2 = _const(an, 2), _const(an, Fraction(3, 2))
    once = d_homothetic_deform(an.structure, 3, b1)
    twice = d_homothetic_deform(once, 5, b2)
    direct = d_homothetic_deform(an.structure, 15, b1 * b2)
    assert (twice.g - direct.g).is_zero()
    assert (twice.eta - direct.eta).is_zero()
    assert (twice.xi - direct.xi).is_zero()


def test_nonconstant_beta(analyses):
    # beta = 1 + z has d(beta) = dz = eta for this entry
    an = analyses("example_e")
    beta = 1 + an.chart.context.coordinate(2)
    an_t = _deform(an, 2, beta)
    assert an_t.axioms_ok and an_t.is_apc
    z = an_t.chart.context.coord_symbols[2]
    assert sp.cancel(an_t.alpha.expr - 1 / (1 + z)) == 0
    items = verify_deformation_laws(an, an_t, 2, beta)
    bad = [it for it in items if it.status == "fail"]
    assert not bad, [(b.name, b.witness) for b in bad]


def test_beta_not_proportional_to_eta(analyses):
    an = analyses("example_e")
    beta = an.chart.context.coordinate(0)  # d(x) ^ eta != 0
    with pytest.raises(DeformationParameterError):
        d_homothetic_deform(an.structure, 2, beta)


def test_beta_vanishing_at_base_point(analyses):
    an = analyses("example_e")  # base point has z = 0
    with pytest.raises(DeformationParameterError):
        d_homothetic_deform(an.structure, 2, an.chart.context.coordinate(2))


def test_gamma_must_be_positive(analyses):
    an = analyses("example_e")
    for gamma in (0, -3, Fraction(-1, 2)):
        with pytest.raises(DeformationParameterError):
            d_homothetic_deform(an.structure, gamma, _const(an, 2))


def test_I0_invariant_under_random_deformations(analyses):
    an = analyses("example_e")
    fit = nullity_fit(an)
    i0 = invariant_I0(fit.kappa, fit.mu, fit.nu, an.alpha)
    assert i0 == sp.Rational(1, 2)
    rng = random.Random(41)
    for _ in range(6):
        gamma = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        beta = Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 4))
        an_t = _deform(an, gamma, _const(an, beta))
        fit_t = nullity_fit(an_t)
        assert fit_t.status == "exact"
        i0_t = invariant_I0(fit_t.kappa, fit_t.mu, fit_t.nu, an_t.alpha)
        assert i0 == i0_t


def test_I0_undefined_when_mu_zero(analyses):
    an = analyses("example_e")
    zero = an.chart.context.zero()
    with pytest.raises(DeformationParameterError):
        invariant_I0(zero, zero, zero, an.alpha)


def test_conformal_flattens_alpha(analyses):
    an = analyses("example_e")
    u = an.chart.context.coordinate(2)  # du = dz = alpha*eta since alpha = 1
    s_p = conformal_deform(an, u)
    an_p = StructureAnalysis(s_p)
    assert an_p.axioms_ok and an_p.is_apc
    assert an_p.alpha.is_zero()


def test_conformal_rejects_wrong_u(analyses):
    an = analyses("example_e")
    with pytest.raises(DeformationParameterError):
        conformal_deform(an, an.chart.context.coordinate(0))
    with pytest.raises(DeformationParameterError):
        conformal_deform(an, 2 * an.chart.context.coordinate(2))


def test_conformal_identity_when_alpha_zero(analyses):
    an = analyses("flat_product")
    s_p = conformal_deform(an, an.chart.context.zero())
    assert (s_p.g - an.structure.g).is_zero()
