import pytest
import sympy as sp

from paracosym.errors import StructureError
from paracosym.geometry import compose11
from paracosym.parser import load_definition
from paracosym.structures import (
    AlmostParacontactStructure,
    StructureAnalysis,
    fundamental_form,
    identity_suite,
    leaf_second_fundamental_form,
    nijenhuis_normality,
    para_kenmotsu_biconditional,
    parakaehler_leaves_check,
    shape_operator_residual,
)

POSITIVE = [
    "example_e",
    "flat_product",
    "warped_kenmotsu",
    "h1_rational",
    "h2_nilpotent",
    "h3_rotation",
    "five_dim_product",
    "five_dim_alpha_z",
    "sigma_nonzero",
    "five_dim_non_pk_leaves",
]


@pytest.mark.parametrize("name", POSITIVE)
def test_axioms_pass(analyses, name):
    an = analyses(name)
    bad = [it for it in an.axiom_report if not it.ok]
    assert not bad, [(b.name, b.witness) for b in bad]


def test_axioms_fail_on_perturbed_metric(analyses):
    an = analyses("perturbed_metric")
    assert not an.axioms_ok
    failed = {it.name for it in an.axiom_report if it.status == "fail"}
    assert any("phi" in nm for nm in failed)


def test_alpha_extraction_values(analyses):
    assert analyses("example_e").alpha == 1
    assert analyses("flat_product").alpha == 0
    assert analyses("warped_kenmotsu").alpha == 1
    a5 = analyses("five_dim_alpha_z")
    assert not a5.alpha_is_constant
    z = a5.chart.context.coordinate(4)
    assert a5.alpha == 1 / (1 + z)
    # dim >= 5: f = xi(alpha)
    assert a5.alpha_extraction.f == -1 / ((1 + z) * (1 + z))


def test_non_apc_gate(analyses):
    an = analyses("non_apc")
    assert an.axioms_ok
    assert not an.is_apc
    assert an.alpha_extraction.reason


def test_declared_alpha_mismatch():
    from paracosym.catalog import catalog_entry

    text = catalog_entry("flat_product").definition_text.replace(
        "alpha = 0", "alpha = 1"
    )
    s = AlmostParacontactStructure.from_definition(load_definition(text))
    an = StructureAnalysis(s)
    with pytest.raises(StructureError):
        an.alpha_extraction


@pytest.mark.parametrize("name", ["example_e", "warped_kenmotsu", "five_dim_alpha_z"])
def test_identity_suite_exact(analyses, name):
    an = analyses(name)
    bad = [it for it in identity_suite(an) if it.status == "fail"]
    assert not bad, [(b.name, b.witness) for b in bad]


def test_h_cross_check_and_traces(analyses):
    an = analyses("example_e")
    # tr A = -2 n alpha, tr h = 0
    tr_A = sp.cancel(sum(an.A.array[i, i] for i in range(3)))
    tr_h = sp.cancel(sum(an.h.array[i, i] for i in range(3)))
    assert tr_A == -2
    assert tr_h == 0
    # A xi = h xi = 0
    s = an.structure
    for op in (an.A, an.h):
        for i in range(3):
            assert sp.cancel(
                sum(op.array[i, j] * s.xi.array[j] for j in range(3))
            ) == 0


def test_fundamental_form_antisymmetric(analyses):
    an = analyses("example_e")
    Phi = fundamental_form(an.structure)
    for i in range(3):
        for j in range(3):
            assert sp.cancel(Phi.array[i, j] + Phi.array[j, i]) == 0


def test_normality_flags(analyses):
    _, normal_e = nijenhuis_normality(analyses("example_e").structure)
    assert not normal_e
    _, normal_flat = nijenhuis_normality(analyses("flat_product").structure)
    assert normal_flat
    _, normal_w = nijenhuis_normality(analyses("warped_kenmotsu").structure)
    assert normal_w
    _, normal_npk = nijenhuis_normality(analyses("five_dim_non_pk_leaves").structure)
    assert not normal_npk


def test_parakaehler_leaves(analyses):
    assert parakaehler_leaves_check(analyses("example_e"))
    assert parakaehler_leaves_check(analyses("warped_kenmotsu"))
    assert not parakaehler_leaves_check(analyses("five_dim_non_pk_leaves"))


def test_shape_operator_equivalent_form(analyses):
    an = analyses("example_e")
    assert shape_operator_residual(an).is_zero()


def test_leaf_geometry_flags(analyses):
    warped = leaf_second_fundamental_form(analyses("warped_kenmotsu"))
    assert warped.umbilical and not warped.geodesic
    flat = leaf_second_fundamental_form(analyses("flat_product"))
    assert flat.geodesic and not flat.umbilical
    e = leaf_second_fundamental_form(analyses("example_e"))
    assert not e.umbilical and not e.geodesic


@pytest.mark.parametrize(
    "name,expect_sides",
    [
        ("warped_kenmotsu", True),  # both sides true
        ("example_e", False),  # alpha = 1 but not normal; A != -phi^2
        ("flat_product", False),  # alpha = 0
    ],
)
def test_para_kenmotsu_biconditional(analyses, name, expect_sides):
    an = analyses(name)
    item = para_kenmotsu_biconditional(an)
    assert item.ok, (item.name, item.witness)
    s = an.structure
    rhs = (an.A + compose11(s.phi, s.phi)).is_zero()
    assert rhs is expect_sides
