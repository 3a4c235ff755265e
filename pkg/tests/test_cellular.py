"""Build certificates, witnesses, and the approximation strategies."""

import pytest

from kcell.cellular import (BaseStep, BuildCertificate, CellularityWitness,
                            cell_auto, cell_cyclic, cell_extension,
                            cell_nilpotent, cell_nilpotent_action,
                            cell_p_group, koszul_complex, koszul_triangle,
                            kp_koszul_filtration, proxy_smallness_report,
                            verify_cell_approx)
from kcell.complexes import GComplex
from kcell.errors import (BadCertificate, BadSubgroup, NoStrategyApplies,
                          NotNilpotentAction, UnsupportedRing, WrongGroupClass)
from kcell.groups import FiniteGroup, GModule
from kcell.linalg import Fp, Matrix, ZZ
from kcell.localcoh import one_minus


F2, F3 = Fp(2), Fp(3)


def sign_module(group, ring):
    # order-2 elements are odd in the symmetric group on three letters
    acts = [Matrix(ring, [[-1]] if group.element_order(g) == 2 else [[1]], cols=1)
            for g in group.elements()]
    return GModule(group, ring, 1, acts)


def test_regular_module_certificate_has_three_steps():
    c2 = FiniteGroup.cyclic(2)
    approx = cell_p_group(GModule.regular(c2, F2))
    cert = approx.certificate
    assert len(cert) == 3
    cert.validate()
    report = verify_cell_approx(approx, 0, 3)
    assert report["equivalence_ok"] is True
    assert report["certificate_matches_cell"] is True
    assert report["witness_kind"] == "p-group"


def test_two_term_free_complex_certificate():
    c2 = FiniteGroup.cyclic(2)
    x = koszul_complex(c2, F2, 1)
    approx = cell_p_group(x)
    report = verify_cell_approx(approx, 0, 2)
    assert report["certificate_ok"] and report["witness_ok"]
    assert report["equivalence_ok"] is True
    assert approx.certificate.final_object() == x


def test_tampered_certificate_is_rejected():
    c2 = FiniteGroup.cyclic(2)
    cert = cell_p_group(GModule.regular(c2, F2)).certificate
    shifted = GComplex.from_module(GModule.trivial(c2, F2, 1), 1)
    bad = BuildCertificate((BaseStep(shifted),) + cert.steps[1:], cert.final)
    with pytest.raises(BadCertificate):
        bad.validate()


def test_p_group_strategy_rejects_wrong_inputs():
    c2 = FiniteGroup.cyclic(2)
    with pytest.raises(UnsupportedRing):
        cell_p_group(GModule.regular(c2, ZZ))
    with pytest.raises(WrongGroupClass):
        cell_p_group(GModule.regular(c2, F3))
    with pytest.raises(WrongGroupClass):
        cell_p_group(GModule.regular(FiniteGroup.symmetric(3), F2))


def test_nilpotent_strategy_takes_fixed_points():
    c6 = FiniteGroup.cyclic(6)
    approx = cell_nilpotent(GModule.regular(c6, F2))
    assert approx.strategy == "nilpotent"
    assert approx.data["fixed_ranks"][0] == 2
    assert len(approx.certificate) == 1
    inner = approx.certificate.steps[0].sub
    assert len(inner) == 3
    report = verify_cell_approx(approx, 0, 3)
    assert report["equivalence_ok"] is True
    assert report["certificate_matches_cell"] is True


def test_nilpotent_strategy_rejects_symmetric_group():
    with pytest.raises(WrongGroupClass):
        cell_nilpotent(GModule.regular(FiniteGroup.symmetric(3), F2))


def test_nilpotent_action_route_accepts_augmentation_fiber():
    c2 = FiniteGroup.cyclic(2)
    reg = GModule.regular(c2, ZZ)
    z = one_minus(c2, ZZ, 1).matrix_on(reg)
    x = GComplex(c2, ZZ, {1: reg, 0: reg}, {1: z})
    approx = cell_nilpotent_action(x)
    assert approx.witness.kind == "nilpotent-homology"
    assert set(approx.data["nilpotency_classes"]) == {0, 1}
    report = verify_cell_approx(approx, 0, 2)
    assert report["equivalence_ok"] is True


def test_nilpotent_action_route_rejects_sign_module():
    c2 = FiniteGroup.cyclic(2)
    sign = GModule(c2, ZZ, 1, [Matrix(ZZ, [[1]], cols=1),
                               Matrix(ZZ, [[-1]], cols=1)])
    with pytest.raises(NotNilpotentAction) as err:
        cell_nilpotent_action(GComplex.from_module(sign))
    assert err.value.degree == 0


def test_telescope_cell_of_integral_regular_module():
    c2 = FiniteGroup.cyclic(2)
    approx = cell_cyclic(GModule.regular(c2, ZZ), stages=3)
    assert approx.cell is None and approx.comparison is None
    assert approx.certificate.colimit
    assert len(approx.certificate) == 3
    assert approx.data["pi_0"] == "Z"
    assert approx.data["pi_minus_1"] == "Z[1/2]/Z"
    assert approx.data["stages_collapse"]
    assert approx.data["transitions_act_as_z"]
    assert approx.data["rank_split_ok"]
    assert all(approx.data["cross_checks"].values())
    report = verify_cell_approx(approx, 0, 2)
    assert report["certificate_ok"]
    assert report["witness_kind"] == "i-power-torsion-homology"
    assert report["equivalence_ok"] is None


def test_telescope_rejects_field_coefficients():
    c2 = FiniteGroup.cyclic(2)
    with pytest.raises(UnsupportedRing):
        cell_cyclic(GModule.regular(c2, F2))


def test_extension_fixed_point_route_on_symmetric_group():
    s3 = FiniteGroup.symmetric(3)
    n3 = tuple(g for g in s3.elements() if s3.element_order(g) in (1, 3))
    approx = cell_extension(GModule.regular(s3, F2), n3)
    assert approx.strategy == "extension-fixed-points"
    assert approx.data["fixed_ranks"][0] == 2
    report = verify_cell_approx(approx, 0, 3)
    assert report["equivalence_ok"] is True
    assert report["certificate_ok"]


def test_extension_rejects_non_normal_subgroup():
    s3 = FiniteGroup.symmetric(3)
    swap = next(g for g in s3.elements() if s3.element_order(g) == 2)
    with pytest.raises(BadSubgroup):
        cell_extension(GModule.regular(s3, F2), (0, swap))


def test_integral_extension_reports_non_nilpotent_subgroup_homology():
    s3 = FiniteGroup.symmetric(3)
    n3 = tuple(g for g in s3.elements() if s3.element_order(g) in (1, 3))
    with pytest.raises(NoStrategyApplies) as err:
        cell_extension(GModule.regular(s3, ZZ), n3)
    witness = err.value.witness
    assert witness["degree"] == 1
    assert not witness["report"].nilpotent
    assert str(witness["module"].canonical_group()) == "Z/3"


def test_extension_recurses_through_quotient():
    c6 = FiniteGroup.cyclic(6)
    n3 = tuple(g for g in c6.elements() if c6.element_order(g) in (1, 3))
    _, hom, _ = c6.quotient_by(n3)
    x = GModule.regular(hom.target, F3).pullback(hom)
    approx = cell_extension(x, n3)
    assert approx.strategy == "extension-through-quotient"
    assert approx.data["inner_strategy"] == "nilpotent"
    assert approx.cell.rank(0) == 1
    report = verify_cell_approx(approx, 0, 2)
    assert report["equivalence_ok"] is True
    assert report["certificate_ok"]


def test_koszul_triangle_over_three_coefficient_rings():
    from kcell.linalg import Zmod
    c4 = FiniteGroup.cyclic(4)
    for ring in (ZZ, F2, Zmod(4)):
        tri = koszul_triangle(c4, ring)
        assert tri.b.rank(0) == 4


def test_koszul_filtration_collapses_for_cyclic_p_group():
    c4 = FiniteGroup.cyclic(4)
    report = kp_koszul_filtration(c4, F2)
    assert report["stages"] == 4
    assert report["null_homotopies_ok"]
    assert report["power_vanishes"]
    assert report["split_retract_ok"]


def test_proxy_smallness_report_for_p_group():
    c2 = FiniteGroup.cyclic(2)
    report = proxy_smallness_report(c2, F2, depth=4)
    assert report["finite_stages_ok"]
    assert report["algebra_cell_steps"] == 3
    assert report["koszul_filtration"]["split_retract_ok"]
    integral = proxy_smallness_report(c2, ZZ, depth=4)
    assert integral["finite_stages_ok"]
    assert integral["koszul_triangle_ok"]
    assert "algebra_cell_steps" not in integral


def test_auto_dispatch():
    c4 = FiniteGroup.cyclic(4)
    assert cell_auto(GModule.regular(c4, F2)).strategy == "p-group"
    c2 = FiniteGroup.cyclic(2)
    assert cell_auto(GModule.regular(c2, ZZ)).strategy == "cyclic-telescope"
    s3 = FiniteGroup.symmetric(3)
    with pytest.raises(NoStrategyApplies):
        cell_auto(sign_module(s3, ZZ))


def test_witness_kinds_validate_honestly():
    c2 = FiniteGroup.cyclic(2)
    x = GComplex.from_module(GModule.regular(c2, F2))
    CellularityWitness("p-group", prime=2).validate(x)
    with pytest.raises(UnsupportedRing):
        CellularityWitness("p-group", prime=3).validate(x)
    with pytest.raises(BadCertificate):
        CellularityWitness("zero").validate(x)
    with pytest.raises(BadCertificate):
        CellularityWitness("made-up").validate(x)
