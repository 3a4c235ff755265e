import pytest

from kcell.complexes import GComplex
from kcell.errors import NotStabilized, UnsupportedGroup
from kcell.groups import FiniteGroup, GModule, direct_sum_modules
from kcell.linalg import Fp, Matrix, ZZ, Zmod
from kcell.localcoh import (augmentation_generators, c2_corollary_check,
                            corollary_c2_checker, cyclic_pi1_sequence,
                            i_power_torsion, local_cohomology_groupring,
                            localize_module, minimal_polynomial, one_minus,
                            saturate, telescope_localize)

C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)


def sign_module():
    return GModule(C2, ZZ, 1, [Matrix.identity(ZZ, 1), Matrix(ZZ, [[-1]])])


def test_one_minus_matrix_and_square():
    reg = GModule.regular(C2, ZZ)
    z = one_minus(C2, ZZ, 1).matrix_on(reg)
    assert z == Matrix(ZZ, [[1, -1], [-1, 1]])
    # the square of the augmentation generator is twice itself
    assert z * z == z.scale(2)


def test_centrality():
    s3 = FiniteGroup.symmetric(3)
    assert one_minus(C3, ZZ, 1).is_central()
    swap = next(g for g in s3.elements() if g and s3.element_order(g) == 2)
    assert not one_minus(s3, ZZ, swap).is_central()


def test_torsion_of_regular_is_norm_line():
    rep = i_power_torsion(GModule.regular(C2, ZZ))
    assert rep.submodule.rank == 1
    assert all(a == Matrix.identity(ZZ, 1) for a in rep.submodule.action)
    col = rep.inclusion.column(0)
    assert abs(col[0]) == 1 and col[0] == col[1]


def test_torsion_of_sign_module_vanishes():
    rep = i_power_torsion(sign_module())
    assert rep.submodule.rank == 0


def test_torsion_field_nilpotent_case_is_everything():
    rep = i_power_torsion(GModule.regular(C2, Fp(2)))
    assert rep.submodule.rank == 2
    assert rep.chain_ranks == (0, 1, 2, 2)


def test_minimal_polynomial_order_two():
    z = one_minus(C2, ZZ, 1).matrix_on(GModule.regular(C2, ZZ))
    assert minimal_polynomial(z) == (0, -2, 1)


def test_minimal_polynomial_order_three():
    z = one_minus(C3, ZZ, 1).matrix_on(GModule.regular(C3, ZZ))
    assert minimal_polynomial(z) == (0, 3, -3, 1)


def test_saturate_halves_index():
    sat = saturate(Matrix(ZZ, [[2], [0]]))
    assert sat.cols == 1
    assert abs(sat.column(0)[0]) == 1 and sat.column(0)[1] == 0


def test_localize_regular_order_two():
    reg = GModule.regular(C2, ZZ)
    loc = localize_module(reg, one_minus(C2, ZZ, 1))
    assert not loc.is_zero
    assert loc.c == 2 and loc.power == 1 and loc.w_rank() == 1
    assert loc.z_on_w == Matrix(ZZ, [[2]])
    assert str(loc.quotient) == "Z[1/2]/Z"


def test_localize_trivial_module_is_zero():
    loc = localize_module(GModule.trivial(C2, ZZ, 1), one_minus(C2, ZZ, 1))
    assert loc.is_zero


def test_localize_field_nilpotent_is_zero():
    loc = localize_module(GModule.regular(C2, Fp(2)), one_minus(C2, Fp(2), 1))
    assert loc.is_zero


def test_localize_regular_order_three_two_prufer_summands():
    # z^2 on the eventual image is 3 times a unit, so both invariant
    # directions feed a Prufer group even though z itself has corank one
    # mod 3
    loc = localize_module(GModule.regular(C3, ZZ), one_minus(C3, ZZ, 1))
    assert loc.c == 3 and loc.w_rank() == 2
    assert loc.quotient.prufer == ((3, 2),)
    assert str(loc.quotient) == "(Z[1/3]/Z)^2"


def test_localize_noncentral_rejected():
    s3 = FiniteGroup.symmetric(3)
    swap = next(g for g in s3.elements() if g and s3.element_order(g) == 2)
    with pytest.raises(UnsupportedGroup):
        localize_module(GModule.regular(s3, ZZ), one_minus(s3, ZZ, swap))


def test_torsion_and_localization_ranks_are_complementary():
    cases = [
        (GModule.regular(C2, ZZ), one_minus(C2, ZZ, 1)),
        (GModule.regular(C3, ZZ), one_minus(C3, ZZ, 1)),
        (GModule.trivial(C2, ZZ, 2), one_minus(C2, ZZ, 1)),
        (sign_module(), one_minus(C2, ZZ, 1)),
        (direct_sum_modules([GModule.regular(C2, ZZ), sign_module()]),
         one_minus(C2, ZZ, 1)),
    ]
    for m, elt in cases:
        loc = localize_module(m, elt)
        tor = i_power_torsion(m)
        assert tor.submodule.rank + loc.w_rank() == m.rank


def test_cyclic_sequence_regular_order_two():
    seq = cyclic_pi1_sequence(GModule.regular(C2, ZZ))
    assert seq.pi0 == "Z"
    assert seq.pi_minus_1 == "Z[1/2]/Z"
    assert all(seq.cross_checks.values())


def test_local_cohomology_integral_order_two():
    rep = local_cohomology_groupring(C2, ZZ)
    assert rep.values == {0: "Z", 1: "Z[1/2]/Z"}
    assert not rep.all_localizations_vanish


def test_local_cohomology_field_generating_set_independence():
    v4 = FiniteGroup.product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    ring = Fp(2)
    default = local_cohomology_groupring(v4, ring)
    extra = augmentation_generators(v4, ring) + [one_minus(v4, ring, 3)]
    bigger = local_cohomology_groupring(v4, ring, extra)
    assert default.all_localizations_vanish and bigger.all_localizations_vanish
    assert default.values[0] == "k^4" == bigger.values[0]
    assert all(v == "0" for s, v in default.values.items() if s)
    assert all(v == "0" for s, v in bigger.values.items() if s)


def test_corollary_checker_order_two():
    rep = c2_corollary_check(stages=3)
    assert rep["pi0"] == "Z" and rep["pi_minus_1"] == "Z[1/2]/Z"
    assert all(rep["cross_checks"].values())
    assert rep["fixed_rank"] == 1


def finite_sign(m):
    ring = Zmod(m)
    return GModule(C2, ring, 1,
                   [Matrix.identity(ring, 1), Matrix(ring, [[m - 1]])])


def test_graded_checker_affirms_odd_sign_modules():
    rep = corollary_c2_checker([GModule.trivial(C2, ZZ, 1),
                                finite_sign(3), finite_sign(5)])
    assert rep["verdict"] == "affirmed"
    assert rep["pi"][0] == "Z"
    assert all(rep["pi"][-n] == "0" for n in range(1, 4))
    assert not rep["obstructions"]
    assert all(rep["checks"].values())


def test_graded_checker_rejects_even_torsion():
    rep = corollary_c2_checker([GModule.trivial(C2, ZZ, 1), finite_sign(2)])
    assert rep["verdict"] == "rejected"
    assert any("even order" in r for r in rep["conditions"][1])
    # the section functor sees all of Z/2 because z acts there as zero
    assert rep["obstructions"][-1]["sections"] == "Z/2"


def test_graded_checker_rejects_free_orbit_in_degree_zero():
    rep = corollary_c2_checker([GModule.regular(C2, ZZ)])
    assert rep["verdict"] == "rejected"
    assert any("rank 2" in r for r in rep["conditions"][0])
    assert rep["obstructions"][-1]["divisible"] == "Z[1/2]/Z"


def test_graded_checker_handles_composite_odd_order():
    rep = corollary_c2_checker([GModule.trivial(C2, ZZ, 1), finite_sign(15)])
    assert rep["verdict"] == "affirmed"


def test_telescope_localize_nilpotent_element_kills_complex():
    # 1 - g acts as 0 on the trivial lattice: one power closes the chain
    x = GComplex.from_module(GModule.trivial(C2, ZZ, 1))
    loc, stage = telescope_localize(x, one_minus(C2, ZZ, 1))
    assert stage == 1
    assert loc.support() == (0, -1)


def test_telescope_localize_invertible_is_identity():
    # on the sign line over F3 the element acts as 2, already invertible
    m = GModule(C2, Fp(3), 1, [Matrix.identity(Fp(3), 1), Matrix(Fp(3), [[-1]])])
    x = GComplex.from_module(m)
    loc, stage = telescope_localize(x, one_minus(C2, Fp(3), 1))
    assert stage == 0 and loc is x


def test_telescope_localize_field_restriction():
    # trivial + sign over F3: the element acts as diag(0, 2) in both
    # degrees, so the stable image is the sign line and the identity
    # differential restricts to it
    f3 = Fp(3)
    both = direct_sum_modules([
        GModule.trivial(C2, f3, 1),
        GModule(C2, f3, 1, [Matrix.identity(f3, 1), Matrix(f3, [[-1]])])])
    x = GComplex(C2, f3, {0: both, 1: both}, {1: Matrix.identity(f3, 2)})
    loc, stage = telescope_localize(x, one_minus(C2, f3, 1))
    assert stage == 1
    assert loc.rank(0) == loc.rank(1) == 1
    assert loc.module(0).action[1] == Matrix(f3, [[-1]])
    assert loc.homology_summary() == {}


def test_telescope_localize_modular_nilpotence():
    # over F2 the augmentation element squares to zero on the regular
    # module, so the localization of the free line vanishes at stage 2
    reg = GModule.regular(C2, Fp(2))
    loc, stage = telescope_localize(GComplex.from_module(reg),
                                    one_minus(C2, Fp(2), 1))
    assert stage == 2
    assert loc.support() == (0, -1)


def test_telescope_localize_quasi_invertible_lattice_model():
    # two-term lattice model of the sign module modulo 3: the images of
    # 2^k shrink forever, but 2 is an automorphism of the homology, so
    # every telescope transition is already an equivalence
    sgn = sign_module()
    x = GComplex(C2, ZZ, {0: sgn, 1: sgn}, {1: Matrix(ZZ, [[3]])})
    loc, stage = telescope_localize(x, one_minus(C2, ZZ, 1))
    assert stage == 0 and loc is x


def test_telescope_localize_infinite_homology_refuses():
    x = GComplex.from_module(sign_module())
    with pytest.raises(NotStabilized):
        telescope_localize(x, one_minus(C2, ZZ, 1))


def test_telescope_localize_noninvertible_on_finite_homology_refuses():
    # homology (Z/3)^2 with the element acting by the rank-one matrix
    # 1 - swap: finite homology, but not an automorphism
    reg = GModule.regular(C2, ZZ)
    x = GComplex(C2, ZZ, {0: reg, 1: reg},
                 {1: Matrix.identity(ZZ, 2).scale(3)})
    with pytest.raises(NotStabilized):
        telescope_localize(x, one_minus(C2, ZZ, 1))


def test_telescope_localize_needs_central_element():
    s3 = FiniteGroup.symmetric(3)
    swap = next(g for g in s3.elements() if g and s3.element_order(g) == 2)
    x = GComplex.from_module(GModule.regular(s3, ZZ))
    with pytest.raises(UnsupportedGroup):
        telescope_localize(x, one_minus(s3, ZZ, swap))
