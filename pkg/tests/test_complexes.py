"""Complex, cone, triangle and truncation tests with hand-checked homology."""

import pytest

from kcell.complexes import (ComplexMap, GComplex, Triangle, cone,
                             nested_window_inclusion, triangle_of_map,
                             truncate_above_im, truncate_below_im, window)
from kcell.errors import BadWindow, NotAComplex, NotATriangle
from kcell.groups import FiniteGroup, GModule, PresentedGModule
from kcell.linalg import FgAbelianGroup, Fp, Matrix, ZZ

C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)
F2 = Fp(2)


def two_step_f2c2():
    """reg --(1+g)--> reg over F2C2; H_0 and H_1 both one-dimensional."""
    reg = GModule.regular(C2, F2)
    norm = Matrix(F2, [[1, 1], [1, 1]])
    return GComplex(C2, F2, {0: reg, 1: reg}, {1: norm})


def circle_zc2():
    """Free ZC2 cell structure on the circle with the antipodal action.

    Two vertices and two edges swapped by the action; d(e) = v1 - v0 on
    one edge of each orbit.
    """
    reg = GModule.regular(C2, ZZ)
    d = Matrix(ZZ, [[-1, 1], [1, -1]])
    return GComplex(C2, ZZ, {0: reg, 1: reg}, {1: d})


def test_complex_validation():
    reg = GModule.regular(C2, F2)
    with pytest.raises(NotAComplex):
        # differential not equivariant: projection to the first coordinate
        GComplex(C2, F2, {0: GModule.trivial(C2, F2, 1), 1: reg},
                 {1: Matrix(F2, [[1, 0]])})
    with pytest.raises(NotAComplex):
        # d*d nonzero
        triv = GModule.trivial(C2, F2, 1)
        one = Matrix.identity(F2, 1)
        GComplex(C2, F2, {0: triv, 1: triv, 2: triv}, {1: one, 2: one})


def test_homology_field_with_action():
    x = two_step_f2c2()
    assert x.homology_summary() == {0: 1, 1: 1}
    h0 = x.homology_module(0)
    h1 = x.homology_module(1)
    assert h0.rank == 1 and h1.rank == 1
    ident = Matrix.identity(F2, 1)
    assert all(h0.action[g] == ident for g in C2.elements())
    assert all(h1.action[g] == ident for g in C2.elements())


def test_homology_integer_circle():
    x = circle_zc2()
    hs = x.homology_summary()
    assert hs[0] == FgAbelianGroup(1) and hs[1] == FgAbelianGroup(1)
    h0 = x.homology_module(0)
    h1 = x.homology_module(1)
    assert isinstance(h0, PresentedGModule)
    assert str(h0.canonical_group()) == "Z"
    # the antipodal map is a rotation: degree one on H_1, trivial on H_0
    assert h0.reduce().action[1] == Matrix.identity(ZZ, 1)
    assert h1.reduce().action[1] == Matrix.identity(ZZ, 1)


def test_homology_with_torsion():
    # cellular chains on the real projective plane, trivial group
    triv = FiniteGroup.cyclic(1)
    rank1 = GModule.trivial(triv, ZZ, 1)
    x = GComplex(triv, ZZ, {0: rank1, 1: rank1, 2: rank1},
                 {1: Matrix(ZZ, [[0]]), 2: Matrix(ZZ, [[2]])})
    hs = x.homology_summary()
    assert str(hs[0]) == "Z" and str(hs[1]) == "Z/2" and 2 not in hs
    assert x.homology_module(1).canonical_group().torsion == (2,)


def test_shift_and_sum():
    x = two_step_f2c2()
    y = x.shift(3)
    assert y.support() == (3, 4)
    assert y.homology_summary() == {3: 1, 4: 1}
    s = x.direct_sum(x.shift(1))
    assert s.homology_summary() == {0: 1, 1: 2, 2: 1}


def test_shift_sign_roundtrip():
    x = circle_zc2()
    assert x.shift(1).shift(-1).diff(1) == x.diff(1)
    assert x.shift(1).diff(2) == x.diff(1).scale(-1)


def test_cone_of_identity_is_acyclic():
    x = two_step_f2c2()
    cx, incl, proj = cone(ComplexMap.identity(x))
    assert cx.is_acyclic()
    assert incl.source is x and proj.target.support() == (1, 2)


def test_cone_quasi_iso_detection():
    x = circle_zc2()
    assert ComplexMap.identity(x).is_quasi_iso()
    zero_map = ComplexMap(x, x, {})
    assert not zero_map.is_quasi_iso()


def test_canonical_triangle_verifies():
    x = two_step_f2c2()
    tri = triangle_of_map(ComplexMap.identity(x))
    tri.verify()
    # integer version
    tri_z = triangle_of_map(ComplexMap.identity(circle_zc2()))
    tri_z.verify()


def test_triangle_rejects_wrong_homotopy():
    x = circle_zc2()
    tri = triangle_of_map(ComplexMap.identity(x))
    broken = Triangle(tri.a, tri.b, tri.c, tri.f, tri.g, homotopy={})
    with pytest.raises(NotATriangle):
        broken.verify()


def test_triangle_rejects_wrong_third_object():
    x = two_step_f2c2()
    tri = triangle_of_map(ComplexMap.identity(x))
    # swap the cofiber for something with the wrong homology
    wrong = Triangle(tri.a, tri.b, x, tri.f,
                     ComplexMap.identity(x), {})
    with pytest.raises(NotATriangle):
        wrong.verify()


def resolution_style_complex():
    """Z-complex 0 -> Z --0--> Z --2--> Z --0--> Z -> 0 in degrees 3..0.

    Homology: Z, Z/2, 0, Z in degrees 0, 1, 2, 3.
    """
    triv = FiniteGroup.cyclic(1)
    r = GModule.trivial(triv, ZZ, 1)
    two, zero = Matrix(ZZ, [[2]]), Matrix(ZZ, [[0]])
    return GComplex(triv, ZZ, {0: r, 1: r, 2: r, 3: r},
                    {1: zero, 2: two, 3: zero})


def test_truncations_preserve_inner_homology():
    x = resolution_style_complex()
    full = {n: str(v) for n, v in x.homology_summary().items()}
    assert full == {0: "Z", 1: "Z/2", 3: "Z"}
    upper, proj = truncate_above_im(x, 1)
    assert proj.source is x
    hs = upper.homology_summary()
    assert {n: str(v) for n, v in hs.items()} == {0: "Z", 1: "Z/2"}
    lower, incl = truncate_below_im(x, 1)
    assert incl.target is x
    hs2 = lower.homology_summary()
    assert {n: str(v) for n, v in hs2.items()} == {1: "Z/2", 3: "Z"}
    w, _, _ = window(x, 1, 1)
    assert {n: str(v) for n, v in w.homology_summary().items()} == {1: "Z/2"}


def test_truncation_degenerate_ranges():
    x = resolution_style_complex()
    same, ident = truncate_above_im(x, 5)
    assert same is x and ident.comp(0) == Matrix.identity(ZZ, 1)
    empty, _ = truncate_above_im(x, -2)
    assert empty.support() == (0, -1)
    empty2, _ = truncate_below_im(x, 9)
    assert empty2.support() == (0, -1)
    with pytest.raises(BadWindow):
        window(x, 2, 1)


def test_truncation_keeps_equivariance():
    x = circle_zc2()
    upper, proj = truncate_above_im(x, 0)
    assert upper.support()[1] <= 1
    assert {n: str(v) for n, v in upper.homology_summary().items()} == {0: "Z"}
    # the degree-1 piece is the image lattice of d_1 with its C2-action
    assert upper.rank(1) == 1
    assert proj.is_quasi_iso() is False  # H_1 was killed


def test_nested_window_inclusion():
    x = resolution_style_complex()
    incl = nested_window_inclusion(x, 0, 2)
    incl_same = nested_window_inclusion(x, 1, 1)
    assert incl.source.support()[0] >= 1
    assert incl_same.comp(1) == Matrix.identity(ZZ, 1)
    with pytest.raises(BadWindow):
        nested_window_inclusion(x, 2, 0)


def test_dualize_roundtrip():
    x = two_step_f2c2()
    d = x.dualize()
    assert d.support() == (-1, 0)
    assert d.dualize().diff(1) == x.diff(1)
    z = circle_zc2().dualize()
    hs = z.homology_summary()
    # cochains of the circle: H^0 = Z in degree 0, H^1 = Z in degree -1
    assert str(hs[0]) == "Z" and str(hs[-1]) == "Z"
