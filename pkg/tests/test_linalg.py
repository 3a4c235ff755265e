"""Exact linear algebra layer, checked against brute-force oracles.

The F2 kernel oracle enumerates all vectors; the Smith oracle uses gcds
of minors.  Frozen expected values below were computed by hand.
"""

from __future__ import annotations

import itertools
import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from kcell.errors import NotAComplex, UnsupportedRing
from kcell.linalg import (
    Fp, Matrix, Ring, ZZ, Zmod, cokernel_group, det, echelonize,
    FgAbelianGroup, hermite_column_form, homology_pair, inverse_field,
    kernel_basis, lattice_contains, rank_rational, smith_normal_form,
    solve_field, solve_integer, span_basis, xgcd,
)

F2 = Fp(2)
F3 = Fp(3)


def brute_kernel_f2(a: Matrix) -> set[tuple[int, ...]]:
    out = set()
    for vec in itertools.product((0, 1), repeat=a.cols):
        if all(x == 0 for x in a.apply(vec)):
            out.add(vec)
    return out


def minor_gcd(a: Matrix, k: int) -> int:
    g = 0
    for rows in itertools.combinations(range(a.rows), k):
        for cols in itertools.combinations(range(a.cols), k):
            g = gcd(g, det(a.submatrix(rows, cols)))
    return g


def random_integer_matrix(rng, rows, cols, bound=9):
    return Matrix(ZZ, [[rng.randint(-bound, bound) for _ in range(cols)]
                       for _ in range(rows)], cols=cols)


def test_ring_basics():
    assert Fp(5).is_field
    assert not Zmod(6).is_field
    assert ZZ.is_integers
    assert Zmod(7) == Fp(7)
    with pytest.raises(ValueError):
        Fp(6)
    assert F3.invert(2) == 2
    assert str(Zmod(6)) == "Z/6"


def test_xgcd():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (-9, -6)]:
        g, x, y = xgcd(a, b)
        assert g == gcd(a, b)
        assert x * a + y * b == g


def test_matrix_arithmetic():
    a = Matrix(F2, [[1, 0], [1, 1]])
    b = Matrix(F2, [[0, 1], [1, 0]])
    assert (a * b).data == ((0, 1), (1, 1))
    assert (a + b).data == ((1, 1), (0, 1))
    assert a.transpose().data == ((1, 1), (0, 1))
    assert Matrix.identity(F2, 2) * a == a
    assert a.apply((1, 1)) == (1, 0)


def test_matrix_zero_dims():
    z = Matrix.zero(ZZ, 0, 3)
    assert z.rows == 0 and z.cols == 3
    w = Matrix.zero(ZZ, 3, 0)
    assert (w * z).rows == 3 and (w * z).cols == 3
    assert (w * z).is_zero


def test_echelon_frozen_example():
    # over F2: [[1,1,0],[1,1,1]] has rank 2, pivots (0, 2)
    a = Matrix(F2, [[1, 1, 0], [1, 1, 1]])
    ech = echelonize(a)
    assert ech.rank == 2
    assert ech.pivots == (0, 2)
    assert ech.kernel.cols == 1
    assert ech.kernel.column(0) == (1, 1, 0)


def test_echelon_kernel_against_enumeration():
    rng = random.Random(11)
    for _ in range(25):
        rows, cols = rng.randint(1, 4), rng.randint(1, 5)
        a = Matrix(F2, [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)],
                   cols=cols)
        ech = echelonize(a)
        brute = brute_kernel_f2(a)
        assert len(brute) == 2 ** (cols - ech.rank)
        for j in range(ech.kernel.cols):
            assert ech.kernel.column(j) in brute
        # image basis columns really span the column space
        assert echelonize(ech.image).rank == ech.rank


def test_echelon_requires_field():
    with pytest.raises(UnsupportedRing):
        echelonize(Matrix(ZZ, [[2]]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_rank_nullity_f3(rows, cols, seed):
    rng = random.Random(seed)
    a = Matrix(F3, [[rng.randint(0, 2) for _ in range(cols)] for _ in range(rows)],
               cols=cols)
    ech = echelonize(a)
    assert ech.rank + ech.kernel.cols == cols
    if ech.kernel.cols:
        assert (a * ech.kernel).is_zero


def test_solve_field_and_inverse():
    a = Matrix(F3, [[1, 2], [0, 1]])
    b = Matrix(F3, [[1], [2]])
    x = solve_field(a, b)
    assert a * x == b
    inv = inverse_field(a)
    assert a * inv == Matrix.identity(F3, 2)
    with pytest.raises(ValueError):
        solve_field(Matrix(F3, [[1, 1], [1, 1]]), Matrix(F3, [[1], [0]]))


def test_smith_frozen_example():
    a = Matrix(ZZ, [[2, 4], [6, 8]])
    sf = smith_normal_form(a)
    assert sf.factors == (2, 4)
    assert sf.u * a * sf.v == sf.s


def test_smith_divisibility_and_transforms():
    rng = random.Random(5)
    for _ in range(40):
        a = random_integer_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        sf = smith_normal_form(a)
        assert sf.u * a * sf.v == sf.s
        assert abs(det(sf.u)) == 1
        assert abs(det(sf.v)) == 1
        for i in range(1, len(sf.factors)):
            assert sf.factors[i] % sf.factors[i - 1] == 0
        for i in range(sf.s.rows):
            for j in range(sf.s.cols):
                if i != j:
                    assert sf.s.data[i][j] == 0


def test_smith_against_minor_gcd_oracle():
    rng = random.Random(17)
    for _ in range(15):
        a = random_integer_matrix(rng, rng.randint(1, 4), rng.randint(1, 4), bound=6)
        sf = smith_normal_form(a)
        prod = 1
        for k, d in enumerate(sf.factors, start=1):
            prod *= d
            assert prod == abs(minor_gcd(a, k))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=1, max_size=4),
                min_size=1, max_size=4).filter(
                    lambda rows: len({len(r) for r in rows}) == 1))
def test_smith_roundtrip_property(rows):
    a = Matrix(ZZ, rows, cols=len(rows[0]))
    sf = smith_normal_form(a)
    assert sf.u * a * sf.v == sf.s
    assert len(sf.factors) == rank_rational(a)


def test_integer_kernel_is_saturated():
    a = Matrix(ZZ, [[2, -2, 0], [0, 0, 0]])
    kb = kernel_basis(a)
    assert kb.cols == 2
    assert (a * kb).is_zero
    # (1,1,0) is in the kernel and must be an integer combination of the basis
    lat = hermite_column_form(kb)
    assert lattice_contains(lat, (1, 1, 0))


def test_solve_integer():
    a = Matrix(ZZ, [[2, 0], [0, 3]])
    b = Matrix(ZZ, [[4], [9]])
    x = solve_integer(a, b)
    assert a * x == b
    with pytest.raises(ValueError):
        solve_integer(a, Matrix(ZZ, [[1], [1]]))


def test_hermite_canonical_under_column_moves():
    rng = random.Random(23)
    for _ in range(20):
        a = random_integer_matrix(rng, 4, 3, bound=5)
        h1 = hermite_column_form(a)
        cols = a.columns()
        rng.shuffle(cols)
        cols.append(tuple(x + y for x, y in zip(cols[0], cols[-1])))
        b = Matrix.from_columns(ZZ, cols, 4)
        assert hermite_column_form(b) == h1
        for j in range(a.cols):
            assert lattice_contains(h1, a.column(j)) or not any(a.column(j))


def test_span_basis_field_canonical():
    a = Matrix(F2, [[1, 1], [1, 1], [0, 1]])
    b = Matrix(F2, [[1, 0], [1, 0], [1, 1]])
    assert span_basis(a) == span_basis(b)


def test_det_bareiss():
    a = Matrix(ZZ, [[2, 4], [6, 8]])
    assert det(a) == -8
    assert det(Matrix.identity(ZZ, 3)) == 1
    assert det(Matrix(ZZ, [[1, 2], [2, 4]])) == 0


def test_fg_abelian_group_format():
    assert str(FgAbelianGroup(0)) == "0"
    assert str(FgAbelianGroup(1)) == "Z"
    assert str(FgAbelianGroup(2, (2, 4))) == "Z^2 + Z/2 + Z/4"
    assert FgAbelianGroup(0, (3,)).order() == 3
    assert FgAbelianGroup(1).order() is None


def test_cokernel_group():
    rel = Matrix(ZZ, [[2, 0], [0, 3]])
    assert cokernel_group(2, rel) == FgAbelianGroup(0, (6,))
    assert cokernel_group(3, rel.vstack(Matrix.zero(ZZ, 1, 2))) == FgAbelianGroup(1, (6,))


def test_homology_pair_field():
    # two-step complex over F2 with one-dimensional middle homology
    d_in = Matrix(F2, [[0], [0]])
    d_out = Matrix(F2, [[1, 1]])
    assert homology_pair(d_out, d_in) == 1


def test_homology_pair_integers():
    # Z --2--> Z --0--> 0 gives Z/2 at the middle
    d_out = Matrix.zero(ZZ, 0, 1)
    d_in = Matrix(ZZ, [[2]])
    assert homology_pair(d_out, d_in) == FgAbelianGroup(0, (2,))
    # kernel of [1 1] modulo image of [[1],[-1]]*2
    d_out2 = Matrix(ZZ, [[1, 1]])
    d_in2 = Matrix(ZZ, [[2], [-2]])
    assert homology_pair(d_out2, d_in2) == FgAbelianGroup(0, (2,))


def test_homology_pair_zmod_composite():
    r = Zmod(4)
    d = Matrix(r, [[2]])
    assert homology_pair(d, d) == FgAbelianGroup(0)
    # kernel of 0 mod im of 2 inside Z/4 is Z/2
    assert homology_pair(Matrix.zero(r, 0, 1), d) == FgAbelianGroup(0, (2,))


def test_homology_pair_rejects_noncomplex():
    with pytest.raises(NotAComplex):
        homology_pair(Matrix(ZZ, [[1]]), Matrix(ZZ, [[1]]))


def test_homology_pair_unimodular_invariance():
    rng = random.Random(31)
    for _ in range(15):
        d_in = random_integer_matrix(rng, 3, 2, bound=4)
        d_out = Matrix.zero(ZZ, 0, 3)
        base = homology_pair(d_out, d_in)
        # change middle basis by a random unimodular matrix
        u = Matrix.identity(ZZ, 3)
        for _ in range(6):
            i, j = rng.sample(range(3), 2)
            e = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
            e[i][j] = rng.randint(-2, 2)
            u = u * Matrix(ZZ, e)
        assert abs(det(u)) == 1
        changed = homology_pair(d_out, solve_integer(u, d_in))
        assert changed == base
