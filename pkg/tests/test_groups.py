"""Group table, module and nilpotency tests against hand-checked values."""

import pytest
from hypothesis import given, settings, strategies as st

from kcell.errors import BadAction, BadSubgroup, NotAGroup, NotNilpotentGroup
from kcell.groups import (FiniteGroup, GModule, GModuleMap, GroupHom,
                          PresentedGModule, coinvariant_relations, direct_sum_modules,
                          fixed_points, hom_space_basis, induce_module,
                          is_nilpotent_group, is_nilpotent_module, make_group, norm_matrix,
                          prime_factors, sylow_decomposition)
from kcell.linalg import Fp, Matrix, Ring, ZZ, cokernel_group

C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)
C4 = FiniteGroup.cyclic(4)
C6 = FiniteGroup.cyclic(6)
S3 = FiniteGroup.symmetric(3)
V4 = FiniteGroup.product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))


def sign_module_c2(ring):
    return GModule.from_generator_matrix(C2, ring, 1, Matrix(ring, [[-1]]))


def test_cyclic_orders():
    assert tuple(C4.element_order(g) for g in C4.elements()) == (1, 4, 2, 4)
    assert C4.inv(1) == 3 and C4.inv(2) == 2


def test_bad_tables_rejected():
    with pytest.raises(NotAGroup):
        FiniteGroup([[0, 1], [1, 1]])  # no inverse row
    with pytest.raises(NotAGroup):
        FiniteGroup([[1, 0], [0, 1]])  # identity not first
    # associativity failure: a Latin square that is not a group
    latin = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup):
        FiniteGroup(latin)


def test_s3_structure():
    assert S3.order == 6
    assert not S3.is_abelian
    assert not is_nilpotent_group(S3)
    subs = S3.subgroups()
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]
    three = next(s for s in subs if len(s) == 3)
    two = next(s for s in subs if len(s) == 2)
    assert S3.is_normal(three)
    assert not S3.is_normal(two)
    q, hom, _ = S3.quotient_by(three)
    assert q.order == 2
    assert hom.is_surjective() and len(hom.kernel()) == 3


def test_quotient_c4():
    q, hom, reps = C4.quotient_by((0, 2))
    assert q.order == 2 and reps == (0, 1)
    assert hom.mapping == (0, 1, 0, 1)


def test_sylow_split():
    split = sylow_decomposition(C6, 2)
    assert len(split.p_elements) == 2 and len(split.h_elements) == 3
    split3 = sylow_decomposition(C6, 3)
    assert len(split3.p_elements) == 3 and len(split3.h_elements) == 2
    with pytest.raises(NotNilpotentGroup):
        sylow_decomposition(S3, 3)
    with pytest.raises(NotNilpotentGroup):
        sylow_decomposition(S3, 2)
    assert is_nilpotent_group(C6) and is_nilpotent_group(V4)


def test_prime_factors():
    assert prime_factors(12) == [2, 3]
    assert prime_factors(1) == []


def test_module_validation():
    F2 = Fp(2)
    bad = [Matrix.identity(F2, 1), Matrix.zero(F2, 1, 1)]
    with pytest.raises(BadAction):
        GModule(C2, F2, 1, bad)


def test_regular_fixed_points_are_norm_line():
    reg = GModule.regular(C3, Fp(2))
    fixed, incl = fixed_points(reg, range(3))
    assert fixed.rank == 1
    assert list(incl.column(0)) == [1, 1, 1]
    for g in C3.elements():
        assert fixed.action[g] == Matrix.identity(Fp(2), 1)


def test_fixed_points_integer_saturated():
    swap = GModule.from_generator_matrix(C2, ZZ, 1, Matrix(ZZ, [[0, 1], [1, 0]]))
    fixed, incl = fixed_points(swap, (0, 1))
    assert fixed.rank == 1
    assert [abs(x) for x in incl.column(0)] == [1, 1]


def test_fixed_points_requires_normal():
    reg = GModule.regular(S3, Fp(2))
    two = next(s for s in S3.subgroups() if len(s) == 2)
    with pytest.raises(BadSubgroup):
        fixed_points(reg, two)


def test_sign_module_coinvariants():
    sign = sign_module_c2(ZZ)
    rel = coinvariant_relations(sign, (0, 1))
    assert cokernel_group(1, rel).torsion == (2,)
    assert norm_matrix(sign, (0, 1)).is_zero


def test_induce_from_trivial_subgroup_is_regular():
    triv_e = GModule.trivial(FiniteGroup.cyclic(1), Fp(2), 1)
    ind = induce_module(triv_e, C3, (0,))
    assert ind == GModule.regular(C3, Fp(2))


def test_induce_and_restrict_ranks():
    sub, emb = C4.subgroup_as_group((0, 2))
    ind = induce_module(GModule.trivial(sub, Fp(2), 1), C4, emb)
    assert ind.rank == 2
    fixed, _ = fixed_points(ind, range(4))
    assert fixed.rank == 1
    res, subgrp = GModule.regular(C4, Fp(2)).restrict_to_subgroup((0, 2))
    fixed_res, _ = fixed_points(res, range(subgrp.order))
    assert fixed_res.rank == 2  # free of rank 2 over the subgroup


def test_dual_of_permutation_module():
    reg = GModule.regular(C4, ZZ)
    assert reg.dual() == reg


def test_hom_space_dimensions():
    reg2 = GModule.regular(C2, Fp(2))
    triv2 = GModule.trivial(C2, Fp(2), 1)
    assert len(hom_space_basis(reg2, triv2)) == 1
    assert len(hom_space_basis(triv2, reg2)) == 1
    reg3 = GModule.regular(C3, Fp(3))
    assert len(hom_space_basis(reg3, reg3)) == 3


def test_module_map_validation():
    reg = GModule.regular(C2, Fp(2))
    triv = GModule.trivial(C2, Fp(2), 1)
    aug = GModuleMap(reg, triv, Matrix(Fp(2), [[1, 1]]))
    nm = GModuleMap(reg, reg, norm_matrix(reg, (0, 1)))
    assert (aug.matrix * nm.matrix).is_zero  # augmentation kills the norm image
    with pytest.raises(BadAction):
        GModuleMap(sign_module_c2(Fp(3)), GModule.trivial(C2, Fp(3), 1),
                   Matrix(Fp(3), [[1]]))


def test_direct_sum():
    reg = GModule.regular(C2, Fp(2))
    triv = GModule.trivial(C2, Fp(2), 1)
    total = direct_sum_modules([reg, triv])
    assert total.rank == 3
    fixed, _ = fixed_points(total, (0, 1))
    assert fixed.rank == 2


def test_nilpotency_field_cases():
    assert is_nilpotent_module(GModule.trivial(C2, Fp(2), 1)).nclass == 1
    assert is_nilpotent_module(GModule.regular(C2, Fp(2))).nclass == 2
    assert is_nilpotent_module(GModule.regular(C3, Fp(3))).nclass == 3
    # characteristic away from the group order: augmentation acts invertibly
    assert not is_nilpotent_module(sign_module_c2(Fp(3))).nilpotent
    assert not is_nilpotent_module(GModule.regular(C2, Fp(3))).nilpotent


def test_nilpotency_integer_cases():
    assert not is_nilpotent_module(sign_module_c2(ZZ)).nilpotent
    assert not is_nilpotent_module(GModule.regular(C2, ZZ)).nilpotent
    assert is_nilpotent_module(GModule.trivial(C2, ZZ, 2)).nclass == 1


def test_nilpotency_zmod_cases():
    z4 = Ring(4)
    assert is_nilpotent_module(sign_module_c2(z4)).nclass == 2
    assert is_nilpotent_module(GModule.trivial(C2, z4, 1)).nclass == 1
    z3 = Ring(9)
    minus = GModule.from_generator_matrix(C2, z3, 1, Matrix(z3, [[-1]]))
    assert not is_nilpotent_module(minus).nilpotent


def test_presented_module_reduce_and_nilpotency():
    # Z/5 with trivial action, padded by a unit relation
    rel = Matrix(ZZ, [[1, 0], [0, 5]], cols=2)
    ident = Matrix.identity(ZZ, 2)
    m = PresentedGModule(C2, 2, rel, [ident, ident])
    red = m.reduce()
    assert red.ngens == 1 and red.canonical_group().torsion == (5,)
    assert is_nilpotent_module(m).nclass == 1
    # Z/3 with the sign action: augmentation acts as a unit, never nilpotent
    rel3 = Matrix(ZZ, [[3]], cols=1)
    sign = PresentedGModule(C2, 1, rel3,
                            [Matrix.identity(ZZ, 1), Matrix(ZZ, [[-1]])])
    assert not is_nilpotent_module(sign).nilpotent
    # Z/4 with the sign action: class 2
    rel4 = Matrix(ZZ, [[4]], cols=1)
    sign4 = PresentedGModule(C2, 1, rel4,
                             [Matrix.identity(ZZ, 1), Matrix(ZZ, [[-1]])])
    assert is_nilpotent_module(sign4).nclass == 2
    # mixed free and torsion: Z (trivial) + Z/4 (sign)
    relm = Matrix(ZZ, [[4], [0]], cols=1)
    mixed = PresentedGModule(C2, 2, relm,
                             [Matrix.identity(ZZ, 2), Matrix(ZZ, [[-1, 0], [0, 1]])])
    rep = is_nilpotent_module(mixed)
    assert rep.nilpotent and rep.nclass == 2


def test_presented_module_action_validation():
    rel = Matrix(ZZ, [[3]], cols=1)
    with pytest.raises(BadAction):
        # g acts by 0, but 0*0 = 0 is not 1 mod 3
        PresentedGModule(C2, 1, rel, [Matrix.identity(ZZ, 1), Matrix(ZZ, [[0]])])
    # 2 = -1 mod 3 genuinely is an action of C2 on Z/3
    PresentedGModule(C2, 1, rel, [Matrix.identity(ZZ, 1), Matrix(ZZ, [[2]])])


def test_pullback_along_quotient():
    q, hom, _ = C4.quotient_by((0, 2))
    sign = sign_module_c2(ZZ)
    pulled = sign.pullback(hom)
    assert pulled.group == C4
    assert pulled.action[1] == Matrix(ZZ, [[-1]])
    assert pulled.action[2] == Matrix.identity(ZZ, 1)


@given(st.integers(min_value=1, max_value=10))
@settings(max_examples=20, deadline=None)
def test_cyclic_subgroup_lattice(n):
    g = FiniteGroup.cyclic(n)
    subs = g.subgroups()
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    assert sorted(len(s) for s in subs) == divisors


@given(st.sets(st.integers(min_value=0, max_value=5), min_size=1, max_size=3))
@settings(max_examples=30, deadline=None)
def test_closure_is_subgroup(gens):
    closed = S3.closure(gens)
    assert S3.is_subgroup(closed)
    assert 6 % len(closed) == 0


def test_make_group_from_string_specs():
    assert make_group("cyclic:6").order == 6
    prod = make_group("product:cyclic:2,cyclic:3")
    assert prod.order == 6 and prod.is_abelian
    assert max(prod.element_order(g) for g in prod.elements()) == 6
    assert not make_group("symmetric:3").is_abelian


def test_make_group_passthrough_and_tables():
    assert make_group(C6) is C6
    rebuilt = make_group([list(row) for row in S3.table])
    assert rebuilt == S3 and not rebuilt.is_abelian
    labeled = make_group({"table": S3.table, "label": "sym3"})
    assert labeled.label == "sym3"


def test_make_group_rejects_bad_specs():
    with pytest.raises(NotAGroup):
        make_group([[0, 1], [1, 1]])
    for spec in ("cyclic:x", "dihedral:4", "cyclic", 17, {"label": "no table"}):
        with pytest.raises(NotAGroup):
            make_group(spec)
