"""Torsion functors and localizations for augmentation ideals.

The section functor is computed as an ascending annihilator chain; over
Z every lattice in the chain is saturated, so stabilization is honest.
Localization at a central algebra element z works integrally: the
minimal polynomial of z, with its t-power stripped, has constant term
+-c, making z invertible on the eventual image once c is inverted.  The
quotient M[1/z]/M is then a sum of Prufer groups, one for each prime
dividing c, with multiplicity the stable corank of powers of z on the
eventual image modulo that prime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotStabilized, UnsupportedGroup, UnsupportedRing
from .groups import FiniteGroup, GModule, prime_factors
from .linalg import (FgAbelianGroup, Fp, Matrix, ZZ, cokernel_group, echelonize,
                     hermite_column_form, kernel_basis, lattice_contains,
                     solve_field, solve_integer, span_basis)


@dataclass(frozen=True)
class AlgebraElement:
    """Element of the group algebra, as a coefficient vector over elements."""

    group: FiniteGroup
    ring: object
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.group.order:
            raise UnsupportedGroup("coefficient vector length mismatch")

    def matrix_on(self, m: GModule) -> Matrix:
        if m.group != self.group or m.ring != self.ring:
            raise UnsupportedRing("algebra element over a different group or ring")
        total = Matrix.zero(m.ring, m.rank, m.rank)
        for g, c in enumerate(self.coeffs):
            if c:
                total = total + m.action[g].scale(c)
        return total

    def is_central(self) -> bool:
        reg = GModule.regular(self.group, self.ring)
        z = self.matrix_on(reg)
        return all(z * reg.action[g] == reg.action[g] * z
                   for g in self.group.generating_set())

    def label(self) -> str:
        parts = []
        for g, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*g{g}" if g else str(c))
        return " + ".join(parts) if parts else "0"


def one_minus(group: FiniteGroup, ring, g: int) -> AlgebraElement:
    coeffs = [0] * group.order
    coeffs[0] += 1
    coeffs[g] = ring.reduce(coeffs[g] - 1)
    return AlgebraElement(group, ring, tuple(ring.reduce(c) for c in coeffs))


def augmentation_generators(group: FiniteGroup, ring) -> list[AlgebraElement]:
    return [one_minus(group, ring, g) for g in group.generating_set()]


@dataclass(frozen=True)
class TorsionReport:
    """Section functor output: the torsion submodule with its residual
    action, the inclusion, and the annihilator chain that certifies it."""

    submodule: GModule
    inclusion: Matrix
    chain_ranks: tuple[int, ...]
    stabilized_at: int


def _left_null_rows(basis: Matrix) -> Matrix:
    """Rows vanishing exactly on the span (field) or saturation (Z)."""
    return kernel_basis(basis.transpose()).transpose()


def i_power_torsion(m: GModule, generators=None) -> TorsionReport:
    """Elements killed by a power of the augmentation ideal.

    Ascending annihilator chain K_n = ann(I^n); each K_n is a submodule,
    so testing the ideal on group generators is enough.  Over Z every
    K_n is saturated and the chain stabilizes.
    """
    group, ring = m.group, m.ring
    if not (ring.is_field or ring.is_integers):
        raise UnsupportedRing("section functor needs a field or Z")
    gens = [g for g in (generators or group.generating_set()) if g]
    ident = Matrix.identity(ring, m.rank)
    if not gens or m.rank == 0:
        return TorsionReport(m, ident, (m.rank,), 0)
    basis = Matrix.zero(ring, m.rank, 0)
    ranks = [0]
    step = 0
    while True:
        null = _left_null_rows(basis) if basis.cols else ident
        blocks = [null * (m.action[g] - ident) for g in gens]
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.vstack(b)
        nxt = kernel_basis(stacked)
        step += 1
        ranks.append(nxt.cols)
        if nxt.cols == basis.cols:
            break
        basis = nxt
    if basis.cols == 0:
        sub = GModule.trivial(group, ring, 0)
        return TorsionReport(sub, Matrix.zero(ring, m.rank, 0),
                             tuple(ranks), step)
    acts = []
    for g in group.elements():
        moved = m.action[g] * basis
        acts.append(solve_field(basis, moved) if ring.is_field
                    else solve_integer(basis, moved))
    sub = GModule(group, ring, basis.cols, acts, _trusted=True)
    return TorsionReport(sub, basis, tuple(ranks), step)


def minimal_polynomial(z: Matrix) -> tuple[int, ...]:
    """Primitive integer minimal polynomial, lowest degree first."""
    if not z.ring.is_integers:
        raise UnsupportedRing("integer minimal polynomial")
    d = z.rows
    if d == 0:
        return (1,)
    power = Matrix.identity(ZZ, d)
    vecs = [[power.data[i][j] for i in range(d) for j in range(d)]]
    for deg in range(1, d + 2):
        power = power * z
        vecs.append([power.data[i][j] for i in range(d) for j in range(d)])
        stacked = Matrix.from_columns(ZZ, vecs, d * d)
        ker = kernel_basis(stacked)
        if ker.cols:
            assert ker.cols == 1, "first dependency must be one-dimensional"
            coeffs = list(ker.column(0))
            if coeffs[-1] < 0:
                coeffs = [-c for c in coeffs]
            return tuple(coeffs)
    raise NotStabilized("no minimal polynomial found (cannot happen)")


def saturate(basis: Matrix) -> Matrix:
    """Saturation of an integer column lattice inside its ambient space."""
    if basis.cols == 0:
        return basis
    null = kernel_basis(basis.transpose())
    if null.cols == 0:
        return span_basis(Matrix.identity(ZZ, basis.rows))
    return kernel_basis(null.transpose())


@dataclass(frozen=True)
class DivisibleQuotient:
    """Sum of Prufer groups: prime -> multiplicity."""

    prufer: tuple[tuple[int, int], ...]

    @property
    def is_zero(self) -> bool:
        return not self.prufer

    def __str__(self):
        if not self.prufer:
            return "0"
        parts = []
        for p, mult in self.prufer:
            base = f"Z[1/{p}]/Z"
            parts.append(base if mult == 1 else f"({base})^{mult}")
        return " + ".join(parts)


@dataclass(frozen=True)
class Localization:
    """Localization of a lattice module at a central algebra element.

    w_basis spans the saturated eventual image W; z acts on W by
    z_on_w, invertible once c is inverted.  The localization map sends
    x to (coordinates of z^power x in W) divided by z^power; quotient
    describes M[1/z]/M.
    """

    module: GModule
    element: AlgebraElement
    is_zero: bool
    w_basis: Matrix
    c: int
    z_on_w: Matrix
    power: int
    comparison: Matrix
    quotient: DivisibleQuotient
    eventual_kernel: Matrix

    def w_rank(self) -> int:
        return self.w_basis.cols


def _eventual_kernel(z: Matrix) -> Matrix:
    prev = Matrix.zero(z.ring, z.rows, 0)
    power = z
    while True:
        ker = kernel_basis(power)
        if ker.cols == prev.cols:
            return ker
        prev = ker
        power = power * z


def localize_module(m: GModule, elt: AlgebraElement) -> Localization:
    """Telescope localization of a module at a central element.

    Over a field the eventual image splits off directly.  Over Z the
    image lattices can shrink forever, so invertibility is established
    on the saturated eventual image after inverting the constant term
    of the stripped minimal polynomial.
    """
    if not elt.is_central():
        raise UnsupportedGroup("localization needs a central element")
    ring = m.ring
    z = elt.matrix_on(m)
    if ring.is_field:
        power = Matrix.identity(ring, m.rank)
        prev_rank = m.rank + 1
        while True:
            rank = echelonize(power).rank
            if rank == prev_rank:
                break
            prev_rank = rank
            power = power * z
        w = span_basis(power)
        zw = solve_field(w, z * w) if w.cols else Matrix.zero(ring, 0, 0)
        comp = solve_field(w, power) if w.cols else Matrix.zero(ring, 0, m.rank)
        return Localization(m, elt, w.cols == 0, w, 1, zw, 0, comp,
                            DivisibleQuotient(()), _eventual_kernel(z))
    if not ring.is_integers:
        raise UnsupportedRing("localization needs a field or Z")
    mu = minimal_polynomial(z)
    v = next(i for i, c in enumerate(mu) if c)
    nu = mu[v:]
    if len(nu) == 1:
        # minimal polynomial is a power of t: z is nilpotent
        return Localization(m, elt, True, Matrix.zero(ZZ, m.rank, 0), 1,
                            Matrix.zero(ZZ, 0, 0), v, Matrix.zero(ZZ, 0, m.rank),
                            DivisibleQuotient(()), Matrix.identity(ZZ, m.rank))
    c = abs(nu[0])
    zv = Matrix.identity(ZZ, m.rank)
    for _ in range(v):
        zv = zv * z
    w = span_basis(Matrix.identity(ZZ, m.rank)) if v == 0 else \
        saturate(span_basis(zv))
    zw = solve_integer(w, z * w)
    comp = solve_integer(w, zv)
    image = span_basis(comp)
    finite = cokernel_group(w.cols, image)
    if not finite.is_trivial:
        # a finite cokernel of the comparison is absorbed into the
        # divisible quotient exactly when some power of z lands the
        # whole eventual lattice back inside the image; the Prufer
        # multiplicities below do not depend on the chosen lattice
        lat = hermite_column_form(image)
        power_w = zw
        for _ in range(128):
            if all(lattice_contains(lat, power_w.column(j))
                   for j in range(power_w.cols)):
                break
            power_w = power_w * zw
        else:
            raise NotStabilized("finite part of the quotient is not "
                                "absorbed by powers of z")
    prufer = []
    for p in prime_factors(c):
        zp = Matrix(Fp(p), zw.data, cols=zw.cols)
        # stable corank of powers mod p counts the Prufer summands:
        # on the part where z is not p-adically invertible, z^k mod p
        # eventually vanishes, while powers of the invertible part keep
        # full rank
        power_p = zp
        rank = echelonize(power_p).rank
        while True:
            power_p = power_p * zp
            nxt = echelonize(power_p).rank
            if nxt == rank:
                break
            rank = nxt
        corank = w.cols - rank
        if corank:
            prufer.append((p, corank))
    return Localization(m, elt, w.cols == 0, w, c, zw, v, comp,
                        DivisibleQuotient(tuple(prufer)), _eventual_kernel(z))


def telescope_localize(x, elt: AlgebraElement):
    """Stable image of a central element acting on a bounded complex.

    The images of powers of z form a descending chain of subcomplexes;
    once the chain stops moving, z acts invertibly on the restriction,
    which computes the homotopy colimit of the multiplication telescope.
    Returns the restricted complex and the stage at which the images of
    consecutive powers first agree in every degree.

    Over a field the dimensions must drop, so stabilization is certain.
    Over Z the image lattices can shrink forever; if they do but every
    homology group is finite with z inducing an automorphism, each
    telescope transition is already a homology isomorphism and the
    complex itself is returned at stage 0.  Otherwise the colimit has no
    finitely generated chain model here and NotStabilized signals the
    localized-ring module path of localize_module.
    """
    from .complexes import GComplex

    if x.group != elt.group or x.ring != elt.ring:
        raise UnsupportedRing("element and complex disagree on group or ring")
    if not elt.is_central():
        raise UnsupportedGroup("telescope localization needs a central element")
    ring = x.ring
    if not (ring.is_field or ring.is_integers):
        raise UnsupportedRing("telescope localization needs a field or Z")
    degrees = range(x.lo, x.hi + 1)
    zmats = {n: elt.matrix_on(x.module(n)) for n in degrees}
    spans, stages = {}, {}
    lattice_moved = False
    for n in degrees:
        zm = zmats[n]
        cur = span_basis(Matrix.identity(ring, zm.rows))
        power = Matrix.identity(ring, zm.rows)
        k = 0
        while True:
            power = power * zm
            nxt = span_basis(power)
            if nxt == cur:
                break
            if k > zm.rows + 4:
                # rank settled but the index keeps growing
                lattice_moved = True
                break
            cur, k = nxt, k + 1
        spans[n], stages[n] = cur, k
        if lattice_moved:
            break
    if lattice_moved:
        return _quasi_invertible_fallback(x, zmats)
    stage = max(stages.values(), default=0)
    if stage == 0:
        return x, 0
    mods, diffs = {}, {}
    for n in degrees:
        w = spans[n]
        if w.cols == 0:
            mods[n] = GModule.trivial(x.group, ring, 0)
            continue
        acts = []
        for g in x.group.elements():
            moved = x.module(n).action[g] * w
            acts.append(solve_field(w, moved) if ring.is_field
                        else solve_integer(w, moved))
        mods[n] = GModule(x.group, ring, w.cols, acts, _trusted=True)
    for n in range(x.lo + 1, x.hi + 1):
        if spans[n].cols == 0 or spans[n - 1].cols == 0:
            continue
        moved = x.diff(n) * spans[n]
        diffs[n] = (solve_field(spans[n - 1], moved) if ring.is_field
                    else solve_integer(spans[n - 1], moved))
    return GComplex(x.group, ring, mods, diffs), stage


def _quasi_invertible_fallback(x, zmats):
    """Accept a non-stabilizing integral telescope only when z is an
    automorphism of the (finite) homology in every degree, which makes
    each transition map a homology isomorphism."""
    for n in range(x.lo, x.hi + 1):
        kern = kernel_basis(x.diff(n))
        if kern.cols == 0:
            continue
        rel = solve_integer(kern, x.diff(n + 1))
        if cokernel_group(kern.cols, rel).free_rank:
            raise NotStabilized(
                f"image lattices keep shrinking and homology in degree {n} "
                "is infinite; use the localized-ring module path")
        induced = solve_integer(kern, zmats[n] * kern)
        if not cokernel_group(kern.cols, induced.hstack(rel)).is_trivial:
            raise NotStabilized(
                f"image lattices keep shrinking and z is not invertible on "
                f"the homology in degree {n}; use the localized-ring module path")
    return x, 0


@dataclass(frozen=True)
class CyclicSequenceReport:
    """Four-term exact sequence of the telescope for one central element:
    0 -> torsion -> M -> M[1/z] -> quotient -> 0, with cross-checks."""

    torsion: TorsionReport
    localization: Localization
    pi0: str
    pi_minus_1: str
    cross_checks: dict


def cyclic_pi1_sequence(m: GModule, elt: AlgebraElement | None = None) -> CyclicSequenceReport:
    group = m.group
    if elt is None:
        gens = group.generating_set()
        if len(gens) != 1:
            raise UnsupportedGroup("default element needs a cyclic group")
        elt = one_minus(group, m.ring, gens[0])
    loc = localize_module(m, elt)
    tor = i_power_torsion(m)
    checks = {}
    # the section functor must agree with the eventual kernel of z
    ev = loc.eventual_kernel
    if m.ring.is_integers:
        same = span_basis(ev) == span_basis(tor.inclusion)
    else:
        left = echelonize(ev.hstack(tor.inclusion)).rank
        same = left == ev.cols == tor.inclusion.cols
    checks["torsion_matches_eventual_kernel"] = bool(same)
    zt = elt.matrix_on(m)
    power = Matrix.identity(m.ring, m.rank)
    for _ in range(m.rank + 1):
        power = power * zt
    checks["z_power_kills_torsion"] = (power * tor.inclusion).is_zero
    if m.ring.is_integers:
        pi0 = str(cokernel_group(tor.submodule.rank, Matrix.zero(ZZ, tor.submodule.rank, 0)))
        pi_m1 = str(loc.quotient)
    else:
        pi0 = f"k^{tor.submodule.rank}"
        pi_m1 = "0"
    return CyclicSequenceReport(tor, loc, pi0, pi_m1, checks)


@dataclass(frozen=True)
class LocalCohomologyReport:
    group_label: str
    ring_label: str
    generator_labels: tuple[str, ...]
    values: dict[int, str]
    all_localizations_vanish: bool


def local_cohomology_groupring(group: FiniteGroup, ring,
                               elements: list[AlgebraElement] | None = None
                               ) -> LocalCohomologyReport:
    """Local cohomology of the group algebra at its augmentation ideal,
    via the stable Koszul complex on the given central generators.

    Field coefficients with every generator nilpotent collapse to the
    group algebra in degree zero.  The integral cyclic case is computed
    exactly from the two-term complex; other integral shapes are out of
    scope and raise.
    """
    if elements is None:
        elements = augmentation_generators(group, ring)
    for e in elements:
        if not e.is_central():
            raise UnsupportedGroup("stable Koszul needs central generators")
    reg = GModule.regular(group, ring)
    locs = [localize_module(reg, e) for e in elements]
    labels = tuple(e.label() for e in elements)
    if all(l.is_zero for l in locs):
        values = {0: (f"k^{group.order}" if ring.is_field
                      else str(FgAbelianGroup(group.order)))}
        for s in range(1, len(elements) + 1):
            values[s] = "0"
        return LocalCohomologyReport(group.label, str(ring), labels, values, True)
    if len(elements) == 1 and ring.is_integers:
        tor = i_power_torsion(reg)
        loc = locs[0]
        values = {0: str(cokernel_group(tor.submodule.rank,
                                        Matrix.zero(ZZ, tor.submodule.rank, 0))),
                  1: str(loc.quotient)}
        return LocalCohomologyReport(group.label, str(ring), labels, values, False)
    raise UnsupportedGroup("stable Koszul beyond one integral generator "
                           "or nilpotent field generators is not supported")


def c2_corollary_check(stages: int = 4, lo: int = 0, hi: int = 3) -> dict:
    """Finite-stage verification of the cellular approximation of the
    integral group algebra of the order-two group.

    Stage k of the approximation is the two-term fiber of z^k on the
    algebra R, mapping to R by the identity in top degree.  The cone of
    that map collapses onto R via (f, m) -> f - z^k m, and under this
    identification the telescope transition acts on every obstruction
    group as multiplication by z.  Since z kills the fixed points of R
    and the higher obstruction groups already vanish, each obstruction
    dies one stage later, so the colimit map is an equivalence.
    """
    from .complexes import ComplexMap, GComplex, cone
    from .derived import ext_range
    from .groups import fixed_points

    group = FiniteGroup.cyclic(2)
    reg = GModule.regular(group, ZZ)
    elt = one_minus(group, ZZ, 1)
    seq = cyclic_pi1_sequence(reg, elt)
    z = elt.matrix_on(reg)

    checks = dict(seq.cross_checks)
    target = GComplex.from_module(reg)
    collapse = []
    power = Matrix.identity(ZZ, reg.rank)
    for _ in range(stages):
        power = power * z
        fiber = GComplex(group, ZZ, {-1: reg, 0: reg}, {0: power.scale(-1)})
        approx = ComplexMap(fiber, target,
                            {0: Matrix.identity(ZZ, reg.rank)})
        c = cone(approx)[0]
        psi = ComplexMap(c, target,
                         {0: Matrix.identity(ZZ, reg.rank).hstack(power.scale(-1))})
        collapse.append(psi.is_quasi_iso())
    checks["stage_cones_collapse_onto_algebra"] = all(collapse)

    obstruction = ext_range(reg, lo, hi)
    fixed, incl = fixed_points(reg, list(group.elements()))
    checks["higher_obstructions_vanish"] = all(
        (v.is_trivial if hasattr(v, "is_trivial") else v == 0)
        for s, v in obstruction.values.items() if s > 0)
    checks["z_kills_fixed_points"] = (z * incl).is_zero
    return {
        "pi0": seq.pi0,
        "pi_minus_1": seq.pi_minus_1,
        "cross_checks": checks,
        "obstruction_window": [lo, hi],
        "obstructions": obstruction.pretty(),
        "stages_checked": stages,
        "fixed_rank": fixed.rank,
    }


def _invertible_on_finite_module(z: Matrix) -> bool:
    """Over a finite coefficient ring a square matrix is invertible
    exactly when some positive power is the identity."""
    if z.rows == 0:
        return True
    ident = Matrix.identity(z.ring, z.rows)
    power = z
    seen = set()
    for _ in range(10000):
        if power == ident:
            return True
        key = tuple(tuple(row) for row in power.data)
        if key in seen:
            return False
        seen.add(key)
        power = power * z
    raise NotStabilized("power cycle of the matrix did not close")


def corollary_c2_checker(cohomology: list[GModule]) -> dict:
    """Decide whether graded data over the order-two group assembles to
    the integers concentrated in degree zero.

    cohomology[n] is the degree-n module; degree 0 over Z, positive
    degrees finite (given over Z/m).  The affirmative conditions: degree
    zero is the rank-one lattice with trivial action, and each positive
    degree is finite of odd order with the reflection acting by -1.
    Every verdict is cross-checked against the telescope obstructions
    computed independently per degree: the section functor value in
    degree n and the divisible quotient from degree n-1 are the two
    outer terms around pi_{-n} of the approximation.
    """
    if not cohomology:
        raise UnsupportedGroup("need at least a degree-0 module")
    group = cohomology[0].group
    if group.order != 2:
        raise UnsupportedGroup("checker works over the order-two group")
    g = group.generating_set()[0]
    conditions: dict[int, tuple[str, ...]] = {}
    torsion: dict[int, str] = {}
    quotient: dict[int, str] = {}
    for n, m in enumerate(cohomology):
        if m.group != group:
            raise UnsupportedGroup("all modules must share one group")
        reasons = []
        if n == 0:
            if not m.ring.is_integers:
                reasons.append("degree 0 coefficients are not the integers")
            elif m.rank != 1:
                reasons.append(f"degree 0 has rank {m.rank} rather than "
                               "a single fixed line")
            elif m.action[g] != Matrix.identity(m.ring, 1):
                reasons.append("degree 0 action is nontrivial")
        else:
            if m.ring.is_integers:
                if m.rank:
                    reasons.append(f"degree {n} is not finite")
            elif m.rank:
                if m.ring.modulus % 2 == 0:
                    reasons.append(f"degree {n} has even order")
                neg = Matrix.identity(m.ring, m.rank).scale(-1)
                if m.action[g] != neg:
                    reasons.append(f"degree {n} action is not by -1")
        conditions[n] = tuple(reasons)
        elt = one_minus(group, m.ring, g)
        if m.ring.is_field or m.ring.is_integers:
            tor = i_power_torsion(m)
            if m.ring.is_integers:
                torsion[n] = str(FgAbelianGroup(tor.submodule.rank))
                quotient[n] = str(localize_module(m, elt).quotient)
            else:
                p = m.ring.modulus
                torsion[n] = str(FgAbelianGroup(0, (p,) * tor.submodule.rank))
                # a finite module surjects onto its localization
                quotient[n] = "0"
        else:
            if not _invertible_on_finite_module(elt.matrix_on(m)):
                raise UnsupportedRing("composite modulus with non-invertible "
                                      "augmentation element")
            torsion[n] = "0"
            quotient[n] = "0"
    pi = {0: torsion[0]}
    for n in range(1, len(cohomology) + 1):
        sub = quotient.get(n - 1, "0")
        top = torsion.get(n, "0")
        if sub == "0":
            pi[-n] = top
        elif top == "0":
            pi[-n] = sub
        else:
            pi[-n] = f"extension of {top} by {sub}"
    obstructions = {}
    for n in range(1, len(cohomology) + 1):
        if pi[-n] != "0":
            obstructions[-n] = {"sections": torsion.get(n, "0"),
                                "divisible": quotient.get(n - 1, "0")}
    conditions_ok = all(not r for r in conditions.values())
    pi_ok = pi[0] == "Z" and not obstructions
    return {
        "verdict": "affirmed" if conditions_ok and pi_ok else "rejected",
        "conditions": conditions,
        "pi": pi,
        "obstructions": obstructions,
        "checks": {"pi0_is_Z": pi[0] == "Z",
                   "negative_pi_vanish": not obstructions,
                   "conditions_match_obstructions": conditions_ok == pi_ok},
    }
