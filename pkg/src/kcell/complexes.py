"""Bounded chain complexes of equivariant free modules.

A GComplex stores one GModule per degree on a contiguous range together
with the differentials, validated to commute with the group action and
square to zero.  Homology carries the residual action: over a field it
is returned as a GModule in a chosen complement basis, over Z as a
PresentedGModule on the saturated kernel lattice.  Mapping cones come
with their canonical triangle, and candidate triangles are certified by
an explicit nullhomotopy plus an acyclic comparison cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (BadWindow, CoefficientMismatch, NotAComplex, NotATriangle,
                     UnsupportedRing)
from .groups import FiniteGroup, GModule, PresentedGModule, direct_sum_modules
from .linalg import (FgAbelianGroup, Matrix, ZZ, echelonize, homology_pair,
                     kernel_basis, solve_field, solve_integer, span_basis)


class GComplex:
    """Chain complex of free equivariant modules, bounded on both sides."""

    __slots__ = ("group", "ring", "modules", "diffs", "lo", "hi")

    def __init__(self, group: FiniteGroup, ring, modules: dict, diffs: dict):
        degrees = sorted(modules)
        if degrees:
            lo, hi = degrees[0], degrees[-1]
            if degrees != list(range(lo, hi + 1)):
                raise NotAComplex("module degrees must be contiguous")
        else:
            lo, hi = 0, -1
        for n, m in modules.items():
            if m.group != group or m.ring != ring:
                raise CoefficientMismatch(f"module in degree {n} over wrong group or ring")
        for n, d in diffs.items():
            if n - 1 not in modules or n not in modules:
                raise NotAComplex(f"differential {n} has no modules around it")
            if (d.rows, d.cols) != (modules[n - 1].rank, modules[n].rank):
                raise NotAComplex(f"differential {n} has the wrong shape")
            if d.ring != ring:
                raise CoefficientMismatch(f"differential {n} over the wrong ring")
            for g in group.generating_set():
                if d * modules[n].action[g] != modules[n - 1].action[g] * d:
                    raise NotAComplex(f"differential {n} is not equivariant")
        for n in range(lo + 2, hi + 1):
            d1, d2 = self._diff_of(modules, diffs, n - 1), self._diff_of(modules, diffs, n)
            if not (d1 * d2).is_zero:
                raise NotAComplex(f"d*d is nonzero at degree {n}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "modules", dict(modules))
        object.__setattr__(self, "diffs", dict(diffs))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, *a):
        raise AttributeError("GComplex is immutable")

    @staticmethod
    def _diff_of(modules, diffs, n):
        if n in diffs:
            return diffs[n]
        tgt = modules[n - 1].rank if n - 1 in modules else 0
        src = modules[n].rank if n in modules else 0
        ring = next(iter(modules.values())).ring
        return Matrix.zero(ring, tgt, src)

    def module(self, n: int) -> GModule:
        if n in self.modules:
            return self.modules[n]
        return GModule.trivial(self.group, self.ring, 0)

    def diff(self, n: int) -> Matrix:
        if n in self.diffs:
            return self.diffs[n]
        return Matrix.zero(self.ring, self.module(n - 1).rank, self.module(n).rank)

    def rank(self, n: int) -> int:
        return self.module(n).rank

    def total_rank(self) -> int:
        return sum(m.rank for m in self.modules.values())

    def support(self) -> tuple[int, int]:
        """Degree range trimmed to nonzero modules; (0, -1) when empty."""
        degs = [n for n, m in self.modules.items() if m.rank]
        if not degs:
            return (0, -1)
        return (min(degs), max(degs))

    @staticmethod
    def from_module(m: GModule, degree: int = 0) -> "GComplex":
        return GComplex(m.group, m.ring, {degree: m}, {})

    @staticmethod
    def zero(group: FiniteGroup, ring) -> "GComplex":
        return GComplex(group, ring, {}, {})

    def shift(self, k: int) -> "GComplex":
        """Suspension: shift(k) puts old degree n in degree n + k.

        Differentials pick up the sign (-1)^k.
        """
        mods = {n + k: m for n, m in self.modules.items()}
        sign = -1 if k % 2 else 1
        diffs = {n + k: (d.scale(sign) if sign < 0 else d)
                 for n, d in self.diffs.items()}
        return GComplex(self.group, self.ring, mods, diffs)

    def direct_sum(self, other: "GComplex") -> "GComplex":
        if self.group != other.group or self.ring != other.ring:
            raise CoefficientMismatch("sum of complexes over different groups or rings")
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        if hi < lo:
            return GComplex.zero(self.group, self.ring)
        mods, diffs = {}, {}
        for n in range(lo, hi + 1):
            mods[n] = direct_sum_modules([self.module(n), other.module(n)])
        for n in range(lo + 1, hi + 1):
            a, b = self.diff(n), other.diff(n)
            top = a.hstack(Matrix.zero(self.ring, a.rows, b.cols))
            bot = Matrix.zero(self.ring, b.rows, a.cols).hstack(b)
            diffs[n] = top.vstack(bot)
        return GComplex(self.group, self.ring, mods, diffs)

    def dualize(self) -> "GComplex":
        """Degreewise linear dual, placed in negated degrees."""
        mods = {-n: m.dual() for n, m in self.modules.items()}
        diffs = {}
        for n, d in self.diffs.items():
            # dual of d_n : X_n -> X_{n-1} is a differential (DX)_{1-n} -> (DX)_{-n}
            diffs[1 - n] = d.transpose()
        return GComplex(self.group, self.ring, mods, diffs)

    def homology_summary(self) -> dict[int, object]:
        """Plain homology per degree: dimension over a field, group over Z
        or Z/m.  The group action is ignored here."""
        out = {}
        for n in range(self.lo, self.hi + 1):
            h = homology_pair(self.diff(n), self.diff(n + 1))
            out[n] = h
        return {n: v for n, v in out.items()
                if (isinstance(v, int) and v) or
                   (isinstance(v, FgAbelianGroup) and not v.is_trivial)}

    def is_acyclic(self) -> bool:
        return not self.homology_summary()

    def homology_module(self, n: int):
        """Homology in one degree with its induced action.

        Over a field: GModule on a complement of the boundaries inside
        the cycles.  Over Z: PresentedGModule on the saturated cycle
        lattice modulo boundary coordinates.
        """
        if self.rank(n) == 0:
            if self.ring.is_integers:
                return PresentedGModule(self.group, 0, Matrix.zero(ZZ, 0, 0),
                                        [Matrix.zero(ZZ, 0, 0)] * self.group.order)
            return GModule.trivial(self.group, self.ring, 0)
        d_out, d_in = self.diff(n), self.diff(n + 1)
        mod = self.module(n)
        if self.ring.is_field:
            cycles = echelonize(d_out).kernel
            bounds = span_basis(d_in)
            full = bounds.hstack(cycles)
            ech = echelonize(full)
            comp_cols = [p - bounds.cols for p in ech.pivots if p >= bounds.cols]
            reps = Matrix.from_columns(
                self.ring, [list(cycles.column(c)) for c in comp_cols], mod.rank)
            if reps.cols == 0:
                return GModule.trivial(self.group, self.ring, 0)
            basis = bounds.hstack(reps)
            acts = []
            for g in self.group.elements():
                coords = solve_field(basis, mod.action[g] * reps)
                acts.append(coords.submatrix(
                    range(bounds.cols, basis.cols), range(reps.cols)))
            return GModule(self.group, self.ring, reps.cols, acts)
        if self.ring.is_integers:
            cycles = kernel_basis(d_out)
            if cycles.cols == 0:
                return PresentedGModule(self.group, 0, Matrix.zero(ZZ, 0, 0),
                                        [Matrix.zero(ZZ, 0, 0)] * self.group.order)
            rel = solve_integer(cycles, d_in) if d_in.cols else \
                Matrix.zero(ZZ, cycles.cols, 0)
            acts = [solve_integer(cycles, mod.action[g] * cycles)
                    for g in self.group.elements()]
            return PresentedGModule(self.group, cycles.cols, rel, acts)
        raise UnsupportedRing("homology with action over Z/m with m composite")

    def homology_modules(self) -> dict[int, object]:
        lo, hi = self.support()
        return {n: self.homology_module(n) for n in range(lo, hi + 1)}

    def __eq__(self, other):
        if not isinstance(other, GComplex):
            return NotImplemented
        if self.group != other.group or self.ring != other.ring:
            return False
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return all(self.module(n) == other.module(n) and
                   self.diff(n) == other.diff(n)
                   for n in range(lo, hi + 1))

    __hash__ = None

    def __repr__(self):
        ranks = {n: self.rank(n) for n in range(self.lo, self.hi + 1)}
        return f"GComplex({self.group.label}, {self.ring}, ranks {ranks})"


@dataclass(frozen=True)
class ComplexMap:
    """Chain map of GComplexes; missing components are zero."""

    source: GComplex
    target: GComplex
    comps: dict[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        s, t = self.source, self.target
        if s.group != t.group or s.ring != t.ring:
            raise CoefficientMismatch("chain map over different groups or rings")
        for n, m in self.comps.items():
            if (m.rows, m.cols) != (t.rank(n), s.rank(n)):
                raise NotAComplex(f"component {n} has the wrong shape")
            for g in s.group.generating_set():
                if m * s.module(n).action[g] != t.module(n).action[g] * m:
                    raise NotAComplex(f"component {n} is not equivariant")
        lo = min(s.lo, t.lo)
        hi = max(s.hi, t.hi)
        for n in range(lo + 1, hi + 1):
            left = self.comp(n - 1) * s.diff(n)
            right = t.diff(n) * self.comp(n)
            if left != right:
                raise NotAComplex(f"square at degree {n} does not commute")

    def comp(self, n: int) -> Matrix:
        if n in self.comps:
            return self.comps[n]
        return Matrix.zero(self.source.ring, self.target.rank(n), self.source.rank(n))

    @staticmethod
    def identity(x: GComplex) -> "ComplexMap":
        return ComplexMap(x, x, {n: Matrix.identity(x.ring, x.rank(n))
                                 for n in x.modules if x.rank(n)})

    def compose(self, other: "ComplexMap") -> "ComplexMap":
        if other.target is not self.source and other.target != self.source:
            raise NotAComplex("composition mismatch")
        lo = min(other.source.lo, self.target.lo)
        hi = max(other.source.hi, self.target.hi)
        comps = {}
        for n in range(lo, hi + 1):
            m = self.comp(n) * other.comp(n)
            if not m.is_zero:
                comps[n] = m
        return ComplexMap(other.source, self.target, comps)

    def shift(self, k: int) -> "ComplexMap":
        return ComplexMap(self.source.shift(k), self.target.shift(k),
                          {n + k: m for n, m in self.comps.items()})

    def is_quasi_iso(self) -> bool:
        return cone(self)[0].is_acyclic()


def cone(f: ComplexMap) -> tuple[GComplex, ComplexMap, ComplexMap]:
    """Mapping cone with its two structure maps.

    cone(f)_n = S_{n-1} + T_n with d(a, b) = (-d a, f a + d b); returns
    (cone, inclusion of the target, projection to the shifted source).
    """
    s, t = f.source, f.target
    lo = min(s.lo + 1, t.lo)
    hi = max(s.hi + 1, t.hi)
    if hi < lo:
        z = GComplex.zero(s.group, s.ring)
        zmap = ComplexMap(t, z, {})
        return z, zmap, ComplexMap(z, s.shift(1), {})
    mods, diffs = {}, {}
    for n in range(lo, hi + 1):
        mods[n] = direct_sum_modules([s.module(n - 1), t.module(n)])
    for n in range(lo + 1, hi + 1):
        a = s.diff(n - 1).scale(-1)
        b = f.comp(n - 1)
        c = t.diff(n)
        top = a.hstack(Matrix.zero(s.ring, a.rows, c.cols))
        bot = b.hstack(c)
        diffs[n] = top.vstack(bot)
    cx = GComplex(s.group, s.ring, mods, diffs)
    incl = ComplexMap(t, cx, {
        n: Matrix.zero(s.ring, s.rank(n - 1), t.rank(n)).vstack(
            Matrix.identity(s.ring, t.rank(n)))
        for n in range(lo, hi + 1) if t.rank(n)})
    proj = ComplexMap(cx, s.shift(1), {
        n: Matrix.identity(s.ring, s.rank(n - 1)).hstack(
            Matrix.zero(s.ring, s.rank(n - 1), t.rank(n)))
        for n in range(lo, hi + 1) if s.rank(n - 1)})
    return cx, incl, proj


@dataclass(frozen=True)
class Triangle:
    """Candidate exact triangle a -> b -> c -> a[1], certified on demand.

    homotopy[n] : a_n -> c_{n+1} witnesses that g o f is nullhomotopic;
    verify() additionally checks that the induced comparison from
    cone(f) to c is a quasi-isomorphism, which pins c as the cofiber.
    """

    a: GComplex
    b: GComplex
    c: GComplex
    f: ComplexMap
    g: ComplexMap
    homotopy: dict[int, Matrix] = field(default_factory=dict)

    def _h(self, n: int) -> Matrix:
        if n in self.homotopy:
            return self.homotopy[n]
        return Matrix.zero(self.a.ring, self.c.rank(n + 1), self.a.rank(n))

    def comparison(self) -> ComplexMap:
        """cone(f) -> c, (a, b) -> h(a) + g(b)."""
        cx, _, _ = cone(self.f)
        comps = {}
        for n in range(cx.lo, cx.hi + 1):
            m = self._h(n - 1).hstack(self.g.comp(n))
            if not m.is_zero:
                comps[n] = m
        return ComplexMap(cx, self.c, comps)

    def verify(self) -> None:
        if self.f.source != self.a or self.f.target != self.b:
            raise NotATriangle("first map does not run a -> b")
        if self.g.source != self.b or self.g.target != self.c:
            raise NotATriangle("second map does not run b -> c")
        lo, hi = min(self.a.lo, self.c.lo - 1), max(self.a.hi, self.c.hi)
        for n in range(lo, hi + 1):
            gf = self.g.comp(n) * self.f.comp(n)
            witness = self.c.diff(n + 1) * self._h(n) + self._h(n - 1) * self.a.diff(n)
            if gf != witness:
                raise NotATriangle(f"homotopy identity fails in degree {n}")
        if not self.comparison().is_quasi_iso():
            raise NotATriangle("comparison cone(f) -> c is not a quasi-isomorphism")


def triangle_of_map(f: ComplexMap) -> Triangle:
    """The canonical triangle source -> target -> cone(f), exact on the nose."""
    cx, incl, _ = cone(f)
    s = f.source
    homotopy = {}
    for n in s.modules:
        if s.rank(n) == 0 or cx.rank(n + 1) == 0:
            continue
        # h(x) = (x, 0): then d h + h d = (0, f x) = incl o f exactly
        top = Matrix.identity(s.ring, s.rank(n))
        bot = Matrix.zero(s.ring, f.target.rank(n + 1), s.rank(n))
        homotopy[n] = top.vstack(bot)
    return Triangle(s, f.target, cx, f, incl, homotopy)


def truncate_above_im(x: GComplex, j: int) -> tuple[GComplex, ComplexMap]:
    """Good truncation keeping degrees <= j, with the natural map from x.

    Degree j+1 is replaced by the image lattice of d_{j+1}; the modules
    stay free and homology above j dies while H_n for n <= j is
    untouched.  Returns (truncated complex, projection map x -> w).
    """
    lo, hi = x.lo, x.hi
    if j >= hi:
        return x, ComplexMap.identity(x)
    if j < lo - 1:
        w = GComplex.zero(x.group, x.ring)
        return w, ComplexMap(x, w, {})
    mods = {n: x.module(n) for n in range(lo, j + 1)}
    diffs = {n: x.diff(n) for n in range(lo + 1, j + 1)}
    d = x.diff(j + 1)
    basis = span_basis(d) if d.cols else Matrix.zero(x.ring, d.rows, 0)
    im_mod, coords = _image_module(x, j + 1, basis)
    if j + 1 >= lo:
        mods[j + 1] = im_mod
        if basis.cols and j >= lo:
            diffs[j + 1] = basis
    w = GComplex(x.group, x.ring, mods, diffs)
    comps = {n: Matrix.identity(x.ring, x.rank(n))
             for n in range(lo, j + 1) if x.rank(n)}
    if basis.cols:
        comps[j + 1] = coords
    return w, ComplexMap(x, w, comps)


def truncate_below_im(x: GComplex, i: int) -> tuple[GComplex, ComplexMap]:
    """Good truncation keeping degrees >= i, with the natural map into x.

    Degree i-1 becomes the image lattice of d_i with the coordinate map
    as differential; homology below i dies, H_n for n >= i survives.
    Returns (truncated complex, inclusion map w -> x).
    """
    lo, hi = x.lo, x.hi
    if i <= lo:
        return x, ComplexMap.identity(x)
    if i > hi + 1:
        w = GComplex.zero(x.group, x.ring)
        return w, ComplexMap(w, x, {})
    mods = {n: x.module(n) for n in range(i, hi + 1)}
    diffs = {n: x.diff(n) for n in range(i + 1, hi + 1)}
    d = x.diff(i)
    basis = span_basis(d) if d.cols else Matrix.zero(x.ring, d.rows, 0)
    im_mod, coords = _image_module(x, i, basis)
    mods[i - 1] = im_mod
    if basis.cols:
        diffs[i] = coords
    w = GComplex(x.group, x.ring, mods, diffs)
    comps = {n: Matrix.identity(x.ring, x.rank(n))
             for n in range(i, hi + 1) if x.rank(n)}
    if basis.cols:
        comps[i - 1] = basis
    return w, ComplexMap(w, x, comps)


def _image_module(x: GComplex, n: int, basis: Matrix):
    """Image of d_n as an abstract free module plus the coordinate map."""
    tgt = x.module(n - 1)
    if basis.cols == 0:
        return GModule.trivial(x.group, x.ring, 0), \
            Matrix.zero(x.ring, 0, x.rank(n))
    acts = []
    for g in x.group.elements():
        moved = tgt.action[g] * basis
        acts.append(solve_field(basis, moved) if x.ring.is_field
                    else solve_integer(basis, moved))
    mod = GModule(x.group, x.ring, basis.cols, acts, _trusted=True)
    d = x.diff(n)
    coords = solve_field(basis, d) if x.ring.is_field else solve_integer(basis, d)
    return mod, coords


def window(x: GComplex, i: int, j: int) -> tuple[GComplex, ComplexMap, ComplexMap]:
    """Both-sided good truncation onto homology degrees [i, j].

    Returns (w, from_above, into_upper): from_above is the projection
    tau_le(x) construction applied first, so w = tau_ge_i(tau_le_j(x)),
    from_above the map x -> tau_le_j(x) and into_upper the inclusion
    w -> tau_le_j(x).
    """
    if i > j:
        raise BadWindow(f"window [{i}, {j}] is empty")
    upper, proj = truncate_above_im(x, j)
    w, incl = truncate_below_im(upper, i)
    return w, proj, incl


def nested_window_inclusion(y: GComplex, i_small: int, i_big: int) -> ComplexMap:
    """Inclusion tau_ge_{i_big}(y) -> tau_ge_{i_small}(y) for i_small <= i_big.

    Both truncations are of the same complex; the map is the identity on
    shared degrees and the image-lattice inclusion at the bottom edge.
    """
    if i_small > i_big:
        raise BadWindow("nested inclusion needs i_small <= i_big")
    z_big, into_big = truncate_below_im(y, i_big)
    z_small, _ = truncate_below_im(y, i_small)
    if i_small == i_big:
        return ComplexMap(z_big, z_small,
                          {n: Matrix.identity(y.ring, z_big.rank(n))
                           for n in z_big.modules if z_big.rank(n)})
    comps = {}
    for n in range(z_big.lo, z_big.hi + 1):
        if z_big.rank(n) == 0:
            continue
        if n >= i_big:
            comps[n] = Matrix.identity(y.ring, y.rank(n))
        else:
            # bottom edge: image basis included into the full module,
            # which the wider truncation keeps whole since n >= i_small
            comps[n] = into_big.comp(n)
    return ComplexMap(z_big, z_small, comps)
