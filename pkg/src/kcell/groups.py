"""Finite groups by multiplication table and their exact-matrix modules.

Groups are stored as full multiplication tables (index 0 is the
identity) and validated exhaustively; this caps the scale at a few
dozen elements, which is the intended regime.  A GModule is a free
module of finite rank over the coefficient ring with one invertible
action matrix per group element.  Finitely generated Z-modules with
group action that are not free (they arise as homology) are carried as
PresentedGModule: generators, integer relation columns and an action
well defined modulo the relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (BadAction, BadSubgroup, CoefficientMismatch, NotAGroup,
                     NotNilpotentGroup, UnsupportedRing)
from .linalg import (Matrix, Ring, ZZ, hermite_column_form, cokernel_group,
                     FgAbelianGroup, echelonize, kernel_basis, lattice_contains,
                     rank_rational, smith_normal_form, solve_field,
                     solve_integer, span_basis)


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FiniteGroup:
    """Finite group given by its full multiplication table."""

    __slots__ = ("table", "order", "label", "_inv", "_orders")

    def __init__(self, table, label: str | None = None):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        for row in table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise NotAGroup("table is not square over the element range")
        for i in range(n):
            if table[0][i] != i or table[i][0] != i:
                raise NotAGroup("element 0 is not a two-sided identity")
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if table[i][j] == 0:
                    inv[i] = j
        if any(v is None for v in inv):
            raise NotAGroup("some element has no inverse")
        for i in range(n):
            for j in range(n):
                tij = table[i][j]
                for k in range(n):
                    if table[tij][k] != table[i][table[j][k]]:
                        raise NotAGroup(f"associativity fails at ({i},{j},{k})")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "order", n)
        object.__setattr__(self, "label", label or f"group of order {n}")
        object.__setattr__(self, "_inv", tuple(inv))
        orders = []
        for g in range(n):
            k, x = 1, g
            while x != 0:
                x = table[x][g]
                k += 1
            orders.append(k)
        object.__setattr__(self, "_orders", tuple(orders))

    def __setattr__(self, *a):
        raise AttributeError("FiniteGroup is immutable")

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def element_order(self, g: int) -> int:
        return self._orders[g]

    def elements(self) -> range:
        return range(self.order)

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.order) for j in range(i))

    def exponent_of(self, p: int) -> int:
        e, n = 0, self.order
        while n % p == 0:
            e, n = e + 1, n // p
        return e

    def is_p_group(self, p: int) -> bool:
        return p ** self.exponent_of(p) == self.order

    @staticmethod
    def cyclic(m: int) -> "FiniteGroup":
        return FiniteGroup([[(i + j) % m for j in range(m)] for i in range(m)],
                           label=f"C{m}")

    @staticmethod
    def product(*groups: "FiniteGroup") -> "FiniteGroup":
        if not groups:
            return FiniteGroup.cyclic(1)
        if len(groups) == 1:
            return groups[0]
        a, b = groups[0], FiniteGroup.product(*groups[1:])
        nb = b.order
        n = a.order * nb

        def mul(x, y):
            return a.mul(x // nb, y // nb) * nb + b.mul(x % nb, y % nb)

        return FiniteGroup([[mul(x, y) for y in range(n)] for x in range(n)],
                           label=f"{a.label} x {b.label}")

    @staticmethod
    def symmetric(n: int) -> "FiniteGroup":
        """Symmetric group on n letters, identity first then lexicographic."""
        perms = sorted(itertools.permutations(range(n)))
        assert perms[0] == tuple(range(n))
        index = {p: i for i, p in enumerate(perms)}

        def compose(p, q):
            return tuple(p[q[i]] for i in range(n))

        return FiniteGroup([[index[compose(p, q)] for q in perms] for p in perms],
                           label=f"S{n}")

    def closure(self, gens) -> tuple[int, ...]:
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def generating_set(self) -> tuple[int, ...]:
        gens: list[int] = []
        have = {0}
        for g in range(1, self.order):
            if g not in have:
                gens.append(g)
                have = set(self.closure(gens))
        return tuple(gens)

    def is_subgroup(self, elements) -> bool:
        s = set(elements)
        if 0 not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)

    def is_normal(self, elements) -> bool:
        s = set(elements)
        return all(self.mul(self.mul(g, h), self.inv(g)) in s
                   for g in range(self.order) for h in s)

    def subgroups(self) -> list[tuple[int, ...]]:
        """All subgroups, found by closing generator sets breadth first."""
        found = {(0,)}
        frontier = [(0,)]
        while frontier:
            nxt = []
            for sub in frontier:
                inside = set(sub)
                for g in range(1, self.order):
                    if g in inside:
                        continue
                    bigger = self.closure(list(sub) + [g])
                    if bigger not in found:
                        found.add(bigger)
                        nxt.append(bigger)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), s))

    def subgroup_as_group(self, elements) -> tuple["FiniteGroup", tuple[int, ...]]:
        """The subgroup as a standalone group plus its embedding list."""
        elements = tuple(sorted(elements))
        if not self.is_subgroup(elements):
            raise BadSubgroup(f"{elements} is not a subgroup")
        pos = {g: i for i, g in enumerate(elements)}
        table = [[pos[self.mul(a, b)] for b in elements] for a in elements]
        return FiniteGroup(table, label=f"subgroup of {self.label}"), elements

    def quotient_by(self, elements) -> tuple["FiniteGroup", "GroupHom", tuple[int, ...]]:
        """Quotient by a normal subgroup; returns (Q, projection, section).

        Coset representatives are the minimal elements, and the section
        lists the representative for each quotient element.
        """
        if not self.is_subgroup(elements) or not self.is_normal(elements):
            raise BadSubgroup("quotient needs a normal subgroup")
        sub = set(elements)
        coset_of = {}
        reps = []
        for g in range(self.order):
            if g in coset_of:
                continue
            members = sorted(self.mul(g, h) for h in sub)
            rep = members[0]
            reps.append(rep)
            for x in members:
                coset_of[x] = rep
        reps.sort()
        assert reps[0] == 0
        idx = {r: i for i, r in enumerate(reps)}
        table = [[idx[coset_of[self.mul(a, b)]] for b in reps] for a in reps]
        q = FiniteGroup(table, label=f"{self.label} mod subgroup of order {len(sub)}")
        hom = GroupHom(self, q, tuple(idx[coset_of[g]] for g in range(self.order)))
        return q, hom, tuple(reps)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.label}, order {self.order})"


@dataclass(frozen=True)
class GroupHom:
    """Group homomorphism as an element mapping, validated on all pairs."""

    source: FiniteGroup
    target: FiniteGroup
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.order:
            raise BadAction("mapping length mismatch")
        if self.mapping[0] != 0:
            raise BadAction("homomorphism must send identity to identity")
        for a in range(self.source.order):
            for b in range(self.source.order):
                if self.mapping[self.source.mul(a, b)] != \
                        self.target.mul(self.mapping[a], self.mapping[b]):
                    raise BadAction(f"not multiplicative at ({a},{b})")

    def __call__(self, g: int) -> int:
        return self.mapping[g]

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target != self.source:
            raise BadAction("composition mismatch")
        return GroupHom(other.source, self.target,
                        tuple(self.mapping[x] for x in other.mapping))

    def kernel(self) -> tuple[int, ...]:
        return tuple(g for g in self.source.elements() if self.mapping[g] == 0)

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.order


def make_group(spec) -> FiniteGroup:
    """Build a validated group from a short spec.

    Accepts a FiniteGroup (returned unchanged), a raw multiplication
    table as a list of rows, a dict with a "table" entry and optional
    "label", or a string "cyclic:m", "symmetric:n", "product:a,b,..."
    whose parts are themselves string specs.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        if "table" not in spec:
            raise NotAGroup("group dict needs a 'table' entry")
        table = [list(row) for row in spec["table"]]
        return FiniteGroup(table, label=spec.get("label"))
    if isinstance(spec, (list, tuple)):
        return FiniteGroup([list(row) for row in spec])
    if not isinstance(spec, str):
        raise NotAGroup(f"cannot build a group from {type(spec).__name__}")
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise NotAGroup(f"group spec {spec!r} has no ':' separator")
    if kind == "cyclic":
        try:
            m = int(arg)
        except ValueError:
            raise NotAGroup(f"cyclic order {arg!r} is not an integer") from None
        if m < 1:
            raise NotAGroup("cyclic order must be positive")
        return FiniteGroup.cyclic(m)
    if kind == "symmetric":
        try:
            n = int(arg)
        except ValueError:
            raise NotAGroup(f"symmetric degree {arg!r} is not an integer") from None
        if not 1 <= n <= 5:
            raise NotAGroup("symmetric degree out of the desk-scale range 1..5")
        return FiniteGroup.symmetric(n)
    if kind == "product":
        parts = [p.strip() for p in arg.split(",") if p.strip()]
        if not parts:
            raise NotAGroup("empty product spec")
        return FiniteGroup.product(*[make_group(p) for p in parts])
    raise NotAGroup(f"unknown group spec kind {kind!r}")


@dataclass(frozen=True)
class SylowSplit:
    """Internal direct product decomposition N = P x H at a prime.

    p_elements carries the (unique, normal) Sylow p-subgroup, h_elements
    the elements of order prime to p.  The defining bijection
    P x H -> N, (a, b) -> ab is validated together with elementwise
    commutation, so the split really is a direct product.
    """

    group: FiniteGroup
    p: int
    p_elements: tuple[int, ...]
    h_elements: tuple[int, ...]


def is_nilpotent_group(g: FiniteGroup) -> bool:
    """Every Sylow subgroup normal, checked by exhausting element orders."""
    for q in prime_factors(g.order):
        part = [x for x in g.elements()
                if set(prime_factors(g.element_order(x))) <= {q}]
        if len(part) != q ** g.exponent_of(q) or not g.is_subgroup(part):
            return False
    return True


def sylow_decomposition(g: FiniteGroup, p: int) -> SylowSplit:
    """Split a nilpotent group as (Sylow p) x (prime-to-p part)."""
    if g.order % p:
        p_part = (0,)
    else:
        p_part = tuple(sorted(x for x in g.elements()
                              if set(prime_factors(g.element_order(x))) <= {p}))
    h_part = tuple(sorted(x for x in g.elements() if g.element_order(x) % p))
    if len(p_part) != p ** g.exponent_of(p) or not g.is_subgroup(p_part):
        raise NotNilpotentGroup(f"elements of {p}-power order do not form a subgroup")
    if len(h_part) * len(p_part) != g.order or not g.is_subgroup(h_part):
        raise NotNilpotentGroup("prime-to-p elements do not form a subgroup")
    for a in p_part:
        for b in h_part:
            if g.mul(a, b) != g.mul(b, a):
                raise NotNilpotentGroup("Sylow parts do not commute elementwise")
    products = {g.mul(a, b) for a in p_part for b in h_part}
    if len(products) != g.order:
        raise NotNilpotentGroup("product map P x H -> N is not a bijection")
    return SylowSplit(g, p, p_part, h_part)


class GModule:
    """Free module over the coefficient ring with a group action.

    action[g] is the matrix of g; action[0] must be the identity and the
    assignment must be multiplicative, which also forces invertibility.
    Construction validates this unless the module was produced by a
    structurally safe constructor (free modules, permutation modules).
    """

    __slots__ = ("group", "ring", "rank", "action", "_hash")

    def __init__(self, group: FiniteGroup, ring: Ring, rank: int, action,
                 _trusted: bool = False):
        action = tuple(action)
        if len(action) != group.order:
            raise BadAction("need one matrix per group element")
        for mat in action:
            if mat.ring != ring:
                raise CoefficientMismatch("action matrix over the wrong ring")
            if mat.rows != rank or mat.cols != rank:
                raise BadAction("action matrix has the wrong shape")
        if not _trusted:
            if action[0] != Matrix.identity(ring, rank):
                raise BadAction("identity element must act as the identity matrix")
            for a in group.elements():
                for b in group.elements():
                    if action[a] * action[b] != action[group.mul(a, b)]:
                        raise BadAction(f"action not multiplicative at ({a},{b})")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("GModule is immutable")

    @staticmethod
    def trivial(group: FiniteGroup, ring: Ring, rank: int = 1) -> "GModule":
        ident = Matrix.identity(ring, rank)
        return GModule(group, ring, rank, [ident] * group.order, _trusted=True)

    @staticmethod
    def regular(group: FiniteGroup, ring: Ring) -> "GModule":
        """Group algebra as a left module over itself: g . e_h = e_{gh}."""
        n = group.order
        mats = []
        for g in group.elements():
            rows = [[0] * n for _ in range(n)]
            for h in range(n):
                rows[group.mul(g, h)][h] = 1
            mats.append(Matrix(ring, rows, cols=n))
        return GModule(group, ring, n, mats, _trusted=True)

    @staticmethod
    def free(group: FiniteGroup, ring: Ring, copies: int) -> "GModule":
        reg = GModule.regular(group, ring)
        if copies == 1:
            return reg
        return direct_sum_modules([reg] * copies) if copies else \
            GModule.trivial(group, ring, 0)

    @staticmethod
    def permutation(group: FiniteGroup, ring: Ring, perms) -> "GModule":
        """Module on a finite G-set; perms[g] sends point i to perms[g][i]."""
        perms = tuple(tuple(p) for p in perms)
        npts = len(perms[0]) if perms else 0
        if len(perms) != group.order:
            raise BadAction("need one permutation per group element")
        if perms[0] != tuple(range(npts)):
            raise BadAction("identity must act trivially on the set")
        for a in group.elements():
            for b in group.elements():
                comp = tuple(perms[a][perms[b][i]] for i in range(npts))
                if comp != perms[group.mul(a, b)]:
                    raise BadAction("set action is not multiplicative")
        mats = []
        for g in group.elements():
            rows = [[0] * npts for _ in range(npts)]
            for i in range(npts):
                rows[perms[g][i]][i] = 1
            mats.append(Matrix(ring, rows, cols=npts))
        return GModule(group, ring, npts, mats, _trusted=True)

    @staticmethod
    def from_generator_matrix(group: FiniteGroup, ring: Ring, gen: int,
                              mat: Matrix) -> "GModule":
        """Module over a cyclic-in-practice group defined by one matrix.

        Powers of gen must exhaust the group; the action of gen^k is
        mat^k, and the usual validation then runs in full.
        """
        power = {0: Matrix.identity(ring, mat.rows)}
        x, acc = gen, mat
        while x != 0:
            power[x] = acc
            x = group.mul(x, gen)
            acc = acc * mat
        if len(power) != group.order:
            raise BadAction("generator does not generate the group")
        return GModule(group, ring, mat.rows, [power[g] for g in group.elements()])

    def pullback(self, hom: GroupHom) -> "GModule":
        """Restrict along a homomorphism into this module's group."""
        if hom.target != self.group:
            raise BadAction("pullback along a map into a different group")
        return GModule(hom.source, self.ring, self.rank,
                       [self.action[hom(g)] for g in hom.source.elements()],
                       _trusted=True)

    def restrict_to_subgroup(self, elements) -> tuple["GModule", FiniteGroup]:
        sub, emb = self.group.subgroup_as_group(elements)
        mod = GModule(sub, self.ring, self.rank,
                      [self.action[g] for g in emb], _trusted=True)
        return mod, sub

    def dual(self) -> "GModule":
        return GModule(self.group, self.ring, self.rank,
                       [self.action[self.group.inv(g)].transpose()
                        for g in self.group.elements()], _trusted=True)

    def conjugate(self, basis: Matrix, basis_inv: Matrix | None = None) -> "GModule":
        """Same module in a new basis: action becomes B^-1 rho B."""
        if basis_inv is None:
            if self.ring.is_field:
                from .linalg import inverse_field
                basis_inv = inverse_field(basis)
            else:
                basis_inv = solve_integer(basis, Matrix.identity(ZZ, basis.rows))
        return GModule(self.group, self.ring, self.rank,
                       [basis_inv * m * basis for m in self.action], _trusted=True)

    def key(self):
        return (self.group.table, self.ring, self.rank,
                tuple(m.data for m in self.action))

    def __eq__(self, other):
        return isinstance(other, GModule) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.key()))
        return self._hash

    def __repr__(self):
        return f"GModule({self.group.label}, {self.ring}, rank {self.rank})"


def direct_sum_modules(mods: list[GModule]) -> GModule:
    if not mods:
        raise ValueError("empty direct sum needs an explicit group and ring")
    group, ring = mods[0].group, mods[0].ring
    for m in mods:
        if m.group != group or m.ring != ring:
            raise CoefficientMismatch("direct sum over mixed groups or rings")
    rank = sum(m.rank for m in mods)
    mats = []
    for g in group.elements():
        rows = [[0] * rank for _ in range(rank)]
        off = 0
        for m in mods:
            blk = m.action[g]
            for i in range(m.rank):
                for j in range(m.rank):
                    rows[off + i][off + j] = blk.data[i][j]
            off += m.rank
        mats.append(Matrix(ring, rows, cols=rank))
    return GModule(group, ring, rank, mats, _trusted=True)


@dataclass(frozen=True)
class GModuleMap:
    """Equivariant map of GModules over one group and ring."""

    source: GModule
    target: GModule
    matrix: Matrix

    def __post_init__(self):
        if self.source.group != self.target.group:
            raise BadAction("map between modules over different groups")
        if self.source.ring != self.target.ring:
            raise CoefficientMismatch("map between modules over different rings")
        if (self.matrix.rows, self.matrix.cols) != (self.target.rank, self.source.rank):
            raise BadAction("matrix shape does not match module ranks")
        for g in self.source.group.generating_set():
            if self.matrix * self.source.action[g] != self.target.action[g] * self.matrix:
                raise BadAction(f"map is not equivariant at generator {g}")

    def compose(self, other: "GModuleMap") -> "GModuleMap":
        if other.target is not self.source and other.target != self.source:
            raise BadAction("composition mismatch")
        return GModuleMap(other.source, self.target, self.matrix * other.matrix)

    def is_iso(self) -> bool:
        if self.source.rank != self.target.rank:
            return False
        ring = self.matrix.ring
        if ring.is_field:
            return echelonize(self.matrix).rank == self.source.rank
        if ring.is_integers:
            from .linalg import det
            return abs(det(self.matrix)) == 1
        raise UnsupportedRing("is_iso over this ring")


def induce_module(m: GModule, big: FiniteGroup, embedding) -> GModule:
    """Induction along a subgroup embedding: big group algebra tensor m.

    Basis is (coset representative, module basis vector); representatives
    are the minimal elements of the left cosets, in increasing order.
    """
    emb = tuple(embedding)
    sub_index = {g: i for i, g in enumerate(emb)}
    seen, reps = set(), []
    for g in big.elements():
        if g in seen:
            continue
        coset = sorted(big.mul(g, h) for h in emb)
        reps.append(coset[0])
        seen.update(coset)
    reps.sort()
    rep_index = {r: i for i, r in enumerate(reps)}
    d, nreps = m.rank, len(reps)
    rank = d * nreps
    mats = []
    for g in big.elements():
        rows = [[0] * rank for _ in range(rank)]
        for i, t in enumerate(reps):
            gt = big.mul(g, t)
            coset = sorted(big.mul(gt, h) for h in emb)
            t2 = coset[0]
            i2 = rep_index[t2]
            h = big.mul(big.inv(t2), gt)
            blk = m.action[sub_index[h]]
            for r in range(d):
                for c in range(d):
                    rows[i2 * d + r][i * d + c] = blk.data[r][c]
        mats.append(Matrix(m.ring, rows, cols=rank))
    return GModule(big, m.ring, rank, mats, _trusted=True)


def fixed_points(m: GModule, elements) -> tuple[GModule, Matrix]:
    """Fixed points under a normal subgroup, with the residual action.

    Returns (fixed module over the full group, inclusion matrix whose
    columns are the fixed basis).  Over Z the basis spans the saturated
    fixed lattice, so the residual action is integral.
    """
    group = m.group
    if not group.is_normal(elements):
        raise BadSubgroup("fixed points need a normal subgroup to keep the action")
    stack = None
    ident = Matrix.identity(m.ring, m.rank)
    for g in sorted(set(elements) - {0}):
        block = m.action[g] - ident
        stack = block if stack is None else stack.vstack(block)
    if stack is None:
        return m, ident
    basis = kernel_basis(stack)
    if basis.cols == 0:
        zero = GModule.trivial(group, m.ring, 0)
        return zero, Matrix.zero(m.ring, m.rank, 0)
    acts = []
    for g in group.elements():
        moved = m.action[g] * basis
        if m.ring.is_field:
            acts.append(solve_field(basis, moved))
        elif m.ring.is_integers:
            acts.append(solve_integer(basis, moved))
        else:
            raise UnsupportedRing("fixed points over Z/m with m composite")
    fixed = GModule(group, m.ring, basis.cols, acts, _trusted=True)
    return fixed, basis


def norm_matrix(m: GModule, elements) -> Matrix:
    total = Matrix.zero(m.ring, m.rank, m.rank)
    for g in elements:
        total = total + m.action[g]
    return total


def coinvariant_relations(m: GModule, elements) -> Matrix:
    """Columns spanning the sub generated by (g - 1)v for g in the subgroup."""
    ident = Matrix.identity(m.ring, m.rank)
    blocks = [m.action[g] - ident for g in sorted(set(elements) - {0})]
    if not blocks:
        return Matrix.zero(m.ring, m.rank, 0)
    stacked = blocks[0]
    for b in blocks[1:]:
        stacked = stacked.hstack(b)
    return stacked


def hom_space_basis(m: GModule, n: GModule) -> list[Matrix]:
    """Basis of the space of equivariant maps m -> n over a field."""
    if m.group != n.group or m.ring != n.ring:
        raise CoefficientMismatch("hom space over mixed groups or rings")
    ring = m.ring
    if not ring.is_field:
        raise UnsupportedRing("hom_space_basis needs a field")
    dm, dn = m.rank, n.rank
    if dm == 0 or dn == 0:
        return []
    rows = []
    for g in m.group.generating_set():
        a, b = m.action[g], n.action[g]
        # constraint T a - b T = 0, flattening T row-major
        for i in range(dn):
            for j in range(dm):
                row = [0] * (dn * dm)
                for k in range(dm):
                    row[i * dm + k] += a.data[k][j]
                for k in range(dn):
                    row[k * dm + j] -= b.data[i][k]
                rows.append(row)
    if not rows:
        rows = [[0] * (dn * dm)]
    system = Matrix(ring, rows, cols=dn * dm)
    kb = echelonize(system).kernel
    out = []
    for c in range(kb.cols):
        flat = kb.column(c)
        out.append(Matrix(ring, [[flat[i * dm + j] for j in range(dm)]
                                 for i in range(dn)], cols=dm))
    return out


@dataclass(frozen=True)
class NilpotencyReport:
    nilpotent: bool
    nclass: int | None
    filtration: tuple[Matrix, ...]


def _augmentation_image(m: GModule, basis: Matrix) -> Matrix:
    """Columns spanning I.N for N the plain span of the given columns.

    All non-identity elements are used: the span of (g - 1)N over
    generators alone need not be G-stable, while over all g it equals
    the module I.N on the nose.
    """
    ident = Matrix.identity(m.ring, m.rank)
    pieces = [(m.action[g] - ident) * basis
              for g in range(1, m.group.order)]
    stacked = pieces[0]
    for p in pieces[1:]:
        stacked = stacked.hstack(p)
    return stacked


def _zmod_span(mat: Matrix) -> Matrix:
    """Canonical form for a submodule of (Z/m)^d given by generator columns."""
    m = mat.ring.modulus
    lift = Matrix(ZZ, mat.data, cols=mat.cols)
    full = lift.hstack(Matrix.identity(ZZ, mat.rows).scale(m))
    return hermite_column_form(full)


def is_nilpotent_module(mod) -> NilpotencyReport:
    """Chain test: iterate M, IM, I^2 M, ... for the augmentation ideal I.

    Over a field or Z/m the chain lives in a finite lattice of
    submodules, so repetition certifies failure.  Over Z the rational
    span of the chain is monitored instead: once the span stops
    shrinking while staying nonzero the chain can never reach zero.
    PresentedGModule inputs split into torsion and free quotient first.
    """
    if isinstance(mod, PresentedGModule):
        return _is_nilpotent_presented(mod)
    m: GModule = mod
    if m.rank == 0:
        return NilpotencyReport(True, 0, (Matrix.zero(m.ring, 0, 0),))
    if m.group.order == 1:
        return NilpotencyReport(True, 1, (Matrix.identity(m.ring, m.rank),))
    basis = Matrix.identity(m.ring, m.rank)
    filtration = [basis]
    if m.ring.is_field:
        while True:
            nxt = span_basis(_augmentation_image(m, basis))
            filtration.append(nxt)
            if nxt.cols == 0:
                return NilpotencyReport(True, len(filtration) - 1, tuple(filtration))
            if nxt.cols == basis.cols:
                return NilpotencyReport(False, None, tuple(filtration))
            basis = nxt
    if m.ring.is_integers:
        while True:
            nxt = hermite_column_form(_augmentation_image(m, basis))
            filtration.append(nxt)
            if nxt.cols == 0:
                return NilpotencyReport(True, len(filtration) - 1, tuple(filtration))
            if rank_rational(nxt) == rank_rational(basis):
                return NilpotencyReport(False, None, tuple(filtration))
            basis = nxt
    # Z/m: finitely many submodules, stop on repetition
    current = _zmod_span(Matrix.identity(m.ring, m.rank))
    zero_form = hermite_column_form(Matrix.identity(ZZ, m.rank).scale(m.ring.modulus))
    basis = Matrix.identity(m.ring, m.rank)
    while True:
        nxt_gens = _augmentation_image(m, basis)
        nxt = _zmod_span(nxt_gens)
        filtration.append(nxt_gens)
        if nxt == zero_form:
            return NilpotencyReport(True, len(filtration) - 1, tuple(filtration))
        if nxt == current:
            return NilpotencyReport(False, None, tuple(filtration))
        current = nxt
        red = [[x % m.ring.modulus for x in row] for row in nxt.data]
        keep = [j for j in range(nxt.cols) if any(red[i][j] for i in range(m.rank))]
        basis = Matrix.from_columns(m.ring, [[red[i][j] for i in range(m.rank)]
                                             for j in keep], m.rank)


class PresentedGModule:
    """Finitely generated Z-module with group action, by presentation.

    The module is Z^ngens modulo the column lattice of relations; each
    action matrix acts on generator coordinates and must preserve the
    relation lattice.  These arise as integral homology of equivariant
    complexes, where freeness fails.
    """

    __slots__ = ("group", "ngens", "relations", "action")

    def __init__(self, group: FiniteGroup, ngens: int, relations: Matrix, action):
        action = tuple(action)
        if relations.ring != ZZ or relations.rows != ngens:
            raise BadAction("relations must be integer columns on the generators")
        rel_lat = hermite_column_form(relations)
        for g, mat in zip(group.elements(), action):
            if (mat.rows, mat.cols) != (ngens, ngens):
                raise BadAction("action matrix shape mismatch")
            for j in range(relations.cols):
                if not _in_lattice_or_zero(rel_lat, mat.apply(relations.column(j)), ngens):
                    raise BadAction(f"action of {g} does not preserve relations")
        # multiplicativity on (generator, anything) pairs propagates to all
        # pairs by induction on word length, since the relation lattice is
        # stable under both left action and right matrix multiplication
        for a in group.generating_set():
            for b in group.elements():
                diff = action[a] * action[b] - action[group.mul(a, b)]
                for j in range(ngens):
                    if not _in_lattice_or_zero(rel_lat, diff.column(j), ngens):
                        raise BadAction("action not multiplicative modulo relations")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "ngens", ngens)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "action", action)

    def __setattr__(self, *a):
        raise AttributeError("PresentedGModule is immutable")

    def canonical_group(self) -> FgAbelianGroup:
        return cokernel_group(self.ngens, self.relations)

    def is_zero(self) -> bool:
        return self.canonical_group().is_trivial

    def reduce(self) -> "PresentedGModule":
        """Diagonalize the relations and drop unit-factor generators."""
        if self.relations.cols == 0:
            return self
        sf = smith_normal_form(self.relations)
        uinv = solve_integer(sf.u, Matrix.identity(ZZ, self.ngens))
        keep = [i for i in range(self.ngens)
                if i >= len(sf.factors) or sf.factors[i] != 1]
        new_rel_cols = []
        for i, d in enumerate(sf.factors):
            if d != 1:
                col = [0] * len(keep)
                col[keep.index(i)] = d
                new_rel_cols.append(col)
        new_rel = Matrix.from_columns(ZZ, new_rel_cols, len(keep))
        new_action = []
        for mat in self.action:
            conj = sf.u * mat * uinv
            new_action.append(conj.submatrix(keep, keep))
        return PresentedGModule(self.group, len(keep), new_rel, new_action)

    def __repr__(self):
        return f"PresentedGModule({self.group.label}, {self.canonical_group()})"


def _in_lattice_or_zero(lat: Matrix, vec, dim: int) -> bool:
    if not any(vec):
        return True
    if lat.cols == 0:
        return False
    return lattice_contains(lat, vec)


def _is_nilpotent_presented(m: PresentedGModule) -> NilpotencyReport:
    """Free quotient by the rational span rule, then an honest lattice chain.

    The chain L_0 = Z^g, L_{k+1} = R + I.L_k (R the relation lattice)
    computes the preimages of I^k M.  Once the free quotient is known
    nilpotent every L_k with k large lies between R and its saturation,
    a finite set of lattices, so the chain either reaches R (nilpotent,
    class = k) or repeats strictly above it (not nilpotent).
    """
    red = m.reduce()
    n = red.ngens
    if n == 0 or red.group.order == 1:
        return NilpotencyReport(True, min(n, 1), ())
    rel = red.relations
    if rel.cols == 0:
        free_mod = GModule(red.group, ZZ, n, red.action, _trusted=True)
        return is_nilpotent_module(free_mod)
    sf = smith_normal_form(rel)
    tors_count = len(sf.factors)
    free_idx = list(range(tors_count, n))
    if free_idx:
        free_action = [mat.submatrix(free_idx, free_idx) for mat in red.action]
        free_mod = GModule(red.group, ZZ, len(free_idx), free_action, _trusted=True)
        if not is_nilpotent_module(free_mod).nilpotent:
            return NilpotencyReport(False, None, ())
    ident = Matrix.identity(ZZ, n)
    rel_lat = hermite_column_form(rel)
    chain = [hermite_column_form(ident)]
    basis = ident
    step = 0
    while True:
        pieces = [(red.action[g] - ident) * basis
                  for g in range(1, red.group.order)]
        stacked = pieces[0]
        for p in pieces[1:]:
            stacked = stacked.hstack(p)
        lat = hermite_column_form(stacked.hstack(rel))
        step += 1
        chain.append(lat)
        if lat == rel_lat:
            return NilpotencyReport(True, step, tuple(chain))
        if lat == basis:
            return NilpotencyReport(False, None, tuple(chain))
        basis = lat
