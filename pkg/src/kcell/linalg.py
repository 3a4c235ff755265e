"""Exact dense linear algebra over prime fields, the integers, and Z/m.

Everything is a dense matrix of Python ints tagged with a coefficient ring.
Over a prime field the workhorse is a deterministic reduced row echelon
form (leftmost pivot column, lowest row index); over the integers it is
the Smith normal form with unimodular transforms on both sides.  All
decompositions are exact and reproducible: no floats, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from .errors import CoefficientMismatch, NotAComplex, UnsupportedRing


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: the integers (modulus None) or Z/modulus."""

    modulus: int | None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {self.modulus}")

    @property
    def is_integers(self) -> bool:
        return self.modulus is None

    @property
    def is_field(self) -> bool:
        return self.modulus is not None and _is_prime(self.modulus)

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    def reduce(self, a: int) -> int:
        return a if self.modulus is None else a % self.modulus

    def invert(self, a: int) -> int:
        if self.modulus is None:
            if a in (1, -1):
                return a
            raise ValueError(f"{a} is not a unit in Z")
        a %= self.modulus
        g = gcd(a, self.modulus)
        if g != 1:
            raise ValueError(f"{a} is not a unit mod {self.modulus}")
        return pow(a, -1, self.modulus)

    def __str__(self) -> str:
        if self.modulus is None:
            return "Z"
        if self.is_field:
            return f"F{self.modulus}"
        return f"Z/{self.modulus}"


ZZ = Ring(None)


def Fp(p: int) -> Ring:
    """The prime field with p elements; p is validated."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Ring(p)


def Zmod(m: int) -> Ring:
    return Ring(m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class Matrix:
    """Immutable dense matrix over a Ring.

    Entries are stored as a tuple of row tuples and are always reduced
    into canonical residues for a modular ring.
    """

    __slots__ = ("ring", "rows", "cols", "data", "_hash")

    def __init__(self, ring: Ring, data, cols: int | None = None):
        rows = tuple(tuple(ring.reduce(int(a)) for a in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        else:
            width = 0 if cols is None else cols
        if cols is not None and rows and cols != width:
            raise ValueError("explicit cols disagrees with row width")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def zero(ring: Ring, rows: int, cols: int) -> "Matrix":
        return Matrix(ring, [[0] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def identity(ring: Ring, n: int) -> "Matrix":
        return Matrix(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def from_columns(ring: Ring, columns, rows: int) -> "Matrix":
        columns = list(columns)
        return Matrix(ring, [[col[i] for col in columns] for i in range(rows)],
                      cols=len(columns))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, list(zip(*self.data)) if self.data else [], cols=self.rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return Matrix(self.ring, [a + b for a, b in zip(self.data, other.data)],
                      cols=self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.cols != other.cols:
            raise ValueError("column count mismatch in vstack")
        return Matrix(self.ring, self.data + other.data, cols=self.cols)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        row_idx, col_idx = list(row_idx), list(col_idx)
        return Matrix(self.ring, [[self.data[i][j] for j in col_idx] for i in row_idx],
                      cols=len(col_idx))

    def _check_ring(self, other: "Matrix"):
        if self.ring != other.ring:
            raise CoefficientMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.ring,
                      [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
                      cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, [[-a for a in row] for row in self.data], cols=self.cols)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.ring, [[c * a for a in row] for row in self.data], cols=self.cols)

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check_ring(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        ot = list(zip(*other.data)) if other.data else []
        red = self.ring.reduce
        out = []
        for row in self.data:
            out.append([red(sum(a * b for a, b in zip(row, col))) for col in ot]
                       if ot else [0] * other.cols)
        return Matrix(self.ring, out, cols=other.cols)

    def apply(self, vec) -> tuple[int, ...]:
        """Matrix times column vector, returned as a tuple."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        red = self.ring.reduce
        return tuple(red(sum(a * b for a, b in zip(row, vec))) for row in self.data)

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for row in self.data for a in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.ring, self.cols, self.data)))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols})"

    def entries(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class EchelonForm:
    """Reduced row echelon form over a field with derived bases.

    kernel columns form a basis of the null space (one per free column,
    in increasing column order); image columns are the pivot columns of
    the original matrix, so both bases are deterministic.
    """

    rank: int
    pivots: tuple[int, ...]
    rref: Matrix
    kernel: Matrix
    image: Matrix


def echelonize(a: Matrix) -> EchelonForm:
    """Deterministic RREF over a prime field.

    Pivot rule: scan columns left to right, take the lowest-index row
    with a nonzero entry at or below the working row.
    """
    ring = a.ring
    if not ring.is_field:
        raise UnsupportedRing(f"echelon form needs a field, got {ring}")
    p = ring.modulus
    work = [list(row) for row in a.data]
    pivots = []
    prow = 0
    for col in range(a.cols):
        sel = None
        for i in range(prow, a.rows):
            if work[i][col] % p:
                sel = i
                break
        if sel is None:
            continue
        work[prow], work[sel] = work[sel], work[prow]
        inv = pow(work[prow][col], -1, p)
        work[prow] = [(inv * x) % p for x in work[prow]]
        for i in range(a.rows):
            if i != prow and work[i][col]:
                c = work[i][col]
                work[i] = [(x - c * y) % p for x, y in zip(work[i], work[prow])]
        pivots.append(col)
        prow += 1
        if prow == a.rows:
            break
    rank = len(pivots)
    rref = Matrix(ring, work, cols=a.cols)
    free = [j for j in range(a.cols) if j not in pivots]
    kernel_cols = []
    for f in free:
        v = [0] * a.cols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-work[i][f]) % p
        kernel_cols.append(v)
    kernel = Matrix.from_columns(ring, kernel_cols, a.cols)
    image = Matrix.from_columns(ring, [a.column(j) for j in pivots], a.rows)
    return EchelonForm(rank, tuple(pivots), rref, kernel, image)


def solve_field(a: Matrix, b: Matrix) -> Matrix:
    """Solve a*x = b over a prime field; raises ValueError if inconsistent."""
    ring = a.ring
    if not ring.is_field:
        raise UnsupportedRing("solve_field needs a field")
    ech = echelonize(a.hstack(b))
    for piv in ech.pivots:
        if piv >= a.cols:
            raise ValueError("inconsistent linear system")
    x = [[0] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(ech.pivots):
        for j in range(b.cols):
            x[pc][j] = ech.rref.data[i][a.cols + j]
    return Matrix(ring, x, cols=b.cols)


def inverse_field(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ValueError("not square")
    return solve_field(a, Matrix.identity(a.ring, a.rows))


@dataclass(frozen=True)
class SmithForm:
    """u * a * v = s with u, v unimodular and s diagonal.

    The nonzero diagonal entries are the invariant factors: positive and
    each dividing the next.
    """

    u: Matrix
    s: Matrix
    v: Matrix
    factors: tuple[int, ...]


def smith_normal_form(a: Matrix) -> SmithForm:
    """Smith normal form over the integers with transform tracking.

    Pivot rule: globally smallest absolute value among nonzero entries
    of the working submatrix, re-selected after every clearing sweep,
    with balanced remainders.  Re-selection halves the pivot between
    sweeps, which keeps intermediate entries from compounding.  Row
    operations accumulate in u, column operations in v.
    """
    if not a.ring.is_integers:
        raise UnsupportedRing("smith_normal_form is an integer decomposition")
    m, n = a.rows, a.cols
    s = [list(row) for row in a.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, q):
        # row_i -= q * row_j
        s[i] = [x - q * y for x, y in zip(s[i], s[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):
        # col_i -= q * col_j
        for r in range(m):
            s[r][i] -= q * s[r][j]
        for r in range(n):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(m):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def balanced(x, p):
        # quotient leaving a remainder in (-p/2, p/2]; needs p > 0
        q, r = divmod(x, p)
        return q + 1 if 2 * r > p else q

    t = 0
    while t < min(m, n):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = s[i][j]
                    if x and (best is None or abs(x) < abs(s[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            if s[t][t] < 0:
                s[t] = [-x for x in s[t]]
                u[t] = [-x for x in u[t]]
            p = s[t][t]
            clean = True
            for i in range(t + 1, m):
                if s[i][t]:
                    row_op(i, t, balanced(s[i][t], p))
                    clean = clean and not s[i][t]
            for j in range(t + 1, n):
                if s[t][j]:
                    col_op(j, t, balanced(s[t][j], p))
                    clean = clean and not s[t][j]
            if not clean:
                continue
            # pivot must divide the rest of the submatrix; merging an
            # offending row leaves a sub-pivot remainder next sweep
            offender = next((i for i in range(t + 1, m)
                             if any(s[i][j] % p for j in range(t + 1, n))),
                            None)
            if offender is None:
                break
            row_op(t, offender, -1)
        t += 1
    factors = tuple(s[i][i] for i in range(min(m, n)) if s[i][i])
    return SmithForm(Matrix(ZZ, u, cols=m), Matrix(ZZ, s, cols=n),
                     Matrix(ZZ, v, cols=n), factors)


def kernel_basis(a: Matrix) -> Matrix:
    """Basis of the null space, columns of the result.

    Over a field this is the echelon kernel.  Over Z the basis spans the
    full (saturated) kernel lattice: it consists of the columns of the
    Smith transform v beyond the rank.
    """
    if a.ring.is_field:
        return echelonize(a).kernel
    if a.ring.is_integers:
        sf = smith_normal_form(a)
        rank = len(sf.factors)
        cols = [sf.v.column(j) for j in range(rank, a.cols)]
        return Matrix.from_columns(ZZ, cols, a.cols)
    # Z/m with m composite: lift x with a*x = 0 (mod m) to the integer
    # kernel of [a | m*I] and project, then reduce the generators mod m.
    m = a.ring.modulus
    lift = Matrix(ZZ, a.data, cols=a.cols)
    aug = lift.hstack(Matrix.identity(ZZ, a.rows).scale(m)) if a.rows else lift
    kb = kernel_basis(aug)
    proj = [kb.column(j)[: a.cols] for j in range(kb.cols)]
    basis = hermite_column_form(Matrix.from_columns(ZZ, proj, a.cols))
    red = [[x % m for x in row] for row in basis.data]
    keep = [j for j in range(basis.cols) if any(red[i][j] for i in range(a.cols))]
    return Matrix.from_columns(a.ring, [[red[i][j] for i in range(a.cols)] for j in keep],
                               a.cols)


def solve_integer(a: Matrix, b: Matrix) -> Matrix:
    """A particular integer solution x of a*x = b; ValueError if none exists."""
    if not a.ring.is_integers:
        raise UnsupportedRing("solve_integer works over Z")
    sf = smith_normal_form(a)
    ub = sf.u * b
    rank = len(sf.factors)
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        for j in range(b.cols):
            val = ub.data[i][j]
            if i < rank:
                d = sf.s.data[i][i]
                if val % d:
                    raise ValueError("no integer solution")
                y[i][j] = val // d
            elif val:
                raise ValueError("no integer solution")
    return sf.v * Matrix(ZZ, y, cols=b.cols)


def det(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination; exact over Z."""
    if a.rows != a.cols:
        raise ValueError("not square")
    n = a.rows
    if n == 0:
        return 1
    w = [list(row) for row in a.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if w[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if w[i][k]), None)
            if swap is None:
                return 0
            w[k], w[swap] = w[swap], w[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) // prev
            w[i][k] = 0
        prev = w[k][k]
    return a.ring.reduce(sign * w[n - 1][n - 1])


def rank_rational(a: Matrix) -> int:
    """Rank of an integer matrix over the rationals (fraction-free)."""
    w = [list(row) for row in a.data]
    m, n = a.rows, a.cols
    rank = 0
    row = 0
    for col in range(n):
        sel = next((i for i in range(row, m) if w[i][col]), None)
        if sel is None:
            continue
        w[row], w[sel] = w[sel], w[row]
        for i in range(row + 1, m):
            if w[i][col]:
                g = gcd(w[i][col], w[row][col])
                ci, cr = w[row][col] // g, w[i][col] // g
                w[i] = [ci * x - cr * y for x, y in zip(w[i], w[row])]
        rank += 1
        row += 1
    return rank


def hermite_column_form(a: Matrix) -> Matrix:
    """Canonical basis of the column lattice of an integer matrix.

    Column-style Hermite form: pivot rows strictly increase, pivots are
    positive, entries left of a pivot in its row are reduced into
    [0, pivot).  Zero columns are dropped, so equal lattices give equal
    matrices.
    """
    if not a.ring.is_integers:
        raise UnsupportedRing("hermite form works over Z")
    pool = [list(a.column(j)) for j in range(a.cols) if any(a.column(j))]
    basis: list[list[int]] = []
    for r in range(a.rows):
        hits, rest = [], []
        for c in pool:
            first = next(i for i, x in enumerate(c) if x)
            (hits if first == r else rest).append(c)
        if hits:
            cur = hits[0]
            for c in hits[1:]:
                g, x, y = xgcd(cur[r], c[r])
                q1, q2 = cur[r] // g, c[r] // g
                comb = [x * u + y * v for u, v in zip(cur, c)]
                diff = [q1 * v - q2 * u for u, v in zip(cur, c)]
                cur = comb
                if any(diff):
                    rest.append(diff)
            if cur[r] < 0:
                cur = [-x for x in cur]
            basis.append(cur)
        pool = rest
    # reduce entries left of each pivot into [0, pivot)
    pivot_rows = [next(i for i, x in enumerate(b) if x) for b in basis]
    for i in range(len(basis)):
        r, pv = pivot_rows[i], basis[i][pivot_rows[i]]
        for j in range(i):
            q = basis[j][r] // pv
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return Matrix.from_columns(ZZ, basis, a.rows)


def lattice_contains(basis: Matrix, vec) -> bool:
    """Membership of an integer vector in the lattice spanned by basis columns."""
    v = list(vec)
    for j in range(basis.cols):
        col = basis.column(j)
        r = next(i for i, x in enumerate(col) if x)
        if v[r] % col[r]:
            return False
        q = v[r] // col[r]
        v = [x - q * y for x, y in zip(v, col)]
    return not any(v)


def span_basis(a: Matrix) -> Matrix:
    """Canonical basis of the column span: echelon image pivots rewritten
    canonically over a field, Hermite form over Z."""
    if a.ring.is_field:
        # column space basis read off the RREF of the transpose
        ech = echelonize(a.transpose())
        rows = [ech.rref.data[i] for i in range(ech.rank)]
        return Matrix.from_columns(a.ring, rows, a.rows)
    if a.ring.is_integers:
        return hermite_column_form(a)
    raise UnsupportedRing(f"span_basis over {a.ring}")


@dataclass(frozen=True)
class FgAbelianGroup:
    """Finitely generated abelian group in invariant factor form.

    torsion entries are > 1 and each divides the next; the group is
    Z^free_rank plus the cyclic factors.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        assert self.free_rank >= 0
        for i, d in enumerate(self.torsion):
            assert d > 1
            if i:
                assert d % self.torsion[i - 1] == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        if self.free_rank:
            return None
        return reduce(lambda x, y: x * y, self.torsion, 1)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def abelian_from_factors(free_rank: int, factors) -> FgAbelianGroup:
    return FgAbelianGroup(free_rank, tuple(d for d in factors if d > 1))


def cokernel_group(ambient_rank: int, relations: Matrix) -> FgAbelianGroup:
    """Z^ambient_rank modulo the column lattice of relations."""
    if relations.cols == 0:
        return FgAbelianGroup(ambient_rank)
    sf = smith_normal_form(relations)
    free = ambient_rank - len(sf.factors)
    return abelian_from_factors(free, sf.factors)


def homology_pair(d_out: Matrix, d_in: Matrix):
    """Homology at the middle of  . --d_in--> . --d_out--> .

    Checks d_out * d_in = 0.  Returns the dimension over a prime field
    and an FgAbelianGroup over Z or Z/m.
    """
    if d_out.ring != d_in.ring:
        raise CoefficientMismatch("homology_pair over mixed rings")
    if d_out.cols != d_in.rows:
        raise NotAComplex(f"shape mismatch: d_out has {d_out.cols} cols, d_in {d_in.rows} rows")
    if not (d_out * d_in).is_zero:
        raise NotAComplex("d_out * d_in is nonzero")
    ring = d_out.ring
    if ring.is_field:
        return (d_out.cols - echelonize(d_out).rank) - echelonize(d_in).rank
    if ring.is_integers:
        kb = kernel_basis(d_out)
        if kb.cols == 0:
            return FgAbelianGroup(0)
        rel = solve_integer(kb, d_in) if d_in.cols else Matrix.zero(ZZ, kb.cols, 0)
        return cokernel_group(kb.cols, rel)
    # Z/m, m composite: compute Z-lattices L = {x : d_out x = 0 mod m}
    # and M = im(d_in) + m Z^n, then L / M.
    m = ring.modulus
    n = d_out.cols
    lift_out = Matrix(ZZ, d_out.data, cols=n)
    aug = lift_out.hstack(Matrix.identity(ZZ, d_out.rows).scale(m)) if d_out.rows \
        else lift_out
    kb = kernel_basis(aug)
    gens = [kb.column(j)[:n] for j in range(kb.cols)]
    gens += [[m if i == r else 0 for i in range(n)] for r in range(n)]
    lat = hermite_column_form(Matrix.from_columns(ZZ, gens, n))
    lift_in = Matrix(ZZ, d_in.data, cols=d_in.cols)
    sub = lift_in.hstack(Matrix.identity(ZZ, n).scale(m))
    rel = solve_integer(lat, sub)
    group = cokernel_group(lat.cols, rel)
    assert group.free_rank == 0
    return group
