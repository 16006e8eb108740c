"""Exact integer matrix algebra.

Smith and Hermite normal forms with transform tracking, lattice basis
completion, integer kernels and exact solves, and homology of chain-complex
pairs over Z and Z/m.  Everything runs on Python's arbitrary-precision
integers; there is no floating point anywhere in this package.

Conventions:
  * ``snf`` uses a fixed pivot rule (smallest nonzero absolute value, ties
    broken row-major), so repeated runs are bit-identical.
  * Z/m homology (m arbitrary >= 2, not only prime) is obtained from integer
    SNF computations on lifted lattices, never from pivoting in Z/m itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class NotUnimodular(ValueError):
    """The given vectors do not extend to a Z-basis of the lattice."""


class NotAComplex(ValueError):
    """The composition of the two differentials is nonzero."""


class IntMatrix:
    """Dense matrix of arbitrary-precision integers, row-major."""

    __slots__ = ("_m", "rows", "cols")

    def __init__(self, data, rows=None, cols=None):
        data = [list(map(int, row)) for row in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError("inconsistent matrix shape")
        self._m = data
        self.rows = rows
        self.cols = cols

    # -- construction ------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, rows):
        cols = len(columns)
        data = [[columns[j][i] for j in range(cols)] for i in range(rows)]
        return cls(data, rows, cols)

    # -- access ------------------------------------------------------------

    @property
    def entries(self):
        """Row-major flat list of entries."""
        return [x for row in self._m for x in row]

    def at(self, i, j):
        return self._m[i][j]

    def row(self, i):
        return list(self._m[i])

    def column(self, j):
        return [row[j] for row in self._m]

    def copy(self):
        return IntMatrix([row[:] for row in self._m], self.rows, self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._m == other._m
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(x for row in self._m for x in row)))

    def __repr__(self):
        return f"IntMatrix({self._m!r})"

    # -- arithmetic --------------------------------------------------------

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = [[0] * other.cols for _ in range(self.rows)]
        om = other._m
        for i, arow in enumerate(self._m):
            orow = out[i]
            for k, a in enumerate(arow):
                if a:
                    brow = om[k]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return IntMatrix(out, self.rows, other.cols)

    def __matmul__(self, other):
        return self.mul(other)

    def mul_vector(self, vec):
        if self.cols != len(vec):
            raise ValueError("shape mismatch in matrix-vector product")
        return [sum(a * v for a, v in zip(row, vec) if a and v) for row in self._m]

    def transpose(self):
        return IntMatrix(
            [[self._m[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return IntMatrix(
            [self._m[i] + other._m[i] for i in range(self.rows)],
            self.rows,
            self.cols + other.cols,
        )

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self._m)

    def reduce_mod(self, m):
        return IntMatrix([[x % m for x in row] for row in self._m], self.rows, self.cols)

    def det(self):
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [row[:] for row in self._m]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """U @ M @ V = D with U, V unimodular and D in invariant-factor form.

    ``u_inv`` and ``v_inv`` are the exact inverses of U and V, tracked during
    the reduction so callers never need to invert integer matrices.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    u_inv: IntMatrix
    v_inv: IntMatrix

    def diagonal(self):
        n = min(self.D.rows, self.D.cols)
        return [self.D.at(i, i) for i in range(n)]

    def invariant_factors(self):
        return [d for d in self.diagonal() if d != 0]


def snf(M: IntMatrix) -> SnfDecomposition:
    """Smith normal form with deterministic pivoting.

    Pivot rule: smallest nonzero absolute value in the working submatrix,
    ties broken row-major.  The diagonal of D is nonnegative and satisfies
    the divisibility chain D[0,0] | D[1,1] | ...
    """
    n, m = M.rows, M.cols
    a = [row[:] for row in M._m]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    ui = [row[:] for row in u]
    v = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    vi = [row[:] for row in v]

    def row_add(i, k, c):
        # row_i += c * row_k
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        u[i] = [x + c * y for x, y in zip(u[i], u[k])]
        for r in range(n):
            ui[r][k] -= c * ui[r][i]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for r in range(n):
            ui[r][i], ui[r][k] = ui[r][k], ui[r][i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in range(n):
            ui[r][i] = -ui[r][i]

    def col_add(j, k, c):
        # col_j += c * col_k
        for r in range(n):
            a[r][j] += c * a[r][k]
        for r in range(m):
            v[r][j] += c * v[r][k]
        vi[k] = [x - c * y for x, y in zip(vi[k], vi[j])]

    def col_swap(j, k):
        for r in range(n):
            a[r][j], a[r][k] = a[r][k], a[r][j]
        for r in range(m):
            v[r][j], v[r][k] = v[r][k], v[r][j]
        vi[j], vi[k] = vi[k], vi[j]

    def find_pivot(k):
        best = None
        for i in range(k, n):
            arow = a[i]
            for j in range(k, m):
                x = arow[j]
                if x:
                    ax = -x if x < 0 else x
                    if best is None or ax < best[0]:
                        best = (ax, i, j)
        return best

    for k in range(min(n, m)):
        while True:
            piv = find_pivot(k)
            if piv is None:
                break
            _, pi, pj = piv
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            if a[k][k] < 0:
                row_negate(k)
            p = a[k][k]
            for i in range(k + 1, n):
                if a[i][k]:
                    row_add(i, k, -(a[i][k] // p))
            if any(a[i][k] for i in range(k + 1, n)):
                continue
            for j in range(k + 1, m):
                if a[k][j]:
                    col_add(j, k, -(a[k][j] // p))
            if any(a[k][j] for j in range(k + 1, m)):
                continue
            # divisibility sweep: pull a bad entry into row k and restart
            bad = None
            for i in range(k + 1, n):
                arow = a[i]
                for j in range(k + 1, m):
                    if arow[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                row_add(k, bad, 1)
                continue
            break
        if find_pivot(k) is None:
            break

    return SnfDecomposition(
        IntMatrix(u, n, n),
        IntMatrix(a, n, m),
        IntMatrix(v, m, m),
        IntMatrix(ui, n, n),
        IntMatrix(vi, m, m),
    )


def hermite_row(M: IntMatrix):
    """Row-style Hermite normal form.

    Returns (H, U, U_inv) with U @ M = H, U unimodular; pivots are positive
    and entries above each pivot are reduced into [0, pivot).  Deterministic:
    pivot per column is the smallest nonzero absolute value, ties topmost.
    """
    n, m = M.rows, M.cols
    a = [row[:] for row in M._m]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    ui = [row[:] for row in u]

    def row_add(i, k, c):
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        u[i] = [x + c * y for x, y in zip(u[i], u[k])]
        for r in range(n):
            ui[r][k] -= c * ui[r][i]

    def row_swap(i, k):
        if i == k:
            return
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for r in range(n):
            ui[r][i], ui[r][k] = ui[r][k], ui[r][i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in range(n):
            ui[r][i] = -ui[r][i]

    rr = 0
    for j in range(m):
        if rr >= n:
            break
        while True:
            nz = [(abs(a[i][j]), i) for i in range(rr, n) if a[i][j]]
            if not nz:
                break
            _, pi = min(nz)
            row_swap(rr, pi)
            p = a[rr][j]
            done = True
            for i in range(rr + 1, n):
                if a[i][j]:
                    row_add(i, rr, -(a[i][j] // p))
                    if a[i][j]:
                        done = False
            if done:
                break
        if rr < n and a[rr][j]:
            if a[rr][j] < 0:
                row_negate(rr)
            p = a[rr][j]
            for i in range(rr):
                if a[i][j]:
                    row_add(i, rr, -(a[i][j] // p))
            rr += 1
    return IntMatrix(a, n, m), IntMatrix(u, n, n), IntMatrix(ui, n, n)


def basis_completion(vectors, rank=None) -> IntMatrix:
    """Complete primitive lattice vectors to a Z-basis of Z^rank.

    Returns an rank x rank unimodular matrix whose first k columns are the
    given vectors, deterministically (Hermite-based completion).  Raises
    NotUnimodular when the vectors are not part of any Z-basis.
    """
    vectors = [list(map(int, vec)) for vec in vectors]
    if rank is None:
        if not vectors:
            raise ValueError("rank required for empty vector list")
        rank = len(vectors[0])
    if any(len(vec) != rank for vec in vectors):
        raise ValueError("vector length does not match rank")
    k = len(vectors)
    if k > rank:
        raise NotUnimodular("more vectors than the lattice rank")
    if k == 0:
        return IntMatrix.identity(rank)
    M = IntMatrix.from_columns(vectors, rank)
    H, _, Ui = hermite_row(M)
    for i in range(k):
        for j in range(k):
            if H.at(i, j) != (1 if i == j else 0):
                raise NotUnimodular("vectors do not extend to a Z-basis")
    if any(H.at(i, j) for i in range(k, rank) for j in range(k)):
        raise NotUnimodular("vectors do not extend to a Z-basis")
    columns = vectors + [Ui.column(j) for j in range(k, rank)]
    W = IntMatrix.from_columns(columns, rank)
    if abs(W.det()) != 1:
        raise AssertionError("completion failed to be unimodular")
    return W


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Integer basis of ker(M), as columns.  Always a genuine lattice basis."""
    dec = snf(M)
    diag = dec.diagonal()
    free = [j for j in range(M.cols) if j >= len(diag) or diag[j] == 0]
    return IntMatrix.from_columns([dec.V.column(j) for j in free], M.cols)


def solve_columns(A: IntMatrix, B: IntMatrix, dec: SnfDecomposition | None = None):
    """Solve A @ X = B exactly over Z; returns X or None if unsolvable."""
    if dec is None:
        dec = snf(A)
    diag = dec.diagonal()
    rank = len(dec.invariant_factors())
    C = dec.U.mul(B)
    cols = []
    for j in range(B.cols):
        y = [0] * A.cols
        ok = True
        for i in range(A.rows):
            ci = C.at(i, j)
            if i < rank:
                d = diag[i]
                if ci % d:
                    ok = False
                    break
                y[i] = ci // d
            elif ci:
                ok = False
                break
        if not ok:
            return None
        cols.append(dec.V.mul_vector(y))
    return IntMatrix.from_columns(cols, A.cols)


def column_lattice_basis(M: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of M."""
    H, _, _ = hermite_row(M.transpose())
    rows = [H.row(i) for i in range(H.rows) if any(H.row(i))]
    return IntMatrix.from_columns(rows, M.rows)


def _factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group: free rank plus invariant factors.

    ``torsion`` is the ascending divisibility chain d_1 | d_2 | ... with every
    d_i > 1.  Over Z/m the ``free_rank`` counts Z/m summands and ``torsion``
    the proper-divisor summands.
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion list is not a divisibility chain")
        if any(t <= 1 for t in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    @staticmethod
    def from_factors(free_rank, factors):
        """Normalise an arbitrary multiset of cyclic orders (> 1 kept)."""
        primary = {}
        for f in factors:
            if f <= 1:
                continue
            for p, e in _factorize(f).items():
                primary.setdefault(p, []).append(e)
        width = max((len(v) for v in primary.values()), default=0)
        chain = []
        for slot in range(width):
            d = 1
            for p, exps in primary.items():
                exps_sorted = sorted(exps, reverse=True)
                if slot < len(exps_sorted):
                    d *= p ** exps_sorted[slot]
            chain.append(d)
        chain = [d for d in chain if d > 1]
        return HomologyGroup(free_rank, tuple(sorted(chain)))

    @staticmethod
    def direct_sum(groups):
        free = sum(g.free_rank for g in groups)
        factors = [t for g in groups for t in g.torsion]
        return HomologyGroup.from_factors(free, factors)

    def pretty(self, modulus=None):
        parts = []
        if self.free_rank:
            base = "Z" if modulus is None else f"Z/{modulus}"
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.pretty()


class PairHomology:
    """Homology ker(d_out)/im(d_in) of one spot of a complex.

    Over Z also records a deterministic generator basis and can express any
    cycle in homology coordinates (free coordinates first, then torsion
    coordinates reduced modulo their orders).
    """

    def __init__(self, d_out: IntMatrix, d_in: IntMatrix, modulus=None):
        if d_out.cols != d_in.rows:
            raise ValueError("differential shapes do not match at this spot")
        self.n = d_out.cols
        self.modulus = modulus
        comp = d_out.mul(d_in)
        if modulus is None:
            if not comp.is_zero():
                raise NotAComplex("d_out @ d_in != 0")
        else:
            if not comp.reduce_mod(modulus).is_zero():
                raise NotAComplex(f"d_out @ d_in != 0 mod {modulus}")
        if modulus is None:
            self._init_integral(d_out, d_in)
        else:
            self._init_modular(d_out, d_in, modulus)

    def _init_integral(self, d_out, d_in):
        K = kernel_basis(d_out)
        self._K = K
        self._K_dec = snf(K)
        k = K.cols
        Y = solve_columns(K, d_in)
        if Y is None:
            raise NotAComplex("image does not lie in the kernel")
        dec = snf(Y)
        diag = [d for d in dec.diagonal() if d != 0]
        self._rel_U = dec.U
        self._orders = diag  # orders of the first len(diag) columns of K'
        Kprime = K.mul(dec.u_inv)
        free_idx = list(range(len(diag), k))
        tors_idx = [i for i, d in enumerate(diag) if d > 1]
        self._free_idx = free_idx
        self._tors_idx = tors_idx
        self.generators = [Kprime.column(i) for i in free_idx] + [
            Kprime.column(i) for i in tors_idx
        ]
        self.torsion_orders = tuple(diag[i] for i in tors_idx)
        self.group = HomologyGroup(len(free_idx), self.torsion_orders)

    def _init_modular(self, d_out, d_in, m):
        n = self.n
        a = d_out.rows
        if n == 0:
            self.group = HomologyGroup(0)
            return
        lifted = d_out.hstack(_scaled_identity(a, m))
        ker = kernel_basis(lifted)
        gens = IntMatrix([ker.row(i) for i in range(n)], n, ker.cols)
        BL = column_lattice_basis(gens)
        if BL.cols != n:
            raise AssertionError("mod-m cycle lattice is not full rank")
        rel = d_in.hstack(_scaled_identity(n, m))
        Y = solve_columns(BL, rel)
        if Y is None:
            raise AssertionError("mod-m relation lattice escapes the cycle lattice")
        factors = snf(Y).invariant_factors()
        if len(factors) != n:
            raise AssertionError("mod-m quotient is not finite")
        for d in factors:
            if m % d:
                raise AssertionError("invariant factor does not divide the modulus")
        free = sum(1 for d in factors if d == m)
        torsion = sorted(d for d in factors if 1 < d < m)
        self.group = HomologyGroup.from_factors(free, torsion)

    # -- class arithmetic (integral case only) ------------------------------

    def coordinates(self, cycle):
        """Homology coordinates of an integer cycle vector.

        Returns (free_coords, torsion_coords); raises if the vector is not a
        cycle of this spot.
        """
        if self.modulus is not None:
            raise ValueError("coordinates are only available over Z")
        if len(cycle) != self.n:
            raise ValueError("cycle length mismatch")
        X = solve_columns(self._K, IntMatrix.from_columns([list(cycle)], self.n), self._K_dec)
        if X is None:
            raise ValueError("vector is not a cycle")
        c = self._rel_U.mul_vector(X.column(0))
        free = tuple(c[i] for i in self._free_idx)
        tors = tuple(c[i] % self._orders[i] for i in self._tors_idx)
        return free, tors

    def chain_of_class(self, free_coords, torsion_coords):
        """An integer cycle representing the class with the given coordinates."""
        if self.modulus is not None:
            raise ValueError("chains are only available over Z")
        coords = list(free_coords) + list(torsion_coords)
        if len(coords) != len(self.generators):
            raise ValueError("coordinate length mismatch")
        vec = [0] * self.n
        for c, gen in zip(coords, self.generators):
            if c:
                for i, g in enumerate(gen):
                    vec[i] += c * g
        return vec


def _scaled_identity(n, m):
    return IntMatrix([[m if i == j else 0 for j in range(n)] for i in range(n)], n, n)


def homology_of_pair(d_out: IntMatrix, d_in: IntMatrix, modulus=None) -> HomologyGroup:
    """ker(d_out)/im(d_in) as a HomologyGroup, over Z or Z/m."""
    return PairHomology(d_out, d_in, modulus).group
