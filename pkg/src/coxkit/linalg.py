"""Arbitrary-precision integer and rational linear algebra.

Provides immutable integer/rational matrices, Smith and Hermite normal
forms with transformation matrices, saturated integer kernels, and exact
or multi-prime modular kernel dimension.  Everything is deterministic;
elimination over the integers is fraction-free (Bareiss) to control entry
growth, with gmpy2 bignums when available.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError

try:
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int


class PrimeDivideDenominator(PreconditionError):
    pass


def vec_gcd(v):
    g = 0
    for x in v:
        g = math.gcd(g, abs(int(x)))
    return g


def primitive(v):
    """Divide an integer vector by the gcd of its entries (0 stays 0)."""
    g = vec_gcd(v)
    if g <= 1:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def dot(u, v):
    return sum(int(a) * int(b) for a, b in zip(u, v))


class IntMatrix:
    """Immutable integer matrix, row-major, arbitrary precision."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows_data, cols=None):
        rows_data = [tuple(int(x) for x in row) for row in rows_data]
        self._r = tuple(rows_data)
        self.rows = len(rows_data)
        if rows_data:
            self.cols = len(rows_data[0])
            if any(len(row) != self.cols for row in rows_data):
                raise ValueError("ragged rows")
        else:
            if cols is None:
                raise ValueError("empty matrix needs explicit column count")
            self.cols = cols
        if cols is not None and rows_data and cols != self.cols:
            raise ValueError("cols mismatch")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def entries(self):
        """Row-major flat tuple of entries."""
        return tuple(x for row in self._r for x in row)

    def row(self, i):
        return self._r[i]

    def col(self, j):
        return tuple(row[j] for row in self._r)

    def row_list(self):
        return [list(row) for row in self._r]

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._r == other._r
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._r))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._r]!r})"

    def transpose(self):
        return IntMatrix([self.col(j) for j in range(self.cols)], cols=self.rows)

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ot = other.transpose()
            return IntMatrix(
                [[dot(r, c) for c in ot._r] for r in self._r], cols=other.cols
            )
        return NotImplemented

    def apply(self, v):
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(dot(r, v) for r in self._r)

    def stack(self, other):
        """Rows of self followed by rows of other."""
        if self.cols != other.cols:
            raise ValueError("shape mismatch")
        return IntMatrix(list(self._r) + list(other._r), cols=self.cols)

    def is_diagonal(self):
        return all(
            self._r[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal(self):
        return tuple(self._r[i][i] for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ..."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self):
        return tuple(d for d in self.D.diagonal() if d != 0)

    @property
    def rank(self):
        return len(self.invariant_factors)


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transformations: U*M*V = D.

    D is diagonal with nonnegative entries, zeros trailing, and each
    diagonal entry divides the next.  Empty matrices are allowed.
    """
    n, m = M.rows, M.cols
    a = M.row_list()
    u = IntMatrix.identity(n).row_list()
    v = IntMatrix.identity(m).row_list()

    def row_op(i, j, q):
        # row i -= q * row j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):
        # col i -= q * col j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def clear_cross(k):
        # zero out column k below row k and row k right of column k,
        # leaving the gcd of the cross at the pivot position
        while True:
            changed = True
            while changed:
                changed = False
                for i in range(k + 1, n):
                    if a[i][k] == 0:
                        continue
                    q = a[i][k] // a[k][k]
                    row_op(i, k, q)
                    if a[i][k] != 0:
                        # remainder is smaller: promote it and continue
                        _swap_rows(a, k, i)
                        _swap_rows(u, k, i)
                        changed = True
            dirty = False
            changed = True
            while changed:
                changed = False
                for j in range(k + 1, m):
                    if a[k][j] == 0:
                        continue
                    q = a[k][j] // a[k][k]
                    col_op(j, k, q)
                    if a[k][j] != 0:
                        _swap_cols(a, k, j)
                        _swap_cols(v, k, j)
                        changed = True
                        dirty = True
            if not dirty and all(a[i][k] == 0 for i in range(k + 1, n)):
                return

    k = 0
    while k < n and k < m:
        piv = next(
            (
                (i, j)
                for i in range(k, n)
                for j in range(k, m)
                if a[i][j] != 0
            ),
            None,
        )
        if piv is None:
            break
        i, j = piv
        _swap_rows(a, k, i)
        _swap_rows(u, k, i)
        _swap_cols(a, k, j)
        _swap_cols(v, k, j)
        clear_cross(k)
        # enforce that the pivot divides every entry of the residual block
        while True:
            bad = next(
                (
                    i
                    for i in range(k + 1, n)
                    for j in range(k + 1, m)
                    if a[i][j] % a[k][k] != 0
                ),
                None,
            )
            if bad is None:
                break
            row_op(k, bad, -1)
            clear_cross(k)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        k += 1

    return SmithDecomposition(
        U=IntMatrix(u, cols=n), D=IntMatrix(a, cols=m), V=IntMatrix(v, cols=m)
    )


def hermite_normal_form(M: IntMatrix):
    """Row-style Hermite normal form: returns (H, U) with U*M = H.

    Convention: positive pivots in echelon position, entries above each
    pivot reduced into [0, pivot).  Zero rows trail.
    """
    n, m = M.rows, M.cols
    a = M.row_list()
    u = IntMatrix.identity(n).row_list()

    def row_addmul(i, j, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    r = 0
    pivots = []
    for c in range(m):
        # gcd-reduce entries of column c in rows r..n-1
        while True:
            nz = [i for i in range(r, n) if a[i][c] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(a[i][c]))
            i0 = nz[0]
            for i in nz[1:]:
                q = a[i][c] // a[i0][c]
                row_addmul(i, i0, q)
        nz = [i for i in range(r, n) if a[i][c] != 0]
        if not nz:
            continue
        i0 = nz[0]
        _swap_rows(a, r, i0)
        _swap_rows(u, r, i0)
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        # reduce entries above the pivot into [0, pivot)
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                row_addmul(i, r, q)
        pivots.append(c)
        r += 1
        if r == n:
            break
    return IntMatrix(a, cols=m), IntMatrix(u, cols=n)


def integer_kernel_saturated(M: IntMatrix) -> IntMatrix:
    """Basis of {x in Z^cols : M x = 0} as a saturated sublattice.

    Rows of the result form the basis; the quotient of Z^cols by their
    span is torsion-free because they are columns of a unimodular matrix.
    """
    snf = smith_normal_form(M)
    r = snf.rank
    # kernel = span of columns r..cols-1 of V
    rows = [snf.V.col(j) for j in range(r, M.cols)]
    if not rows:
        return IntMatrix([], cols=M.cols)
    h, _ = hermite_normal_form(IntMatrix(rows, cols=M.cols))
    return IntMatrix([row for row in h._r if any(row)], cols=M.cols)


def in_row_lattice(B: IntMatrix, v) -> bool:
    """Is v an integer combination of the rows of B?"""
    if B.rows == 0:
        return not any(v)
    h, _ = hermite_normal_form(B)
    w = [int(x) for x in v]
    for row in h._r:
        piv = next((j for j, x in enumerate(row) if x != 0), None)
        if piv is None:
            continue
        if w[piv] % row[piv] == 0:
            q = w[piv] // row[piv]
            w = [x - q * y for x, y in zip(w, row)]
    return not any(w)


def det(M: IntMatrix):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = [[_bigint(x) for x in row] for row in M._r]
    sign = 1
    prev = _bigint(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            rowi = a[i]
            rowk = a[k]
            for j in range(k + 1, n):
                rowi[j] = (pk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = _bigint(0)
        prev = pk
    return sign * int(a[n - 1][n - 1])


def int_rank(rows) -> int:
    """Rank of an integer matrix given as a list of rows (Bareiss)."""
    a = [[_bigint(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return 0
    m = len(a[0])
    rank = 0
    r = 0
    prev = _bigint(1)
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, n):
            aic = a[i][c]
            rowi = a[i]
            rowr = a[r]
            for j in range(c + 1, m):
                rowi[j] = (pv * rowi[j] - aic * rowr[j]) // prev
            rowi[c] = _bigint(0)
        prev = pv
        rank += 1
        r += 1
        if r == n:
            break
    return rank


def int_rank_mod(rows, p) -> int:
    """Rank of an integer matrix over GF(p), vectorized elimination."""
    if not rows:
        return 0
    M = np.array([[int(x) % p for x in row] for row in rows], dtype=np.int64)
    nr, nc = M.shape
    rank = 0
    r = 0
    for c in range(nc):
        block = M[r:, c]
        nz = np.nonzero(block)[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r, c:] = (M[r, c:] * inv) % p
        colv = M[r + 1 :, c]
        hit = np.nonzero(colv)[0]
        if len(hit):
            M[r + 1 + hit, c:] = (M[r + 1 + hit, c:] - colv[hit, None] * M[r, c:]) % p
        rank += 1
        r += 1
        if r == nr:
            break
    return rank


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


MODULAR_PRIME_BOUND = 1 << 20


def default_modular_primes(avoid=(), count=3):
    """First `count` primes above 2^20 dividing none of `avoid`."""
    avoid = [a for a in avoid if a not in (0, 1, -1)]
    out = []
    n = MODULAR_PRIME_BOUND + 1
    while len(out) < count:
        if _is_prime(n) and all(a % n != 0 for a in avoid):
            out.append(n)
        n += 1
    return out


class RatMatrix:
    """Immutable exact rational matrix.

    Entries are Fractions (plain ints are accepted and kept as exact
    integers, which avoids per-entry Fraction overhead on large integer
    matrices).
    """

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows_data, cols=None):
        norm = []
        for row in rows_data:
            norm.append(
                tuple(x if isinstance(x, int) else Fraction(x) for x in row)
            )
        self._r = tuple(norm)
        self.rows = len(norm)
        if norm:
            self.cols = len(norm[0])
            if any(len(row) != self.cols for row in norm):
                raise ValueError("ragged rows")
        else:
            if cols is None:
                raise ValueError("empty matrix needs explicit column count")
            self.cols = cols

    def row(self, i):
        return self._r[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                Fraction(a) == Fraction(b)
                for ra, rb in zip(self._r, other._r)
                for a, b in zip(ra, rb)
            )
        )

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"

    def denominators(self):
        out = set()
        for row in self._r:
            for x in row:
                if not isinstance(x, int):
                    out.add(x.denominator)
        return out or {1}

    def cleared_rows(self):
        """Integer rows after scaling each row by the lcm of denominators."""
        out = []
        for row in self._r:
            lcm = 1
            for x in row:
                if not isinstance(x, int):
                    lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
            if lcm == 1:
                out.append([int(x) for x in row])
            else:
                out.append([int(x * lcm) for x in row])
        return out


def kernel_dimension(M: RatMatrix, mode="exact", primes=None) -> int:
    """Dimension of the rational null space of M.

    mode="exact": fraction-free elimination over Z after clearing row
    denominators.  mode="modular": rank over GF(p) for each prime; all
    primes must agree, otherwise the computation escalates to exact.
    Modular primes must be >= 3 distinct primes above 2^20 and coprime to
    every entry denominator.
    """
    if mode not in ("exact", "modular"):
        raise ValueError(f"unknown mode {mode!r}")
    rows = M.cleared_rows()
    if mode == "exact":
        return M.cols - int_rank(rows)
    denoms = M.denominators()
    if primes is None:
        primes = default_modular_primes(avoid=denoms)
    primes = list(primes)
    if len(set(primes)) < 3:
        raise PreconditionError("modular mode requires at least 3 distinct primes")
    if any(p <= MODULAR_PRIME_BOUND for p in primes):
        raise PreconditionError("modular primes must exceed 2^20")
    for p in primes:
        for d in denoms:
            if d % p == 0:
                raise PrimeDivideDenominator(f"prime {p} divides a denominator")
    ranks = {int_rank_mod(rows, p) for p in primes}
    if len(ranks) == 1:
        return M.cols - ranks.pop()
    return M.cols - int_rank(rows)


def rational_kernel_basis(M: RatMatrix):
    """Exact basis of the rational null space (list of Fraction tuples).

    Gauss-Jordan over Fraction; intended for small matrices.
    """
    a = [[Fraction(x) for x in row] for row in M._r]
    n, m = len(a), M.cols
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(tuple(v))
    return basis


def rational_solve(A, b):
    """Solve A x = b exactly over Q; returns tuple of Fractions or None.

    A is a list of rows (or IntMatrix), b a vector.  For underdetermined
    systems an arbitrary solution (free variables at 0) is returned.
    """
    if isinstance(A, IntMatrix):
        A = A.row_list()
    a = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    n = len(a)
    m = len(a[0]) - 1 if a else 0
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if a[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = a[i][m]
    return tuple(x)


def int_inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix."""
    n = M.rows
    if n != M.cols:
        raise ValueError("not square")
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x = rational_solve(M, e)
        if x is None or any(v.denominator != 1 for v in map(Fraction, x)):
            raise ValueError("matrix is not unimodular")
        cols.append([int(v) for v in x])
    return IntMatrix([[cols[j][i] for j in range(n)] for i in range(n)], cols=n)
