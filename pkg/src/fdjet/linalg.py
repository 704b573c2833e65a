"""Dense and sparse exact linear algebra over the rationals, plus integer lattices.

Matrices are plain lists of lists of rationals (row major). Sparse vectors are
``dict`` maps from an ordered key to a nonzero rational; the caller supplies the
key order used for pivoting so reductions are reproducible.
"""
from __future__ import annotations

import heapq
from fractions import Fraction

from gmpy2 import mpq
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

Rational = type(mpq())
Matrix = list[list[Rational]]


def Q(x=0, den=None) -> Rational:
    """Exact rational as a gmpy2 mpq; accepts ints, strings, Fractions and mpq values."""
    if den is not None:
        return mpq(int(x), int(den))
    if isinstance(x, Rational):
        return x
    if isinstance(x, Fraction):
        # Fraction(mpq) carries mpz parts, which mpq() refuses
        return mpq(int(x.numerator), int(x.denominator))
    return mpq(x)


def zeros(rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return [[Q(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n)
    for i in range(n):
        m[i][i] = Q(1)
    return m


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for t in range(inner):
            c = row[t]
            if c:
                brow = b[t]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += c * brow[j]
    return out


def mat_add(a: Matrix, b: Matrix, scale: Rational | int = 1) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Rational | int) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def mat_inv(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse. Raises ``ZeroDivisionError`` for singular input."""
    n = len(a)
    work = [list(row) + e for row, e in zip(a, identity(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def determinant(a: Matrix) -> Rational:
    n = len(a)
    work = [list(row) for row in a]
    det = Q(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            return Q(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col]:
                f = work[r][col] * inv
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return det


def charpoly(a: Matrix) -> list[Rational]:
    """Characteristic polynomial det(tI - A), coefficients lowest degree first.

    Reduces to upper Hessenberg form by similarity, then runs the standard
    determinant recurrence on the Hessenberg matrix. Division-safe over Q.
    """
    n = len(a)
    h = [list(row) for row in a]
    for col in range(n - 2):
        piv = next((r for r in range(col + 1, n) if h[r][col]), None)
        if piv is None:
            continue
        if piv != col + 1:
            h[col + 1], h[piv] = h[piv], h[col + 1]
            for row in h:
                row[col + 1], row[piv] = row[piv], row[col + 1]
        p = h[col + 1][col]
        for r in range(col + 2, n):
            if h[r][col]:
                f = h[r][col] / p
                h[r] = [x - f * y for x, y in zip(h[r], h[col + 1])]
                for row in h:
                    row[col + 1] += f * row[r]
    # polys[m] = charpoly of leading m x m block
    polys: list[list[Rational]] = [[Q(1)]]
    for m in range(1, n + 1):
        # t * p_{m-1} - h[m-1][m-1] * p_{m-1}
        prev = polys[m - 1]
        cur = [Q(0)] + prev
        for i, c in enumerate(prev):
            cur[i] -= h[m - 1][m - 1] * c
        prod = Q(1)
        for i in range(1, m):
            prod *= h[m - i][m - i - 1]
            if not prod:
                break
            coeff = prod * h[m - i - 1][m - 1]
            if coeff:
                for j, c in enumerate(polys[m - i - 1]):
                    cur[j] -= coeff * c
        polys.append(cur)
    return polys[n]


def poly_eval_matrix(coeffs: Sequence[Rational], a: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (lowest degree first) at a square matrix."""
    n = len(a)
    out = zeros(n)
    for c in reversed(coeffs):
        out = mat_mul(out, a)
        if c:
            for i in range(n):
                out[i][i] += c
    return out


class SparseEchelon:
    """Incrementally maintained row echelon form over Q.

    Rows are dicts keyed by hashable column labels; ``order`` maps a label to a
    sortable key and the pivot of a row is its smallest label under that key.
    Stored rows are normalized so the pivot coefficient is 1.
    """

    def __init__(self, order: Callable[[Hashable], object]):
        self.order = order
        self.rows: dict[Hashable, dict] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def pivot_of(self, row: dict) -> Hashable:
        return min(row, key=self.order)

    def reduce(self, row: dict) -> dict:
        """Return the remainder of ``row`` against the stored rows."""
        row = dict(row)
        order = self.order
        heap = [(order(k), k) for k in row if k in self.rows]
        heapq.heapify(heap)
        while heap:
            _, label = heapq.heappop(heap)
            f = row.get(label)
            if not f:
                continue
            # every other label of a stored row sorts after its pivot
            for key, c in self.rows[label].items():
                v = row.get(key, 0) - f * c
                if v:
                    if key not in row and key in self.rows:
                        heapq.heappush(heap, (order(key), key))
                    row[key] = v
                else:
                    row.pop(key, None)
        return row

    def add(self, row: dict) -> dict | None:
        """Reduce and insert; returns the stored (normalized) row or None if dependent."""
        rem = self.reduce(row)
        if not rem:
            return None
        piv = self.pivot_of(rem)
        inv = 1 / rem[piv]
        rem = {k: v * inv for k, v in rem.items()}
        self.rows[piv] = rem
        return rem

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> list[dict]:
        """Fully reduced rows (each pivot absent from the others), ordered by pivot."""
        pivots = sorted(self.rows, key=self.order)
        out: dict[Hashable, dict] = {}
        for p in reversed(pivots):
            row = dict(self.rows[p])
            for q in pivots:
                if q == p or q not in row or q not in out:
                    continue
                f = row[q]
                for key, c in out[q].items():
                    v = row.get(key, 0) - f * c
                    if v:
                        row[key] = v
                    else:
                        row.pop(key, None)
            out[p] = row
        return [out[p] for p in pivots]


def sparse_rank(rows: Iterable[dict], order: Callable[[Hashable], object]) -> int:
    ech = SparseEchelon(order)
    for r in rows:
        ech.add(r)
    return len(ech)


# ---------------------------------------------------------------- integer lattices


def integer_kernel(a: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of {x in Z^ncols : a x = 0} via unimodular column operations."""
    m = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns track ops
    pivot_col = 0
    for r in range(len(m)):
        if pivot_col >= ncols:
            break
        # gcd-reduce entries m[r][pivot_col:] into column pivot_col
        while True:
            nz = [c for c in range(pivot_col, ncols) if m[r][c]]
            if not nz:
                break
            c0 = min(nz, key=lambda c: abs(m[r][c]))
            _swap_cols(m, u, pivot_col, c0)
            p = m[r][pivot_col]
            changed = False
            for c in range(pivot_col + 1, ncols):
                if m[r][c]:
                    q = m[r][c] // p
                    _add_col(m, u, c, pivot_col, -q)
                    changed = changed or m[r][c] != 0
            if not changed:
                break
        if m[r][pivot_col]:
            pivot_col += 1
    kernel = [[u[i][c] for i in range(ncols)] for c in range(pivot_col, ncols)]
    return kernel


def _swap_cols(m, u, i, j):
    if i == j:
        return
    for row in m:
        row[i], row[j] = row[j], row[i]
    for row in u:
        row[i], row[j] = row[j], row[i]


def _add_col(m, u, dst, src, factor):
    for row in m:
        row[dst] += factor * row[src]
    for row in u:
        row[dst] += factor * row[src]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``rows``; zero rows dropped.

    Pivots strictly move right, pivot entries are positive, and entries above a
    pivot lie in [0, pivot).
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    out: list[list[int]] = []
    col = 0
    while work and col < ncols:
        while True:
            nz = [r for r in work if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            for r in nz[1:]:
                q = r[col] // p[col]
                for j in range(ncols):
                    r[j] -= q * p[j]
        nz = [r for r in work if r[col]]
        if nz:
            p = nz[0]
            work.remove(p)
            if p[col] < 0:
                p = [-x for x in p]
            out.append(p)
        work = [r for r in work if any(r)]
        col += 1
    # reduce entries above pivots
    for i, row in enumerate(out):
        pc = next(j for j, x in enumerate(row) if x)
        for above in out[:i]:
            q = above[pc] // row[pc]
            if q:
                for j in range(ncols):
                    above[j] -= q * row[j]
    return out


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
