"""Sparse exact matrices and Smith normal form over Euclidean domains.

The elimination is exact throughout: integer pivots shrink by division
with small remainders, polynomial pivots by degree.  U and V are built
alongside so that U*A*V = D holds entry-exactly, which the test-suite
checks on randomized input.
"""

from __future__ import annotations

from .rings import RingError, is_pid_for_smith


class MatrixError(ValueError):
    pass


class SparseMatrix:
    """Immutable-by-convention sparse matrix over an exact ring."""

    def __init__(self, ring, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise MatrixError("negative matrix dimensions")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise MatrixError(f"entry index ({i},{j}) out of range for {rows}x{cols}")
            if not ring.is_zero(v):
                self.entries[(i, j)] = v

    @classmethod
    def from_rows(cls, ring, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise MatrixError("ragged rows")
            for j, v in enumerate(row):
                v = ring.from_int(v) if isinstance(v, int) else v
                if not ring.is_zero(v):
                    entries[(i, j)] = v
        return cls(ring, rows, cols, entries)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, n, n, {(i, i): ring.one() for i in range(n)})

    @classmethod
    def zero(cls, ring, rows, cols):
        return cls(ring, rows, cols, {})

    def get(self, i, j):
        return self.entries.get((i, j), self.ring.zero())

    def to_dense(self):
        z = self.ring.zero()
        out = [[z] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self):
        return SparseMatrix(self.ring, self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.entries.items()})

    def __mul__(self, other):
        if self.cols != other.rows:
            raise MatrixError("dimension mismatch in product")
        R = self.ring
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(i, []).append((k, v))
        by_col = {}
        for (k, j), v in other.entries.items():
            by_col.setdefault(k, []).append((j, v))
        acc = {}
        for i, row in by_row.items():
            for k, v in row:
                for j, w in by_col.get(k, ()):
                    key = (i, j)
                    acc[key] = R.add(acc.get(key, R.zero()), R.mul(v, w))
        return SparseMatrix(R, self.rows, other.cols, acc)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("dimension mismatch in sum")
        R = self.ring
        acc = dict(self.entries)
        for key, v in other.entries.items():
            acc[key] = R.add(acc.get(key, R.zero()), v)
        return SparseMatrix(R, self.rows, self.cols, acc)

    def __sub__(self, other):
        return self + other.scale(self.ring.from_int(-1))

    def scale(self, c):
        R = self.ring
        return SparseMatrix(R, self.rows, self.cols,
                            {k: R.mul(c, v) for k, v in self.entries.items()})

    def is_zero(self):
        return not self.entries

    def equals(self, other):
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            (self - other).is_zero()

    def column(self, j):
        return [self.get(i, j) for i in range(self.rows)]

    def __repr__(self):
        return f"SparseMatrix({self.ring}, {self.rows}x{self.cols}, {len(self.entries)} entries)"


class SmithForm:
    """U*A*V = D with D diagonal, invariant factors in a divisibility chain."""

    def __init__(self, ring, D, U, V, diagonal):
        self.ring = ring
        self.D = D
        self.U = U
        self.V = V
        self.diagonal = diagonal  # canonical invariant factors, zeros trimmed

    @property
    def rank(self):
        return len(self.diagonal)

    def verify(self, A):
        if not (self.U * A * self.V).equals(self.D):
            return False
        for a, b in zip(self.diagonal, self.diagonal[1:]):
            if not self.ring.divides(a, b):
                return False
        return True


def _dense_with_transforms(A):
    work = A.to_dense()
    return work


def smith_normal_form(A):
    """Smith normal form over Z, F, or F[U].

    Returns a SmithForm with unimodular U (rows x rows) and V (cols x cols).
    Raises RingError for coefficient rings that are not PIDs here.
    """
    R = A.ring
    if not is_pid_for_smith(R):
        raise RingError(f"ring-not-PID: no Smith normal form over {R.tag}")
    m, n = A.rows, A.cols
    M = _dense_with_transforms(A)
    U = SparseMatrix.identity(R, m).to_dense()
    V = SparseMatrix.identity(R, n).to_dense()

    def row_op(dst, src, c):
        # row[dst] += c * row[src]
        for j in range(n):
            M[dst][j] = R.add(M[dst][j], R.mul(c, M[src][j]))
        for j in range(m):
            U[dst][j] = R.add(U[dst][j], R.mul(c, U[src][j]))

    def col_op(dst, src, c):
        for i in range(m):
            M[i][dst] = R.add(M[i][dst], R.mul(c, M[i][src]))
        for i in range(n):
            V[i][dst] = R.add(V[i][dst], R.mul(c, V[i][src]))

    def row_swap(a, b):
        M[a], M[b] = M[b], M[a]
        U[a], U[b] = U[b], U[a]

    def col_swap(a, b):
        for i in range(m):
            M[i][a], M[i][b] = M[i][b], M[i][a]
        for i in range(n):
            V[i][a], V[i][b] = V[i][b], V[i][a]

    def find_min(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if not R.is_zero(M[i][j]):
                    key = R.norm(M[i][j])
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key == 0:  # cannot do better in a field
                            return best
        return best

    # Kannan-Bachem style: always pivot on the minimum-norm entry, so
    # quotients stay small and entries cannot blow up.
    t = 0
    bound = min(m, n)
    while t < bound:
        found = find_min(t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        pivot = M[t][t]
        # one reduction sweep; if any remainder survives it is strictly
        # smaller than the pivot and becomes the next pivot candidate
        reduced = True
        for i in range(t + 1, m):
            if not R.is_zero(M[i][t]):
                q, _ = R.divmod(M[i][t], pivot)
                row_op(i, t, R.neg(q))
                if not R.is_zero(M[i][t]):
                    reduced = False
        for j in range(t + 1, n):
            if not R.is_zero(M[t][j]):
                q, _ = R.divmod(M[t][j], pivot)
                col_op(j, t, R.neg(q))
                if not R.is_zero(M[t][j]):
                    reduced = False
        if not reduced:
            continue
        # pivot divides its cleared row/column; now force it to divide
        # the remaining block so the divisibility chain comes out directly
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if not R.divides(pivot, M[i][j]):
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, R.one())
            continue
        t += 1

    rank = t

    # normalize units so factors are canonical (positive / monic)
    diagonal = []
    for i in range(rank):
        u, c = R.canonical(M[i][i])
        if not R.eq(u, R.one()):
            inv = R.inv_unit(u)
            for j in range(n):
                M[i][j] = R.mul(inv, M[i][j])
            for j in range(m):
                U[i][j] = R.mul(inv, U[i][j])
        diagonal.append(c)

    def sparsify(data, rows, cols):
        entries = {}
        for i in range(rows):
            for j in range(cols):
                if not R.is_zero(data[i][j]):
                    entries[(i, j)] = data[i][j]
        return SparseMatrix(R, rows, cols, entries)

    return SmithForm(R, sparsify(M, m, n), sparsify(U, m, m), sparsify(V, n, n), diagonal)


def kernel_basis(A):
    """Columns spanning ker(A) over the ring (a saturated basis over a PID)."""
    snf = smith_normal_form(A)
    cols = []
    for j in range(A.cols):
        if j >= snf.rank:
            cols.append(snf.V.column(j))
    return cols


def solve_in_image(A, B):
    """Solve A*X = B exactly; returns X or None when no exact solution exists."""
    R = A.ring
    snf = smith_normal_form(A)
    UB = snf.U * B
    X_rows = []
    for i in range(A.cols):
        row = []
        for j in range(B.cols):
            v = UB.get(i, j)
            if i < snf.rank:
                d = snf.diagonal[i]
                if not R.divides(d, v):
                    return None
                row.append(R.exact_div(v, d))
            else:
                if not R.is_zero(v):
                    return None
                row.append(R.zero())
        X_rows.append(row)
    Y = SparseMatrix.from_rows(R, X_rows) if X_rows else SparseMatrix.zero(R, A.cols, B.cols)
    return snf.V * Y


def cokernel_factors(A):
    """Invariant factors and free rank of coker(A) (target rank rows)."""
    snf = smith_normal_form(A)
    R = A.ring
    torsion = [d for d in snf.diagonal if not R.is_unit(d)]
    free = A.rows - snf.rank
    return free, torsion
