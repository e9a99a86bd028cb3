"""Matrices over a scalar tower.

Inversion uses Gauss-Jordan elimination with invertible pivots, which is
exact over the field modes and correct over the truncated local ring
(a matrix there is invertible iff its h=0 part is).  Determinants fall
back to division-free cofactor expansion when no unit pivot exists.
"""

from ..errors import SingularMatrix


class Matrix:
    __slots__ = ("tower", "rows", "cols", "data")

    def __init__(self, tower, data):
        self.tower = tower
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    # -- constructors -------------------------------------------------------
    @staticmethod
    def identity(tower, n):
        one, zero = tower.one(), tower.zero()
        return Matrix(tower, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(tower, rows, cols):
        zero = tower.zero()
        return Matrix(tower, [[zero] * cols for _ in range(rows)])

    @staticmethod
    def from_scalar(tower, x):
        return Matrix(tower, [[tower.coerce(x)]])

    # -- structure ----------------------------------------------------------
    def entry(self, i, j):
        return self.data[i][j]

    def map_entries(self, fn, tower=None):
        return Matrix(tower or self.tower, [[fn(x) for x in row] for row in self.data])

    def transpose(self):
        return Matrix(self.tower, [list(col) for col in zip(*self.data)])

    def is_square(self):
        return self.rows == self.cols

    def column(self, j):
        return Matrix(self.tower, [[row[j]] for row in self.data])

    def hstack(self, other):
        return Matrix(self.tower, [list(a) + list(b) for a, b in zip(self.data, other.data)])

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        return Matrix(self.tower, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        return Matrix(self.tower, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        return Matrix(self.tower, [[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
            cols = list(zip(*other.data))
            out = []
            for row in self.data:
                out_row = []
                for col in cols:
                    acc = None
                    for a, b in zip(row, col):
                        term = a * b
                        acc = term if acc is None else acc + term
                    out_row.append(acc)
                out.append(out_row)
            return Matrix(self.tower, out)
        return self.scale(other)

    def scale(self, scalar):
        scalar = self.tower.coerce(scalar)
        return Matrix(self.tower, [[a * scalar for a in row] for row in self.data])

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.rows != other.rows or self.cols != other.cols:
            return NotImplemented if not isinstance(other, Matrix) else False
        return all(a == b for r1, r2 in zip(self.data, other.data) for a, b in zip(r1, r2))

    def kron(self, other):
        """Kronecker product in row-major block order."""
        out = []
        for r1 in self.data:
            for r2 in other.data:
                out.append([a * b for a in r1 for b in r2])
        return Matrix(self.tower, out)

    # -- elimination ------------------------------------------------------------
    def inverse(self, *, error=None):
        if not self.is_square():
            raise SingularMatrix("inverse of a non-square matrix")
        n = self.rows
        tower = self.tower
        work = [list(row) + [tower.one() if i == j else tower.zero() for j in range(n)] for i, row in enumerate(self.data)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if tower.is_unit(work[r][col]):
                    piv = r
                    break
            if piv is None:
                err = error or SingularMatrix
                raise err("matrix is not invertible")
            work[col], work[piv] = work[piv], work[col]
            inv = tower.inv(work[col][col])
            work[col] = [x * inv for x in work[col]]
            for r in range(n):
                if r == col:
                    continue
                f = work[r][col]
                if tower.is_zero(f):
                    continue
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return Matrix(tower, [row[n:] for row in work])

    def det(self):
        if not self.is_square():
            raise SingularMatrix("determinant of a non-square matrix")
        n = self.rows
        tower = self.tower
        work = [list(row) for row in self.data]
        sign = 1
        out = tower.one()
        for col in range(n):
            piv = None
            for r in range(col, n):
                if tower.is_unit(work[r][col]):
                    piv = r
                    break
            if piv is None:
                if all(tower.is_zero(work[r][col]) for r in range(col, n)):
                    return tower.zero()
                return self._det_cofactor()
            if piv != col:
                work[col], work[piv] = work[piv], work[col]
                sign = -sign
            pivot = work[col][col]
            out = out * pivot
            inv = tower.inv(pivot)
            for r in range(col + 1, n):
                f = work[r][col] * inv
                if tower.is_zero(f):
                    continue
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        if sign < 0:
            out = -out
        return out

    def _det_cofactor(self):
        tower = self.tower
        n = self.rows

        def rec(rows, cols):
            if len(cols) == 1:
                return self.data[rows[0]][cols[0]]
            acc = None
            r0 = rows[0]
            rest = rows[1:]
            for k, c in enumerate(cols):
                a = self.data[r0][c]
                if tower.is_zero(a):
                    continue
                sub = rec(rest, cols[:k] + cols[k + 1 :])
                term = a * sub
                if k % 2:
                    term = -term
                acc = term if acc is None else acc + term
            return acc if acc is not None else tower.zero()

        return rec(tuple(range(n)), tuple(range(n)))

    def is_invertible(self):
        try:
            self.inverse()
            return True
        except SingularMatrix:
            return False

    def trace(self):
        acc = self.tower.zero()
        for i in range(self.rows):
            acc = acc + self.data[i][i]
        return acc

    def is_zero(self):
        return all(self.tower.is_zero(x) for row in self.data for x in row)

    def h0(self, shadow_tower):
        """Entrywise h=0 projection into the rational shadow tower."""
        return Matrix(shadow_tower, [[self.tower.h0(x) for x in row] for row in self.data])

    # -- printing -----------------------------------------------------------------
    def to_strings(self):
        return [[self.tower.canonical_str(x) for x in row] for row in self.data]

    def __str__(self):
        return "[" + "; ".join(", ".join(r) for r in self.to_strings()) + "]"

    def __repr__(self):
        return f"Matrix({self})"
