"""Arithmetic over GF(2^m) plus the exact linear algebra everything else leans on.

Elements are plain ints in [0, 2^m). Addition is XOR. Multiplication and
inversion run through log/antilog tables built once per field; the table build
doubles as a primitivity check of the generator. A shift-and-reduce product is
kept around both for the table build and as an independent cross-check path.
"""

from functools import reduce


# Primitive reduction polynomials by degree, bit i = coefficient of x^i.
# Degree 8 is x^8+x^4+x^3+x^2+1 (0x11D), the usual byte-field choice.
PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1011011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10001101111,
    11: 0b100000000101,
    12: 0b1000011101011,
    13: 0b10000000011011,
    14: 0b100000010101001,
    15: 0b1000000000110101,
    16: 0b10000000000101101,
}


class GF:
    """Field context for GF(2^m), 2 <= m <= 16.

    Parameters
    ----------
    m : field degree, default 8
    reduction_poly : degree-m polynomial as an int; defaults per PRIMITIVE_POLYS
    generator : element whose powers enumerate the multiplicative group
    """

    def __init__(self, m=8, reduction_poly=None, generator=2):
        if not 2 <= m <= 16:
            raise ValueError("m must be in [2, 16]")
        self.m = m
        self.q = 1 << m
        self.order = self.q - 1
        self.reduction_poly = PRIMITIVE_POLYS[m] if reduction_poly is None else reduction_poly
        if self.reduction_poly >> m != 1:
            raise ValueError("reduction polynomial must have degree exactly m")
        self.generator = generator
        if not 2 <= generator < self.q:
            raise ValueError("generator out of range")
        self._build_tables()
        self._byte_mul = None

    def _build_tables(self):
        # Walk alpha^0, alpha^1, ... by repeated raw multiplication. Seeing 1
        # again before q-1 steps means the generator's order is too small.
        log = [-1] * self.q
        exp = [0] * (2 * self.order)
        x = 1
        for i in range(self.order):
            if x == 1 and i > 0:
                raise ValueError("generator has multiplicative order %d < q-1" % i)
            exp[i] = x
            log[x] = i
            x = self.raw_mul(x, self.generator)
        if x != 1:
            raise ValueError("generator does not have order q-1")
        # doubled antilog table makes mul() branch-free on the index sum
        exp[self.order:] = exp[:self.order]
        self._exp = exp
        self._log = log

    def raw_mul(self, a, b):
        """Shift-and-reduce product, independent of the tables."""
        p = 0
        while b:
            if b & 1:
                p ^= a
            b >>= 1
            a <<= 1
            if a & self.q:
                a ^= self.reduction_poly
        return p

    @staticmethod
    def add(a, b):
        return a ^ b

    # characteristic 2: subtraction is addition
    sub = add

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._exp[self.order - self._log[a]]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] + self.order - self._log[b]]

    def pow(self, a, e):
        """Square-and-multiply exponentiation, e >= 0."""
        if e < 0:
            raise ValueError("negative exponent")
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def validate(self, a):
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError("element %r outside GF(2^%d)" % (a, self.m))
        return a

    def rand_nonzero(self, rng):
        return rng.randrange(1, self.q)

    def byte_mul_table(self):
        """256x256 uint8 table, row c = the map x -> c*x. Only for m == 8."""
        if self.m != 8:
            raise ValueError("byte table is only defined for GF(2^8)")
        if self._byte_mul is None:
            import numpy as np

            exp = np.array(self._exp[:2 * self.order], dtype=np.uint16)
            log = np.array([max(v, 0) for v in self._log], dtype=np.uint16)
            table = np.zeros((256, 256), dtype=np.uint8)
            xs = np.arange(1, 256)
            for c in range(1, 256):
                table[c, 1:] = exp[int(log[c]) + log[xs]]
            self._byte_mul = table
        return self._byte_mul

    def __repr__(self):
        return "GF(2^%d, poly=0x%X)" % (self.m, self.reduction_poly)


class SingularMatrixError(ValueError):
    """Square matrix with no inverse (distinct from shape errors)."""


class Matrix:
    """Dense row-major matrix over a GF field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = [list(row) for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    def copy(self):
        return Matrix(self.field, self.data)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field is other.field
                and self.data == other.data)

    def __repr__(self):
        return "Matrix(%dx%d over %r)" % (self.rows, self.cols, self.field)

    def col(self, j):
        return [row[j] for row in self.data]

    def columns(self):
        """All columns as tuples, handy for rank work on column subsets."""
        return [tuple(row[j] for row in self.data) for j in range(self.cols)]

    def submatrix_cols(self, col_indices):
        return Matrix(self.field, [[row[j] for j in col_indices] for row in self.data])

    def hstack(self, other):
        if other.rows != self.rows:
            raise ValueError("row count mismatch")
        return Matrix(self.field, [a + b for a, b in zip(self.data, other.data)])

    def transpose(self):
        return Matrix(self.field, [list(col) for col in zip(*self.data)])

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch: %dx%d times %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        ot = list(zip(*other.data))
        out = []
        for row in self.data:
            out.append([reduce(lambda acc, p: acc ^ f.mul(p[0], p[1]), zip(row, oc), 0)
                        for oc in ot])
        return Matrix(f, out)

    def mul_vec(self, vec):
        """Matrix-vector product A*x with x as a length-cols list."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        mul = f.mul
        out = []
        for row in self.data:
            acc = 0
            for a, x in zip(row, vec):
                if a and x:
                    acc ^= mul(a, x)
            out.append(acc)
        return out

    def is_zero(self):
        return all(all(v == 0 for v in row) for row in self.data)

    def rank(self):
        basis = PivotBasis(self.field, self.cols)
        for row in self.data:
            basis.add(row)
            if basis.rank == min(self.rows, self.cols):
                break
        return basis.rank

    def inverse(self):
        """Gauss-Jordan inverse. First nonzero pivot per column, no pivoting tricks."""
        if self.rows != self.cols:
            raise ValueError("inverse needs a square matrix")
        f = self.field
        n = self.rows
        a = [list(row) for row in self.data]
        b = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if a[r][col]:
                    pivot = r
                    break
            if pivot is None:
                raise SingularMatrixError("singular matrix")
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
            pin = f.inv(a[col][col])
            a[col] = [f.mul(pin, v) for v in a[col]]
            b[col] = [f.mul(pin, v) for v in b[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    c = a[r][col]
                    a[r] = [x ^ f.mul(c, y) for x, y in zip(a[r], a[col])]
                    b[r] = [x ^ f.mul(c, y) for x, y in zip(b[r], b[col])]
        return Matrix(f, b)

    def solve(self, rhs):
        """Solve A*x = rhs for a square A; returns x as a list."""
        if self.rows != self.cols:
            raise ValueError("solve needs a square matrix")
        if len(rhs) != self.rows:
            raise ValueError("rhs length mismatch")
        f = self.field
        n = self.rows
        a = [row + [v] for row, v in zip(self.data, rhs)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if a[r][col]:
                    pivot = r
                    break
            if pivot is None:
                raise SingularMatrixError("singular matrix")
            a[col], a[pivot] = a[pivot], a[col]
            pin = f.inv(a[col][col])
            a[col] = [f.mul(pin, v) for v in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    c = a[r][col]
                    a[r] = [x ^ f.mul(c, y) for x, y in zip(a[r], a[col])]
        return [a[i][n] for i in range(n)]


class PivotBasis:
    """Online row-echelon basis: feed vectors, watch the rank grow.

    Every stored pivot row is normalized and already reduced against the
    pivots that existed when it arrived, so reducing new vectors in insertion
    order never reintroduces a cleared column.
    """

    __slots__ = ("field", "width", "pivots", "order")

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.pivots = {}     # pivot column -> normalized row
        self.order = []      # insertion order of pivot columns

    @property
    def rank(self):
        return len(self.pivots)

    def _reduce(self, vec):
        f = self.field
        mul = f.mul
        row = list(vec)
        for c in self.order:
            coef = row[c]
            if coef:
                prow = self.pivots[c]
                row = [x ^ mul(coef, y) for x, y in zip(row, prow)]
        return row

    def add(self, vec):
        """Insert vec if independent of the basis; returns True on insert."""
        row = self._reduce(vec)
        for c, v in enumerate(row):
            if v:
                f = self.field
                if v != 1:
                    pin = f.inv(v)
                    row = [f.mul(pin, x) for x in row]
                self.pivots[c] = row
                self.order.append(c)
                return True
        return False

    def contains(self, vec):
        """True when vec already lies in the span."""
        return not any(self._reduce(vec))

    def clone(self):
        other = PivotBasis.__new__(PivotBasis)
        other.field = self.field
        other.width = self.width
        other.pivots = dict(self.pivots)
        other.order = list(self.order)
        return other


def columns_rank(field, columns, stop_at=None):
    """Rank of the span of column vectors; optional early exit at stop_at."""
    basis = PivotBasis(field, len(columns[0]) if columns else 0)
    for col in columns:
        basis.add(col)
        if stop_at is not None and basis.rank >= stop_at:
            break
    return basis.rank
