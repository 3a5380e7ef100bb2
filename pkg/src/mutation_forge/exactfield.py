"""Exact linear algebra over the rationals and over prime fields GF(p).

Everything downstream (morphism spaces, mutations, stability oracles) is
built on the two types defined here: ExactMatrix and Subspace. All
arithmetic is exact — Fraction for the rationals, ints mod p for GF(p).
There is no floating point anywhere in this package.
"""

from fractions import Fraction
from itertools import combinations, product
from math import isqrt


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


class Field:
    """A base field: the rationals (p is None) or GF(p) for a prime p < 2^16.

    Scalars are plain Fraction values over the rationals and ints in
    0..p-1 over GF(p); the Field object supplies the arithmetic.
    """

    def __init__(self, p=None):
        if p is not None:
            if not _is_prime(p):
                raise ValueError("field characteristic must be prime, got %r" % (p,))
            if p >= 1 << 16:
                raise ValueError("prime fields require p < 2^16")
        self.p = p

    @property
    def is_rational(self):
        return self.p is None

    def of(self, v):
        """Coerce an int or Fraction into the field. Over GF(p) a Fraction
        is reduced mod p (its denominator must be prime to p)."""
        if self.p is None:
            return Fraction(v)
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return (v.numerator * pow(v.denominator, self.p - 2, self.p)) % self.p
        return int(v) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        """All field elements (GF(p) only)."""
        if self.p is None:
            raise ValueError("the rationals are not enumerable")
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else "GF(%d)" % self.p


QQ = Field()


def GF(p):
    return Field(p)


class ExactMatrix:
    """A dense matrix over a Field. Immutable by convention: no method
    mutates self; all operations return new matrices."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data):
        self.field = field
        self.data = [[field.of(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(field, rows, cols):
        z = field.zero()
        m = ExactMatrix.__new__(ExactMatrix)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.data = [[z] * cols for _ in range(rows)]
        return m

    @staticmethod
    def identity(field, n):
        m = ExactMatrix.zeros(field, n, n)
        one = field.one()
        for i in range(n):
            m.data[i][i] = one
        return m

    @staticmethod
    def column(field, entries):
        m = ExactMatrix(field, [[x] for x in entries])
        m.cols = 1
        return m

    @staticmethod
    def from_flat(field, rows, cols, flat):
        if len(flat) != rows * cols:
            raise ValueError("flat length mismatch")
        m = ExactMatrix(field, [flat[r * cols:(r + 1) * cols] for r in range(rows)])
        m.cols = cols
        return m

    def _new(self, data, cols=None):
        m = ExactMatrix.__new__(ExactMatrix)
        m.field = self.field
        m.data = data
        m.rows = len(data)
        m.cols = len(data[0]) if data else (0 if cols is None else cols)
        return m

    def copy_data(self):
        return [row[:] for row in self.data]

    # -- arithmetic ---------------------------------------------------

    def _check_same_field(self, other):
        if self.field != other.field:
            raise ValueError("mixed fields: %r vs %r" % (self.field, other.field))

    def __add__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        add = self.field.add
        return self._new([[add(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)], self.cols)

    def __sub__(self, other):
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        sub = self.field.sub
        return self._new([[sub(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)], self.cols)

    def __neg__(self):
        neg = self.field.neg
        return self._new([[neg(a) for a in row] for row in self.data], self.cols)

    def scale(self, c):
        c = self.field.of(c)
        mul = self.field.mul
        return self._new([[mul(c, a) for a in row] for row in self.data], self.cols)

    def __matmul__(self, other):
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product: %dx%d @ %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        zero = f.zero()
        if self.cols == 0:
            return ExactMatrix.zeros(f, self.rows, other.cols)
        ot = [list(col) for col in zip(*other.data)] if other.cols else []
        out = []
        if f.p is None:
            for r in self.data:
                out.append([sum((a * b for a, b in zip(r, c) if a and b), zero)
                            for c in ot])
        else:
            p = f.p
            for r in self.data:
                out.append([sum(a * b for a, b in zip(r, c)) % p for c in ot])
        m = ExactMatrix.__new__(ExactMatrix)
        m.field = f
        m.data = out
        m.rows = self.rows
        m.cols = other.cols
        return m

    def transpose(self):
        if self.rows == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.field, self.cols, self.rows)
        return self._new([list(col) for col in zip(*self.data)])

    def kron(self, other):
        """Kronecker product, left factor major (matches the lexicographic
        tensor basis convention used throughout)."""
        self._check_same_field(other)
        f = self.field
        mul = f.mul
        out = ExactMatrix.zeros(f, self.rows * other.rows, self.cols * other.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                a = self.data[i][j]
                if a == 0:
                    continue
                for k in range(other.rows):
                    orow = other.data[k]
                    trow = out.data[i * other.rows + k]
                    base = j * other.cols
                    for l in range(other.cols):
                        if orow[l] != 0:
                            trow[base + l] = mul(a, orow[l])
        return out

    def hstack(self, other):
        self._check_same_field(other)
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return self._new([r1 + r2 for r1, r2 in zip(self.data, other.data)],
                         self.cols + other.cols)

    def vstack(self, other):
        self._check_same_field(other)
        if self.cols != other.cols:
            raise ValueError("column mismatch in vstack")
        return self._new(self.copy_data() + other.copy_data(), self.cols)

    def submatrix(self, row_idx, col_idx):
        col_idx = list(col_idx)
        return self._new([[self.data[i][j] for j in col_idx] for i in row_idx],
                         len(col_idx))

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def flat(self):
        """Row-major flattening."""
        return [x for row in self.data for x in row]

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols,
                     tuple(tuple(r) for r in self.data)))

    def is_zero(self):
        z = self.field.zero()
        return all(x == z for row in self.data for x in row)

    def __repr__(self):
        return "ExactMatrix(%r, %r)" % (self.field, self.data)

    # -- elimination --------------------------------------------------

    def rref(self):
        """Reduced row echelon form. Returns (R, pivot_columns)."""
        f = self.field
        m = self.copy_data()
        rows, cols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = None
            for i in range(r, rows):
                if m[i][c] != 0:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(inv, x) for x in m[r]]
            for i in range(rows):
                if i != r and m[i][c] != 0:
                    factor = m[i][c]
                    m[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return self._new(m, self.cols), pivots

    def rank(self):
        return len(self.rref()[1])


def solve_linear(A, b):
    """Particular solution x of A x = b, or None when b is not in the image.

    b may be an ExactMatrix column or a list; a multi-column b is solved
    column-by-column (returns the matrix X with A X = B, or None).
    """
    if not isinstance(b, ExactMatrix):
        b = ExactMatrix.column(A.field, b)
    A._check_same_field(b)
    if b.rows != A.rows:
        raise ValueError("shape mismatch: A has %d rows, b has %d" % (A.rows, b.rows))
    aug = A.hstack(b)
    R, pivots = aug.rref()
    n = A.cols
    # any pivot in the b-block means inconsistency
    for c in pivots:
        if c >= n:
            return None
    f = A.field
    out = ExactMatrix.zeros(f, n, b.cols)
    for r, c in enumerate(pivots):
        for j in range(b.cols):
            out.data[c][j] = R.data[r][n + j]
    return out


def kernel_basis(A):
    """Basis matrix (cols = basis vectors) of the null space of A."""
    R, pivots = A.rref()
    f = A.field
    n = A.cols
    free = [c for c in range(n) if c not in pivots]
    out = ExactMatrix.zeros(f, n, len(free))
    one = f.one()
    neg = f.neg
    for j, fc in enumerate(free):
        out.data[fc][j] = one
        for r, pc in enumerate(pivots):
            if R.data[r][fc] != 0:
                out.data[pc][j] = neg(R.data[r][fc])
    return out


def column_echelon(B):
    """Canonical reduced column echelon form of the column span of B
    (zero columns dropped)."""
    R, pivots = B.transpose().rref()
    kept = R.submatrix(range(len(pivots)), range(R.cols))
    return kept.transpose()


class Subspace:
    """A subspace of a coordinate space, held in canonical reduced column
    echelon form so that equal subspaces compare equal."""

    def __init__(self, ambient_dim, basis):
        if basis.rows != ambient_dim:
            raise ValueError("basis rows (%d) != ambient dim (%d)"
                             % (basis.rows, ambient_dim))
        self.ambient_dim = ambient_dim
        self.field = basis.field
        self.basis = column_echelon(basis)

    @property
    def dim(self):
        return self.basis.cols

    @staticmethod
    def zero(field, ambient_dim):
        return Subspace(ambient_dim, ExactMatrix.zeros(field, ambient_dim, 0))

    @staticmethod
    def full(field, ambient_dim):
        return Subspace(ambient_dim, ExactMatrix.identity(field, ambient_dim))

    def contains_vector(self, v):
        if not isinstance(v, ExactMatrix):
            v = ExactMatrix.column(self.field, v)
        return solve_linear(self.basis, v) is not None

    def contains(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        return all(solve_linear(self.basis, ExactMatrix.column(self.field, other.basis.col(j)))
                   is not None for j in range(other.dim))

    def sum(self, other):
        return Subspace(self.ambient_dim, self.basis.hstack(other.basis))

    def intersect(self, other):
        # x = B1 a = B2 b  <=>  (B1 | -B2)(a;b) = 0
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        K = kernel_basis(self.basis.hstack(-other.basis))
        coeffs = K.submatrix(range(self.dim), range(K.cols))
        return Subspace(self.ambient_dim, self.basis @ coeffs)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim %d of %d over %r)" % (self.dim, self.ambient_dim, self.field)


def image_subspace(A):
    """Column span of A as a Subspace."""
    return Subspace(A.rows, A)


def quotient_data(ambient_dim, S):
    """Projection/section pair presenting ambient/S.

    Returns (projection, section) with projection: ambient -> quotient,
    section: quotient -> ambient, projection @ section = identity and
    kernel(projection) = S. The complement is the coordinate complement of
    the echelon pivots of S, recorded so quotient identifications are
    reproducible.
    """
    if S.ambient_dim != ambient_dim:
        raise ValueError("subspace not inside the ambient space")
    f = S.field
    B = S.basis
    s = B.cols
    # pivot rows of the reduced column echelon basis
    pivot_rows = []
    for j in range(s):
        for i in range(ambient_dim):
            if B.data[i][j] != 0:
                pivot_rows.append(i)
                break
    comp = [i for i in range(ambient_dim) if i not in pivot_rows]
    q = len(comp)
    section = ExactMatrix.zeros(f, ambient_dim, q)
    one = f.one()
    for j, i in enumerate(comp):
        section.data[i][j] = one
    # T = [B | section] is invertible; projection = last q rows of T^{-1}
    T = B.hstack(section)
    Tinv = solve_linear(T, ExactMatrix.identity(f, ambient_dim))
    if Tinv is None or T.rows != T.cols:
        raise ValueError("degenerate subspace basis")
    projection = Tinv.submatrix(range(s, ambient_dim), range(ambient_dim))
    return projection, section


def contract_pair(phi, psi):
    """Trace contraction <phi, psi>_K for phi in E (x) K, psi in K* (x) F.

    phi is an e-by-k matrix, psi a k-by-f matrix; the result is the e-by-f
    matrix with entries sum_k phi[e][k] psi[k][f] — bilinear in both slots.
    """
    if phi.cols != psi.rows:
        raise ValueError("contraction dimension mismatch: %d vs %d"
                         % (phi.cols, psi.rows))
    return phi @ psi


def gaussian_binomial(q, n, d):
    """Number of d-dimensional subspaces of GF(q)^n."""
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(q, n, d, budget=10 ** 6):
    """All d-dimensional subspaces of GF(q)^n, one canonical representative
    each (reduced echelon form). Raises when the count exceeds the budget."""
    field = GF(q)
    count = gaussian_binomial(q, n, d)
    if count > budget:
        raise ValueError("subspace enumeration budget exceeded: %d > %d"
                         % (count, budget))
    if d == 0:
        return [Subspace.zero(field, n)]
    out = []
    for pivots in combinations(range(n), d):
        # free positions of the d-by-n reduced row echelon form with these pivots
        free = [(r, c) for r in range(d) for c in range(n)
                if c > pivots[r] and c not in pivots]
        for values in product(range(q), repeat=len(free)):
            R = ExactMatrix.zeros(field, d, n)
            for r, c in enumerate(pivots):
                R.data[r][c] = 1
            for (r, c), v in zip(free, values):
                R.data[r][c] = v
            out.append(Subspace(n, R.transpose()))
    assert len(out) == count
    return out


def enumerate_vectors(q, n):
    """All vectors of GF(q)^n as column matrices."""
    field = GF(q)
    return [ExactMatrix.column(field, list(t)) for t in product(range(q), repeat=n)]


def invertible_matrices(q, n):
    """All of GL_n(GF(q)). Only sensible for tiny q^(n^2)."""
    field = GF(q)
    out = []
    for entries in product(range(q), repeat=n * n):
        M = ExactMatrix.from_flat(field, n, n, list(entries))
        if M.rank() == n:
            out.append(M)
    return out
