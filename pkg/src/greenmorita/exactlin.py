"""Exact sparse linear algebra over Q (arbitrary precision) and prime fields.

Everything downstream sits on this layer, so the conventions fixed here are
global for the whole package:

* vectors are COLUMN vectors, stored sparsely as ``{index: nonzero scalar}``;
* ``Mat`` is row-sparse (``data[i]`` is row ``i``); semantics are dense;
* tensor/Kronecker indexing is lexicographic: a pair ``(i, j)`` ranging over
  an ``(m, n)``-indexed product maps to the flat index ``i*n + j``.  Every
  tensor-style construction in the package (kron, tensor products of
  algebras, bimodule carriers) uses this one rule.

Scalars are raw ``gmpy2.mpq`` values (rationals, always normalized) or plain
ints in ``[0, p)`` for a prime field; arithmetic goes through a field object
so hot loops can bind the operations locally.
"""

from __future__ import annotations

import heapq
from gmpy2 import mpq


class FieldMismatch(ValueError):
    pass


class CharacteristicError(ValueError):
    """Raised when an operation requires characteristic 0 but got F_p."""


class RationalField:
    """The field Q.  Elements are gmpy2.mpq, kept in lowest terms by gmpy2."""

    char = 0
    name = "q"

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def of(self, x):
        return mpq(x)

    def of_pair(self, num, den):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(num, den)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b

    def inv(self, a):
        return 1 / a

    def parse(self, s):
        return mpq(s)

    def fmt(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


class PrimeField:
    """F_p for a prime p < 2**31.  Elements are ints in [0, p)."""

    name_prefix = "fp"

    def __init__(self, p):
        if p < 2 or p >= 2**31:
            raise ValueError(f"prime field order out of range: {p}")
        for d in range(2, min(p, 1 + int(p**0.5) + 1)):
            if p % d == 0:
                raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.name = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def of(self, x):
        return int(x) % self.p

    def of_pair(self, num, den):
        return self.mul(self.of(num), self.inv(self.of(den)))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, s):
        if "/" in s:
            num, den = s.split("/")
            return self.of_pair(int(num), int(den))
        return self.of(int(s))

    def fmt(self, a):
        return str(a)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


QQ = RationalField()


def field_by_name(name):
    """Parse a field tag: 'q' for the rationals, 'fp:<p>' for a prime field."""
    name = name.strip().lower()
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise ValueError(f"unknown field tag {name!r} (expected 'q' or 'fp:<p>')")


def require_char_zero(field, what):
    if field.char != 0:
        raise CharacteristicError(f"{what} requires characteristic 0")


# ---------------------------------------------------------------------------
# sparse column vectors: {index: nonzero scalar}

def vec_scale(field, v, c):
    if c == field.zero:
        return {}
    mul = field.mul
    return {k: mul(c, x) for k, x in v.items()}


def vec_axpy(field, acc, c, v):
    """acc += c*v, mutating and returning acc (entries kept nonzero)."""
    if c == field.zero:
        return acc
    add, mul, zero = field.add, field.mul, field.zero
    for k, x in v.items():
        s = add(acc.get(k, zero), mul(c, x))
        if s == zero:
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


def vec_sub(field, u, v):
    out = dict(u)
    return vec_axpy(field, out, field.neg(field.one), v)


def vec_dot(field, u, v):
    if len(v) < len(u):
        u, v = v, u
    add, mul, zero = field.add, field.mul, field.zero
    s = zero
    for k, x in u.items():
        y = v.get(k)
        if y is not None:
            s = add(s, mul(x, y))
    return s


def vec_shift(v, offset):
    return {k + offset: x for k, x in v.items()}


def vec_equal(u, v):
    return u == v


# ---------------------------------------------------------------------------

class Mat:
    """Immutable-by-convention sparse matrix over one field.

    Stored row-major; a lazily built column index backs ``apply`` so that
    matrix-vector products cost O(nnz of the touched columns).
    """

    __slots__ = ("rows", "cols", "field", "data", "_colcache")

    def __init__(self, rows, cols, field, data=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.data = data if data is not None else [dict() for _ in range(rows)]
        self._colcache = None

    # -- constructors

    @staticmethod
    def zeros(rows, cols, field):
        return Mat(rows, cols, field)

    @staticmethod
    def identity(n, field):
        one = field.one
        return Mat(n, n, field, [{i: one} for i in range(n)])

    @staticmethod
    def from_dense(entries, field):
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = []
        zero = field.zero
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged rows")
            row = {}
            for j, x in enumerate(r):
                x = field.of(x) if not isinstance(x, type(zero)) else x
                if x != zero:
                    row[j] = x
            data.append(row)
        return Mat(rows, cols, field, data)

    @staticmethod
    def from_columns(cols_list, rows, field):
        data = [dict() for _ in range(rows)]
        for j, col in enumerate(cols_list):
            for i, x in col.items():
                data[i][j] = x
        return Mat(rows, len(cols_list), field, data)

    # -- accessors

    def entry(self, i, j):
        return self.data[i].get(j, self.field.zero)

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return dict(self._columns()[j])

    def _columns(self):
        if self._colcache is None:
            cols = [dict() for _ in range(self.cols)]
            for i, row in enumerate(self.data):
                for j, x in row.items():
                    cols[j][i] = x
            self._colcache = cols
        return self._colcache

    def columns_iter(self):
        for j in range(self.cols):
            yield dict(self._columns()[j])

    def to_dense(self):
        zero = self.field.zero
        return [[self.data[i].get(j, zero) for j in range(self.cols)]
                for i in range(self.rows)]

    def is_zero(self):
        return all(not row for row in self.data)

    def nnz(self):
        return sum(len(r) for r in self.data)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.rows == other.rows
                and self.cols == other.cols and self.field == other.field
                and self.data == other.data)

    def __hash__(self):
        raise TypeError("Mat is not hashable")

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols} over {self.field!r}, nnz={self.nnz()})"

    # -- arithmetic

    def _check_field(self, other):
        if self.field != other.field:
            raise FieldMismatch("mixed field tags")

    def mul(self, other):
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * "
                             f"{other.rows}x{other.cols}")
        field = self.field
        out = []
        odata = other.data
        for row in self.data:
            acc = {}
            for k, c in row.items():
                vec_axpy(field, acc, c, odata[k])
            out.append(acc)
        return Mat(self.rows, other.cols, field, out)

    def apply(self, v):
        """Matrix times sparse column vector."""
        field = self.field
        cols = self._columns()
        acc = {}
        for j, c in v.items():
            vec_axpy(field, acc, c, cols[j])
        return acc

    def apply_rowvec(self, v):
        """Sparse row vector times matrix."""
        field = self.field
        acc = {}
        for i, c in v.items():
            vec_axpy(field, acc, c, self.data[i])
        return acc

    def add(self, other):
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        field = self.field
        out = []
        for r1, r2 in zip(self.data, other.data):
            acc = dict(r1)
            vec_axpy(field, acc, field.one, r2)
            out.append(acc)
        return Mat(self.rows, self.cols, field, out)

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one)))

    def scale(self, c):
        field = self.field
        return Mat(self.rows, self.cols, field,
                   [vec_scale(field, r, c) for r in self.data])

    def t(self):
        out = [dict() for _ in range(self.cols)]
        for i, row in enumerate(self.data):
            for j, x in row.items():
                out[j][i] = x
        return Mat(self.cols, self.rows, self.field, out)


def hstack(mats):
    mats = list(mats)
    if not mats:
        raise ValueError("hstack of nothing")
    rows, field = mats[0].rows, mats[0].field
    data = [dict() for _ in range(rows)]
    off = 0
    for m in mats:
        if m.rows != rows or m.field != field:
            raise ValueError("hstack mismatch")
        for i, row in enumerate(m.data):
            for j, x in row.items():
                data[i][j + off] = x
        off += m.cols
    return Mat(rows, off, field, data)


def vstack(mats):
    mats = list(mats)
    if not mats:
        raise ValueError("vstack of nothing")
    cols, field = mats[0].cols, mats[0].field
    data = []
    for m in mats:
        if m.cols != cols or m.field != field:
            raise ValueError("vstack mismatch")
        data.extend(dict(r) for r in m.data)
    return Mat(len(data), cols, field, data)


def kron(a, b):
    """Kronecker product with the package-wide lexicographic convention:
    kron(a, b)[i*b.rows + k, j*b.cols + l] = a[i, j] * b[k, l].
    """
    a._check_field(b)
    field = a.field
    mul = field.mul
    data = []
    for arow in a.data:
        for brow in b.data:
            row = {}
            for j, x in arow.items():
                base = j * b.cols
                for l, y in brow.items():
                    row[base + l] = mul(x, y)
            data.append(row)
    return Mat(a.rows * b.rows, a.cols * b.cols, field, data)


# ---------------------------------------------------------------------------

class Echelon:
    """Incremental forward Gaussian elimination over a fixed column space.

    Rows are kept with their leading (pivot) coefficient normalized to 1 and
    support contained in [pivot, ncols).  ``reduce`` is canonical: the
    residual of v is the unique vector congruent to v modulo the row span
    whose support avoids all pivot columns.  Insertion order only affects
    internal row choices, never the reduce map or the pivot set.
    """

    __slots__ = ("field", "ncols", "rows")

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows = {}  # pivot col -> row dict, row[pivot] == 1

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def free_columns(self):
        return [j for j in range(self.ncols) if j not in self.rows]

    def reduce(self, vec):
        """Return the canonical residual of vec modulo the current row span."""
        field = self.field
        zero, sub, mul = field.zero, field.sub, field.mul
        rows = self.rows
        v = {k: x for k, x in vec.items() if x != zero}
        heap = list(v)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            coeff = v.get(c)
            if coeff is None:
                continue
            row = rows.get(c)
            if row is None:
                continue
            del v[c]
            for j, x in row.items():
                if j == c:
                    continue
                cur = v.get(j)
                if cur is None:
                    v[j] = sub(zero, mul(coeff, x))
                    heapq.heappush(heap, j)
                else:
                    s = sub(cur, mul(coeff, x))
                    if s == zero:
                        del v[j]
                    else:
                        v[j] = s
        return v

    def add(self, vec):
        """Insert vec's residual; return its pivot column, or None if spanned."""
        r = self.reduce(vec)
        if not r:
            return None
        p = min(r)
        inv = self.field.inv(r[p])
        if inv != self.field.one:
            mul = self.field.mul
            r = {k: mul(inv, x) for k, x in r.items()}
        self.rows[p] = r
        return p

    def contains(self, vec):
        return not self.reduce(vec)

    def extend(self, vecs):
        for v in vecs:
            self.add(v)
        return self

    def kernel_columns(self):
        """Basis of the null space of the fed row set, one column per free
        column, in ascending free-column order."""
        field = self.field
        div, sub, mul, zero = field.div, field.sub, field.mul, field.zero
        pivs = sorted(self.rows, reverse=True)
        out = []
        for f in self.free_columns():
            x = {f: field.one}
            for p in pivs:
                if p > f:
                    continue
                row = self.rows[p]
                s = zero
                for j, c in row.items():
                    if j == p:
                        continue
                    xv = x.get(j)
                    if xv is not None:
                        s = field.add(s, mul(c, xv))
                if s != zero:
                    x[p] = sub(zero, div(s, row[p]))
            out.append(x)
        return out

    def echelon_rows(self):
        """The current rows, sorted by pivot column (reduced residual form)."""
        return [dict(self.rows[p]) for p in sorted(self.rows)]


def span_echelon(vectors, ncols, field):
    e = Echelon(field, ncols)
    e.extend(vectors)
    return e


def rref(m):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where R has m's shape, rows sorted by pivot with
    zero rows at the bottom, each pivot normalized to 1 and alone in its
    column.  rank == len(pivots).
    """
    field = m.field
    ech = Echelon(field, m.cols)
    for row in m.data:
        ech.add(row)
    pivs = ech.pivots()
    # back-substitute to reduced form
    reduced = {}
    for p in reversed(pivs):
        row = dict(ech.rows[p])
        acc = {p: field.one}
        for j in sorted(row):
            if j == p:
                continue
            if j in reduced:
                vec_axpy(field, acc, row[j], reduced[j])
            elif row[j] != field.zero:
                acc[j] = row[j]
        reduced[p] = acc
    data = [reduced[p] for p in pivs]
    data += [dict() for _ in range(m.rows - len(pivs))]
    return Mat(m.rows, m.cols, field, data), pivs


def rank(m):
    ech = Echelon(m.field, m.cols)
    for row in m.data:
        ech.add(row)
    return ech.rank


def kernel_basis(m):
    """Columns span {v : m @ v = 0}; column count is m.cols - rank(m)."""
    ech = Echelon(m.field, m.cols)
    for row in m.data:
        ech.add(row)
    cols = ech.kernel_columns()
    return Mat.from_columns(cols, m.cols, m.field)


class SolveContext:
    """Repeated-solve context for one matrix: solve m @ x = b for many b.

    Feeds columns of m augmented with unit tags into one Echelon; a right
    hand side is solvable iff its residual is supported entirely on the tag
    block, and the tags then read off a particular solution.
    """

    __slots__ = ("m", "ech")

    def __init__(self, m):
        self.m = m
        self.ech = Echelon(m.field, m.rows + m.cols)
        for j in range(m.cols):
            v = dict(m._columns()[j])
            v[m.rows + j] = m.field.one
            self.ech.add(v)

    def solve_vec(self, b):
        """A particular solution of m @ x = b as a sparse dict, or None."""
        r = self.ech.reduce(dict(b))
        off = self.m.rows
        neg = self.m.field.neg
        x = {}
        for k, v in r.items():
            if k < off:
                return None
            x[k - off] = neg(v)
        return x

    def solve_mat(self, b):
        if b.rows != self.m.rows:
            raise ValueError("shape mismatch in solve")
        cols = []
        for j in range(b.cols):
            x = self.solve_vec(b._columns()[j])
            if x is None:
                return None
            cols.append(x)
        return Mat.from_columns(cols, self.m.cols, self.m.field)


def solve(m, b):
    """Some x with m @ x = b, or None.  The result is verified by exact
    substitution before being returned."""
    if m.field != b.field:
        raise FieldMismatch("mixed field tags")
    if m.rows != b.rows:
        raise ValueError("shape mismatch in solve")
    x = SolveContext(m).solve_mat(b)
    if x is None:
        return None
    assert m.mul(x) == b, "solver postcondition violated"
    return x


def invert(m):
    """Inverse of a square matrix, or None if singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    x = SolveContext(m).solve_mat(Mat.identity(m.rows, m.field))
    if x is None:
        return None
    if m.mul(x) != Mat.identity(m.rows, m.field):
        return None
    if x.mul(m) != Mat.identity(m.rows, m.field):
        return None
    return x
