"""Dense exact matrices, block structure and exact rank."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import FieldMismatch, MalformedInput, NotInvertible, ShapeMismatch
from .bipoly import BiPolynomial, gcd_bipoly
from .fields import FieldSpec

__all__ = [
    "ExactMatrix",
    "BlockMatrix",
    "rank",
    "block_column_minor",
    "random_matrix",
    "random_invertible",
]


class ExactMatrix:
    """Immutable ``rows x cols`` matrix over a :class:`FieldSpec`, row-major."""

    __slots__ = ("field", "rows", "cols", "entries", "_hash", "_rank")

    def __init__(self, field, rows, cols, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None
        self._rank = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, field, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(field, len(rows), cols, [field(x) for r in rows for x in r])

    @classmethod
    def zeros(cls, field, rows, cols=None):
        cols = rows if cols is None else cols
        z = field.zero
        return cls(field, rows, cols, [z] * (rows * cols))

    @classmethod
    def identity(cls, field, n):
        return cls.scalar(field, n, field.one)

    @classmethod
    def scalar(cls, field, n, value):
        value = field(value)
        z = field.zero
        return cls(field, n, n, [value if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def block(cls, grid):
        """Assemble a matrix from a 2-d list of equally compatible blocks."""
        field = grid[0][0].field
        out_rows = []
        for block_row in grid:
            height = block_row[0].rows
            for blk in block_row:
                if blk.rows != height:
                    raise ShapeMismatch("block heights differ within a block row")
                if blk.field != field:
                    raise FieldMismatch("blocks over different fields")
            for r in range(height):
                line = []
                for blk in block_row:
                    line.extend(blk.entries[r * blk.cols : (r + 1) * blk.cols])
                out_rows.append(line)
        width = len(out_rows[0]) if out_rows else 0
        if any(len(r) != width for r in out_rows):
            raise ShapeMismatch("block widths differ between block rows")
        return cls(field, len(out_rows), width, [x for r in out_rows for x in r])

    @classmethod
    def hstack(cls, mats, field=None, rows=None):
        mats = list(mats)
        if not mats:
            return cls(field, rows or 0, 0, [])
        return cls.block([mats])

    @classmethod
    def vstack(cls, mats):
        return cls.block([[m] for m in mats])

    # access -----------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self):
        return (self.rows, self.cols)

    def submatrix(self, row_idx, col_idx):
        row_idx, col_idx = list(row_idx), list(col_idx)
        return ExactMatrix(
            self.field,
            len(row_idx),
            len(col_idx),
            [self.entries[i * self.cols + j] for i in row_idx for j in col_idx],
        )

    def transpose(self):
        return ExactMatrix(
            self.field,
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    T = property(transpose)

    def map(self, fn, field=None):
        return ExactMatrix(field or self.field, self.rows, self.cols, [fn(x) for x in self.entries])

    # arithmetic ---------------------------------------------------------------

    def _check(self, other, same_shape=True):
        if not isinstance(other, ExactMatrix):
            raise TypeError("matrix expected")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if same_shape and self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ExactMatrix(self.field, self.rows, self.cols, [-a for a in self.entries])

    def __matmul__(self, other):
        self._check(other, same_shape=False)
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        n, m, k = self.rows, other.cols, self.cols
        a, b = self.entries, other.entries
        zero = self.field.zero
        out = []
        cols_b = [[b[t * m + j] for t in range(k)] for j in range(m)]
        for i in range(n):
            row = a[i * k : (i + 1) * k]
            nz = [(t, x) for t, x in enumerate(row) if x != 0]
            for j in range(m):
                col = cols_b[j]
                s = zero
                for t, x in nz:
                    y = col[t]
                    if y != 0:
                        s = s + x * y
                out.append(s)
        return ExactMatrix(self.field, n, m, out)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self @ other
        c = self.field(other)
        return ExactMatrix(self.field, self.rows, self.cols, [c * x for x in self.entries])

    def __rmul__(self, other):
        c = self.field(other)
        return ExactMatrix(self.field, self.rows, self.cols, [c * x for x in self.entries])

    def __pow__(self, n):
        if self.rows != self.cols:
            raise ShapeMismatch("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = ExactMatrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self.entries))
        return self._hash

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def is_identity(self):
        return self.rows == self.cols and all(
            (x == 1) if i % (self.cols + 1) == 0 else (x == 0) for i, x in enumerate(self.entries)
        )

    def trace(self):
        if self.rows != self.cols:
            raise ShapeMismatch("trace of a non-square matrix")
        s = self.field.zero
        for i in range(self.rows):
            s = s + self.entries[i * self.cols + i]
        return s

    # linear algebra -----------------------------------------------------------

    def rank(self):
        if self._rank is None:
            self._rank = rank(self)
        return self._rank

    def is_invertible(self):
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self):
        """Gauss-Jordan inverse; raises :class:`NotInvertible` on singular input."""
        if self.rows != self.cols:
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        ident = ExactMatrix.identity(self.field, n)
        try:
            return solve(self, ident)
        except NotInvertible:
            raise NotInvertible("matrix is singular") from None

    def __repr__(self):
        body = "; ".join(", ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix[{self.field}]({body})"

    # serialization --------------------------------------------------------------

    def to_json(self, block_size=None):
        data = {
            "field": self.field.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[self.field.format(x) for x in self.row(i)] for i in range(self.rows)],
        }
        if block_size is not None:
            data["block_size"] = block_size
        return data

    @classmethod
    def from_json(cls, data):
        try:
            field = FieldSpec.from_json(data["field"])
            rows, cols = int(data["rows"]), int(data["cols"])
            entries = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad matrix JSON: {exc}") from None
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise MalformedInput(f"matrix JSON entries do not match {rows}x{cols}")
        return cls(field, rows, cols, [field.parse(str(x)) for r in entries for x in r])


def solve(a, b):
    """The unique ``x`` with ``a @ x == b``; ``a`` must have full column rank.

    Raises :class:`NotInvertible` if ``a`` is column-rank deficient or the
    system is inconsistent.
    """
    if a.rows != b.rows:
        raise ShapeMismatch("row counts differ")
    n, k, m = a.rows, a.cols, b.cols
    work = [list(a.row(i)) + list(b.row(i)) for i in range(n)]
    pivot_row = 0
    for col in range(k):
        piv = next((r for r in range(pivot_row, n) if work[r][col] != 0), None)
        if piv is None:
            raise NotInvertible("coefficient matrix is rank deficient")
        work[pivot_row], work[piv] = work[piv], work[pivot_row]
        inv = 1 / work[pivot_row][col]
        work[pivot_row] = [x * inv for x in work[pivot_row]]
        for r in range(n):
            if r != pivot_row and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[pivot_row])]
        pivot_row += 1
    for r in range(k, n):
        if any(x != 0 for x in work[r][k:]):
            raise NotInvertible("linear system is inconsistent")
    return ExactMatrix(a.field, k, m, [work[i][k + j] for i in range(k) for j in range(m)])


# --- rank -------------------------------------------------------------------------


def _rank_generic(rows):
    """Plain Gaussian elimination over a field whose elements support ``/``."""
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        for i in range(r + 1, len(rows)):
            x = rows[i][c]
            if x != 0:
                f = x / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def _rank_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    nrows = len(rows)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        for i in range(r + 1, nrows):
            x = rows[i][c]
            if x:
                f = x * inv % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        r += 1
        if r == nrows:
            break
    return r


def _poly_cost(f):
    return (len(f.terms), f.total_degree)


def bareiss_rank(rows):
    """Fraction-free rank of a matrix of :class:`BiPolynomial` entries.

    Full pivoting picks the cheapest nonzero pivot at each step; every
    intermediate entry is a minor of the input, so the division by the
    previous pivot is exact.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    if not nrows or not ncols:
        return 0
    p = m[0][0].p
    prev = BiPolynomial.constant(p, 1)
    rank_ = 0
    for k in range(min(nrows, ncols)):
        best = None
        for i in range(k, nrows):
            row = m[i]
            for j in range(k, ncols):
                x = row[j]
                if x.terms:
                    cost = _poly_cost(x)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost[0] == 1 and cost[1] == 0:
                            break
            if best is not None and best[0] == (1, 0):
                break
        if best is None:
            break
        _, pi, pj = best
        m[k], m[pi] = m[pi], m[k]
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
        piv = m[k][k]
        prow = m[k]
        for i in range(k + 1, nrows):
            row = m[i]
            lead = row[k]
            for j in range(k + 1, ncols):
                if lead.terms and prow[j].terms:
                    val = piv * row[j] - lead * prow[j]
                else:
                    val = piv * row[j]
                row[j] = val.exact_div(prev) if val.terms else val
            row[k] = BiPolynomial(p, {}, _clean=True)
        prev = piv
        rank_ += 1
    return rank_


def _clear_denominators(matrix):
    """Rows of polynomials spanning the same column space (columns rescaled)."""
    p = matrix.field.p
    cols = []
    for j in range(matrix.cols):
        col = [matrix.entries[i * matrix.cols + j] for i in range(matrix.rows)]
        lcm = BiPolynomial.constant(p, 1)
        for x in col:
            if not x.is_polynomial():
                g = gcd_bipoly(lcm, x.den)
                lcm = lcm * x.den.exact_div(g)
        if lcm.is_constant():
            cols.append([x.num for x in col])
        else:
            cols.append([x.num * lcm.exact_div(x.den) for x in col])
    return [[cols[j][i] for j in range(matrix.cols)] for i in range(matrix.rows)]


def _rank_function_field(matrix):
    full = min(matrix.rows, matrix.cols)
    polys = _clear_denominators(matrix)
    p = matrix.field.p
    # Specialising l, m to points of GF(p)^2 is a ring map, so each evaluated
    # rank is a certified lower bound; a full-rank hit settles the rank.
    best = 0
    for x, y in itertools.product(range(p), repeat=2):
        vals = [[f.evaluate(x, y) for f in row] for row in polys]
        best = max(best, _rank_mod_p(vals, p))
        if best == full:
            return full
    return bareiss_rank(polys)


def rank(m):
    """Exact column rank of an :class:`ExactMatrix`."""
    if m.rows == 0 or m.cols == 0:
        return 0
    rows = [m.row(i) for i in range(m.rows)]
    kind = m.field.kind
    if kind == "Fp":
        return _rank_mod_p([[x.v for x in r] for r in rows], m.field.p)
    if kind == "Q":
        return _rank_generic(rows)
    return _rank_function_field(m)


# --- block structure ------------------------------------------------------------


@dataclass(frozen=True)
class BlockMatrix:
    """An :class:`ExactMatrix` viewed as a grid of ``c x c`` blocks."""

    base: ExactMatrix
    block_size: int

    def __post_init__(self):
        c = self.block_size
        if c < 1 or self.base.rows % c or self.base.cols % c:
            raise ShapeMismatch(f"{self.base.shape} matrix is not a grid of {c}x{c} blocks")

    @property
    def field(self):
        return self.base.field

    @property
    def block_rows(self):
        return self.base.rows // self.block_size

    @property
    def block_cols(self):
        return self.base.cols // self.block_size

    def block(self, i, j):
        c = self.block_size
        return self.base.submatrix(range(i * c, (i + 1) * c), range(j * c, (j + 1) * c))

    def block_column(self, j):
        c = self.block_size
        return self.base.submatrix(range(self.base.rows), range(j * c, (j + 1) * c))

    @classmethod
    def from_blocks(cls, grid):
        c = grid[0][0].rows
        return cls(ExactMatrix.block(grid), c)


def block_column_minor(w, columns):
    """All rows of ``w`` restricted to the chosen block columns, in index order."""
    c = w.block_size
    idx = sorted(set(columns))
    for j in idx:
        if not 0 <= j < w.block_cols:
            raise IndexError(f"block column {j} out of range 0..{w.block_cols - 1}")
    cols = [j * c + t for j in idx for t in range(c)]
    return w.base.submatrix(range(w.base.rows), cols)


# --- random sampling ---------------------------------------------------------------


def random_matrix(field, rows, cols, rng):
    return ExactMatrix(field, rows, cols, [field.random(rng) for _ in range(rows * cols)])


def random_invertible(field, n, rng):
    while True:
        m = random_matrix(field, n, n, rng)
        if m.rank() == n:
            return m
