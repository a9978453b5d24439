"""
Exact arithmetic over the Gaussian rationals Q(i).

Scalars are :class:`GaussianRational` values built on :class:`fractions.Fraction`,
vectors are plain tuples of scalars, and :class:`Matrix` is an immutable dense
row-major matrix.  Every zero test in this module is exact.

>>> x = GaussianRational(1, 2)
>>> x * x.conjugate()
GaussianRational('5')
>>> rref(Matrix.from_rows([[1, 2], [2, 4]]))[1:]
(1, [0])
"""

import re
from fractions import Fraction
from numbers import Rational

from .errors import ShapeMismatch, SingularMatrix

__all__ = [
    "GaussianRational", "Matrix", "EchelonForm",
    "gr", "parse_scalar", "format_scalar",
    "rref", "rank", "kernel_basis", "inverse", "determinant",
    "zero_vector", "unit_vector", "vec_add", "vec_sub", "vec_scale",
    "vec_is_zero", "block_diag",
]

_FRAC_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


class GaussianRational:
    """A complex number whose real and imaginary parts are rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _new(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def _coerce(other):
        if type(other) is GaussianRational:
            return other
        if isinstance(other, (int, Rational)):
            return GaussianRational._new(Fraction(other), _ZERO_Q)
        if isinstance(other, complex):
            raise TypeError("floating-point complex values are not exact")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._new(a * c, _ZERO_Q)
        return GaussianRational._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def reciprocal(self):
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational._new(1 / a, _ZERO_Q)
        d = a * a + b * b
        return GaussianRational._new(a / d, -b / d)

    def conjugate(self):
        return GaussianRational._new(self.re, -self.im)

    def abs2(self):
        """Squared modulus, an exact nonnegative Fraction."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        # float(Fraction) rounds to nearest
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational('{format_scalar(self)}')"

    def __str__(self):
        return format_scalar(self)


_ZERO_Q = Fraction(0)
ZERO = GaussianRational._new(_ZERO_Q, _ZERO_Q)
ONE = GaussianRational._new(Fraction(1), _ZERO_Q)


def gr(x):
    """Convert an int, Fraction, literal string or GaussianRational to a scalar."""
    if type(x) is GaussianRational:
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    o = GaussianRational._coerce(x)
    if o is None:
        raise TypeError(f"cannot convert {x!r} to an exact scalar")
    return o


def parse_scalar(text):
    """Parse ``a``, ``a/b``, ``a/b+c/di``, ``c/di``, ``i`` or ``-i``.

    Raises ValueError on anything else (including whitespace).
    """
    s = text
    if not s or s != s.strip() or " " in s:
        raise ValueError(f"malformed scalar literal {text!r}")
    if not s.endswith("i"):
        return GaussianRational(_parse_fraction(s, text))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        re_part, im_part = body[:cut], body[cut:]
        re_val = _parse_fraction(re_part, text)
    else:
        re_val, im_part = Fraction(0), body
    if im_part in ("", "+"):
        im_val = Fraction(1)
    elif im_part == "-":
        im_val = Fraction(-1)
    else:
        im_val = _parse_fraction(im_part, text)
    return GaussianRational(re_val, im_val)


def _parse_fraction(s, text):
    if not _FRAC_RE.fullmatch(s):
        raise ValueError(f"malformed scalar literal {text!r}")
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_scalar(x):
    """Inverse of :func:`parse_scalar`; produces the canonical literal."""
    x = gr(x)
    re_, im = x.re, x.im
    if not im:
        return str(re_)
    if im == 1:
        im_s = "i"
    elif im == -1:
        im_s = "-i"
    else:
        im_s = f"{im}i"
    if not re_:
        return im_s
    if im_s.startswith("-"):
        return f"{re_}{im_s}"
    return f"{re_}+{im_s}"


# ---------------------------------------------------------------- vectors

def zero_vector(n):
    return (ZERO,) * n


def unit_vector(n, i):
    return tuple(ONE if r == i else ZERO for r in range(n))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    c = gr(c)
    return tuple(c * a for a in v)


def vec_is_zero(v):
    return not any(v)


# ---------------------------------------------------------------- matrices

class Matrix:
    """Immutable dense matrix over Q(i), stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(gr(e) for e in entries)
        if len(entries) != rows * cols:
            raise ShapeMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def _raw(cls, rows, cols, entries):
        obj = object.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj.entries = tuple(entries)
        return obj

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("ragged rows")
        return cls(len(rows), ncols, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns, nrows=None):
        columns = [tuple(gr(e) for e in c) for c in columns]
        if nrows is None:
            nrows = len(columns[0]) if columns else 0
        if any(len(c) != nrows for c in columns):
            raise ShapeMismatch("columns of unequal length")
        ncols = len(columns)
        return cls._raw(nrows, ncols,
                        [columns[j][i] for i in range(nrows) for j in range(ncols)])

    @classmethod
    def identity(cls, n):
        return cls._raw(n, n, [ONE if i == j else ZERO
                               for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def diag(cls, values):
        values = [gr(v) for v in values]
        n = len(values)
        return cls._raw(n, n, [values[i] if i == j else ZERO
                               for i in range(n) for j in range(n)])

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j):
        return self.entries[j::self.cols]

    def to_lists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return Matrix._raw(self.cols, self.rows,
                           [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def conjugate_transpose(self):
        return Matrix._raw(self.cols, self.rows,
                           [self[i, j].conjugate()
                            for j in range(self.cols) for i in range(self.rows)])

    def is_zero(self):
        return not any(self.entries)

    def apply(self, v):
        """Matrix-vector product for a tuple ``v``."""
        if len(v) != self.cols:
            raise ShapeMismatch(f"cannot apply {self.rows}x{self.cols} matrix to length {len(v)}")
        out = []
        c = self.cols
        e = self.entries
        nz = [(j, x) for j, x in enumerate(v) if x]
        for i in range(self.rows):
            base = i * c
            acc = ZERO
            for j, x in nz:
                a = e[base + j]
                if a:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = [self.apply(other.col(j)) for j in range(other.cols)]
            return Matrix._raw(self.rows, other.cols,
                               [cols[j][i] for i in range(self.rows)
                                for j in range(other.cols)])
        if isinstance(other, tuple):
            return self.apply(other)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return Matrix._raw(self.rows, self.cols,
                           [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix._raw(self.rows, self.cols,
                           [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return Matrix._raw(self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        c = gr(c)
        return Matrix._raw(self.rows, self.cols, [c * a for a in self.entries])

    __rmul__ = __mul__

    def __pow__(self, k):
        if not self.is_square or k < 0:
            raise ValueError("only nonnegative powers of square matrices")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def to_numpy(self):
        import numpy as np
        return np.array([complex(x) for x in self.entries],
                        dtype=complex).reshape(self.rows, self.cols)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in self.row(i)) + "]"
                         for i in range(self.rows))
        return f"Matrix([{body}])"

    def __str__(self):
        cells = [[format_scalar(x) for x in self.row(i)] for i in range(self.rows)]
        width = max((len(c) for r in cells for c in r), default=0)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in r) + "]" for r in cells)


def block_diag(*mats):
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = [ZERO] * (n * c)
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[(r0 + i) * c + c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return Matrix._raw(n, c, out)


# ---------------------------------------------------------------- elimination

def _rref_rows(rows, ncols):
    """In-place RREF on a list of lists. Returns the pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = prow[c].reciprocal()
        if inv != ONE:
            prow = rows[r] = [x * inv if x else x for x in prow]
        nz = [(j, prow[j]) for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    row = rows[i]
                    for j, x in nz:
                        row[j] = row[j] - f * x
        pivots.append(c)
        r += 1
    return pivots


def rref(M):
    """Reduced row echelon form ``(R, rank, pivots)``.

    Pivots are chosen as the first nonzero entry at or below the current row,
    scanning columns left to right.
    """
    rows = [list(M.row(i)) for i in range(M.rows)]
    pivots = _rref_rows(rows, M.cols)
    R = Matrix._raw(M.rows, M.cols, [x for r in rows for x in r])
    return R, len(pivots), pivots


def rank(M):
    return rref(M)[1]


def kernel_basis(M):
    """Basis of ``{v : M v = 0}``, one vector per free column in index order."""
    R, _, pivots = rref(M)
    n = M.cols
    pivot_set = set(pivots)
    basis = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(pivots):
            x = R[i, f]
            if x:
                v[p] = -x
        basis.append(tuple(v))
    return basis


def inverse(M):
    if not M.is_square:
        raise ShapeMismatch("inverse of a non-square matrix")
    n = M.rows
    rows = [list(M.row(i)) + [ONE if i == j else ZERO for j in range(n)]
            for i in range(n)]
    pivots = _rref_rows(rows, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular")
    return Matrix._raw(n, n, [x for r in rows for x in r[n:]])


def determinant(M):
    """Exact determinant by Gaussian elimination with first-nonzero pivoting."""
    if not M.is_square:
        raise ShapeMismatch("determinant of a non-square matrix")
    n = M.rows
    rows = [list(M.row(i)) for i in range(n)]
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = piv.reciprocal()
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                ri, rc = rows[i], rows[c]
                for j in range(c + 1, n):
                    if rc[j]:
                        ri[j] = ri[j] - f * rc[j]
    return det


class EchelonForm:
    """Incrementally maintained echelon basis for exact span-membership tests.

    Rows are kept with a unit pivot; each new row is reduced against all
    earlier ones before it is stored, so sequential reduction is valid.
    """

    def __init__(self, n):
        self.n = n
        self._rows = []

    def __len__(self):
        return len(self._rows)

    def reduce(self, v):
        v = list(v)
        for p, row in self._rows:
            f = v[p]
            if f:
                for j in range(p, self.n):
                    if row[j]:
                        v[j] = v[j] - f * row[j]
        return v

    def contains(self, v):
        return not any(self.reduce(v))

    def add(self, v):
        """Insert ``v``; return True if it enlarged the span."""
        r = self.reduce(v)
        p = next((j for j, x in enumerate(r) if x), None)
        if p is None:
            return False
        inv = r[p].reciprocal()
        self._rows.append((p, [x * inv if x else x for x in r]))
        return True
