"""Exact dense matrices over the rationals.

Scalars are :class:`fractions.Fraction`. :class:`Mat` is an immutable value:
every operation returns a fresh matrix and equality is exact entrywise
equality. The linear-algebra kernels here (RREF, nullspace, Bareiss
determinant, Kronecker products, centralizers) are what the solver, Riccati
and combinatorics modules are built on.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction
_ZERO = Fraction(0)

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class SingularMatrixError(ValueError):
    """An invertible matrix was required."""


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings to a Fraction.

    Floats are refused: they carry binary rounding that would silently
    poison exact results.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (optional leading ``-``, q > 0)."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"malformed rational {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Mat:
    """Immutable rows x cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e", "_hash")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(to_rational(v) for v in row) for row in entries)
        if not grid:
            raise ShapeError("a matrix needs at least one row")
        width = len(grid[0])
        if width == 0:
            raise ShapeError("a matrix needs at least one column")
        if any(len(r) != width for r in grid):
            raise ShapeError("ragged rows")
        if cols is not None and cols != width:
            raise ShapeError(f"expected {cols} columns, got {width}")
        self.rows = len(grid)
        self.cols = width
        self._e = grid
        self._hash = None

    @classmethod
    def _raw(cls, grid: tuple) -> "Mat":
        # Trusted constructor: grid is already a tuple of tuples of Fractions.
        m = object.__new__(cls)
        m.rows = len(grid)
        m.cols = len(grid[0])
        m._e = grid
        m._hash = None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        if rows < 1 or cols < 1:
            raise ShapeError("dimensions must be positive")
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        if n < 1:
            raise ShapeError("dimension must be positive")
        one, z = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, values: Sequence) -> "Mat":
        return cls([[v] for v in values])

    @classmethod
    def from_columns(cls, columns: Sequence["Mat"]) -> "Mat":
        if not columns:
            raise ShapeError("no columns given")
        h = columns[0].rows
        for c in columns:
            if c.cols != 1 or c.rows != h:
                raise ShapeError("columns must be equal-height column vectors")
        return cls._raw(tuple(tuple(c._e[i][0] for c in columns) for i in range(h)))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Mat":
        """Matrix unit with a single 1 at zero-based position (i, j)."""
        z, one = Fraction(0), Fraction(1)
        return cls._raw(tuple(tuple(one if (r, c) == (i, j) else z for c in range(n)) for r in range(n)))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._e[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._e[i]

    def col(self, j: int) -> "Mat":
        return Mat._raw(tuple((r[j],) for r in self._e))

    def columns(self) -> list["Mat"]:
        return [self.col(j) for j in range(self.cols)]

    def flat(self) -> tuple[Fraction, ...]:
        """Row-major entries."""
        return tuple(v for r in self._e for v in r)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        return Mat._raw(tuple(r[c0:c1] for r in self._e[r0:r1]))

    def transpose(self) -> "Mat":
        return Mat._raw(tuple(zip(*self._e)))

    T = property(transpose)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._e for v in r)

    def is_strictly_upper(self) -> bool:
        return all(self._e[i][j] == 0 for i in range(self.rows) for j in range(min(i + 1, self.cols)))

    def trace(self) -> Fraction:
        _require_square(self)
        return sum((self._e[i][i] for i in range(self.rows)), Fraction(0))

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        return mat_add(self, other)

    def __sub__(self, other: "Mat") -> "Mat":
        _require_same_shape(self, other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)))

    def __neg__(self) -> "Mat":
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._e))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return mat_mul(self, c)
        return mat_scale(c, self)

    def __rmul__(self, c) -> "Mat":
        return mat_scale(c, self)

    def __pow__(self, k: int) -> "Mat":
        return mat_pow(self, k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self._e == other._e

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._e)
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(v) for v in r) for r in self._e)
        return f"Mat([{body}])"

    def pretty(self) -> str:
        cells = [[format_rational(v) for v in r] for r in self._e]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells)

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_rational(v) for v in r] for r in self._e],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Mat":
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"matrix JSON needs rows, cols and entries: {exc}") from None
        if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
            raise ValueError("rows and cols must be positive integers")
        if len(entries) != rows:
            raise ValueError(f"expected {rows} rows, got {len(entries)}")
        grid = []
        for r in entries:
            if len(r) != cols:
                raise ValueError(f"expected {cols} columns per row")
            for v in r:
                if not isinstance(v, str):
                    raise ValueError(f"matrix entries must be rational strings, got {v!r}")
            grid.append([parse_rational(v) for v in r])
        return cls(grid)


def _require_square(A: Mat) -> None:
    if not A.is_square:
        raise ShapeError(f"expected a square matrix, got {A.rows}x{A.cols}")


def _require_same_shape(A: Mat, B: Mat) -> None:
    if A.shape != B.shape:
        raise ShapeError(f"shape mismatch: {A.rows}x{A.cols} vs {B.rows}x{B.cols}")


def mat_add(A: Mat, B: Mat) -> Mat:
    _require_same_shape(A, B)
    return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A._e, B._e)))


def mat_mul(A: Mat, B: Mat) -> Mat:
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    bt = tuple(zip(*B._e))
    z = Fraction(0)
    out = []
    for r in A._e:
        nz = [(k, a) for k, a in enumerate(r) if a]
        out.append(tuple(sum((a * c[k] for k, a in nz), z) for c in bt))
    return Mat._raw(tuple(out))


def mat_scale(c, A: Mat) -> Mat:
    c = to_rational(c)
    return Mat._raw(tuple(tuple(c * a for a in r) for r in A._e))


def mat_pow(A: Mat, k: int) -> Mat:
    _require_square(A)
    if k < 0:
        raise ValueError("negative powers are not supported")
    result = Mat.identity(A.rows)
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def commutator_xa(X: Mat, A: Mat) -> Mat:
    """XA - AX."""
    _require_square(X)
    _require_same_shape(X, A)
    return mat_mul(X, A) - mat_mul(A, X)


def is_nilpotent(X: Mat) -> bool:
    _require_square(X)
    return mat_pow(X, X.rows).is_zero()


def nilpotency_index(X: Mat) -> int | None:
    """Smallest m >= 1 with X^m = 0, or None if X is not nilpotent."""
    _require_square(X)
    P = X
    for m in range(1, X.rows + 1):
        if P.is_zero():
            return m
        P = mat_mul(P, X)
    return None


def charpoly(A: Mat) -> list[Fraction]:
    """Coefficients of det(tE - A), highest degree first (Faddeev-LeVerrier)."""
    _require_square(A)
    n = A.rows
    coeffs = [Fraction(1)]
    M = Mat.zeros(n)
    E = Mat.identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M) + mat_scale(coeffs[-1], E)
        c = -mat_mul(A, M).trace() / k
        coeffs.append(c)
    return coeffs


def block_diag(*blocks: Mat) -> Mat:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    z = Fraction(0)
    grid = [[z] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            grid[r0 + i][c0:c0 + b.cols] = b._e[i]
        r0 += b.rows
        c0 += b.cols
    return Mat._raw(tuple(tuple(r) for r in grid))


def hstack(*blocks: Mat) -> Mat:
    h = blocks[0].rows
    if any(b.rows != h for b in blocks):
        raise ShapeError("hstack needs equal row counts")
    return Mat._raw(tuple(tuple(v for b in blocks for v in b._e[i]) for i in range(h)))


def vstack(*blocks: Mat) -> Mat:
    w = blocks[0].cols
    if any(b.cols != w for b in blocks):
        raise ShapeError("vstack needs equal column counts")
    return Mat._raw(tuple(r for b in blocks for r in b._e))


# -- Jordan form ---------------------------------------------------------------


class JordanSpec(tuple):
    """Ordered (size, eigenvalue) blocks of a Jordan-form matrix."""

    def __new__(cls, blocks: Iterable[tuple[int, object]]):
        norm = []
        for size, lam in blocks:
            if not isinstance(size, int) or size < 1:
                raise ValueError(f"block size must be a positive integer, got {size!r}")
            norm.append((size, to_rational(lam)))
        if not norm:
            raise ValueError("a JordanSpec needs at least one block")
        return super().__new__(cls, norm)

    @property
    def n(self) -> int:
        return sum(s for s, _ in self)

    def eigenvalues(self) -> list[Fraction]:
        """Distinct eigenvalues in order of first appearance."""
        seen: list[Fraction] = []
        for _, lam in self:
            if lam not in seen:
                seen.append(lam)
        return seen

    def offsets(self) -> list[int]:
        out, o = [], 0
        for s, _ in self:
            out.append(o)
            o += s
        return out

    def __repr__(self) -> str:
        return "JordanSpec(" + ", ".join(f"J({s},{format_rational(l)})" for s, l in self) + ")"


def jordan_block(r: int, lam=0) -> Mat:
    lam = to_rational(lam)
    z, one = Fraction(0), Fraction(1)
    return Mat._raw(tuple(
        tuple(lam if i == j else one if j == i + 1 else z for j in range(r)) for i in range(r)
    ))


def jordan_matrix(spec: JordanSpec | Iterable) -> Mat:
    if not isinstance(spec, JordanSpec):
        spec = JordanSpec(spec)
    return block_diag(*(jordan_block(s, lam) for s, lam in spec))


# -- elimination -----------------------------------------------------------------


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row-echelon form and the pivot columns (zero-based)."""
    M = [list(r) for r in A._e]
    rows, cols = A.rows, A.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        Mr = M[r] = [v * inv for v in M[r]]
        nz = [j for j in range(c, cols) if Mr[j] != 0]
        for i in range(rows):
            Mi = M[i]
            if i != r and Mi[c] != 0:
                f = Mi[c]
                for j in nz:
                    Mi[j] -= f * Mr[j]
        pivots.append(c)
        r += 1
    return Mat._raw(tuple(tuple(row) for row in M)), pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def nullspace(A: Mat) -> list[Mat]:
    """Basis of {v : Av = 0}, one column vector per free column of the RREF."""
    R, pivots = rref(A)
    free = [c for c in range(A.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, f]
        basis.append(Mat.column(v))
    return basis


def in_column_space(B: Mat, v: Mat) -> bool:
    """True iff every column of v lies in the column space of B."""
    return rank(hstack(B, v)) == rank(B)


def inverse(A: Mat) -> Mat:
    _require_square(A)
    n = A.rows
    R, pivots = rref(hstack(A, Mat.identity(n)))
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R.submatrix(0, n, n, 2 * n)


def is_invertible(A: Mat) -> bool:
    return A.is_square and rank(A) == A.rows


def det(A: Mat) -> Fraction:
    """Determinant by fraction-free Bareiss elimination.

    Rows are first cleared of denominators so the elimination itself runs on
    Python integers; the row scalings are divided out at the end.
    """
    _require_square(A)
    n = A.rows
    scale = 1
    M = []
    for r in A._e:
        d = lcm(*(v.denominator for v in r))
        scale *= d
        M.append([int(v * d) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]) // prev
        prev = pk
    return Fraction(sign * M[n - 1][n - 1], scale)


def kron(A: Mat, B: Mat) -> Mat:
    return Mat._raw(tuple(
        tuple(a * b for a in ra for b in rb) for ra in A._e for rb in B._e
    ))


def sylvester_operator(A: Mat, B: Mat) -> Mat:
    """Matrix of X -> XA - BX acting on row-major vec(X)."""
    _require_square(A)
    _require_same_shape(A, B)
    n = A.rows
    N = n * n
    # same matrix as kron(E, A^T) - kron(B, E), filled in from the nonzero entries only
    out = [[_ZERO] * N for _ in range(N)]
    for i in range(n):
        for j in range(n):
            row = out[i * n + j]
            for k in range(n):
                if A._e[k][j]:
                    row[i * n + k] += A._e[k][j]
                if B._e[i][k]:
                    row[k * n + j] -= B._e[i][k]
    return Mat._raw(tuple(tuple(r) for r in out))


def sylvester_singular(A: Mat) -> bool:
    """Whether XA - AX = X has a nonzero solution.

    Decided by det of the n^2 x n^2 matrix of X -> XA - (A+E)X.
    """
    _require_square(A)
    E = Mat.identity(A.rows)
    return det(sylvester_operator(A, A + E)) == 0


def unvec(v: Mat, n: int) -> Mat:
    vals = v.flat()
    return Mat._raw(tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(n)))


def centralizer_basis(A: Mat) -> list[Mat]:
    """Basis of {S : SA = AS}."""
    _require_square(A)
    n = A.rows
    return [unvec(v, n) for v in nullspace(sylvester_operator(A, A))]


def conjugate(S: Mat, X: Mat) -> Mat:
    """S X S^-1."""
    _require_same_shape(S, X)
    try:
        Sinv = inverse(S)
    except SingularMatrixError:
        raise SingularMatrixError("conjugator S is not invertible") from None
    return mat_mul(mat_mul(S, X), Sinv)


def linear_combination(coeffs: Sequence, mats: Sequence[Mat]) -> Mat:
    if not mats:
        raise ValueError("empty combination")
    out = Mat.zeros(*mats[0].shape)
    for c, M in zip(coeffs, mats):
        c = to_rational(c)
        if c:
            out = out + mat_scale(c, M)
    return out
