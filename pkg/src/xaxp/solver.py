"""Solutions of XA - AX = X^p.

For a full Jordan block A = J(n) every solution is strictly upper triangular
and is determined by its first row; :func:`solve_full_jordan` fills in the
remaining entries band by band. The other functions here test existence,
build the bidiagonal special solution, conjugate a p = 2 solution back to it,
and check the structural facts every solution must satisfy.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exactmat import (
    JordanSpec,
    Mat,
    ShapeError,
    block_diag,
    centralizer_basis,
    commutator_xa,
    conjugate,
    format_rational,
    in_column_space,
    is_invertible,
    is_nilpotent,
    jordan_block,
    jordan_matrix,
    linear_combination,
    mat_mul,
    mat_pow,
    nilpotency_index,
    nullspace,
    parse_rational,
    to_rational,
)


class SolverError(ValueError):
    """Base class for solver failures."""


class DomainError(SolverError):
    """Exponent or dimension outside the supported range."""


class SingularParameterError(SolverError):
    """A free parameter hits a pole of the p = 2 recursion."""


class NoWitnessError(SolverError):
    """No Jordan block of size >= 2, so only X = 0 solves the equation."""


class NotNormalizableError(SolverError):
    """The solution cannot be conjugated to the special solution."""


class PreconditionError(SolverError):
    """Input does not satisfy the operation's precondition."""


class CatalogVerificationError(SolverError):
    """A catalogued solution family failed to verify."""


def residual(A: Mat, X: Mat, p: int) -> Mat:
    """XA - AX - X^p."""
    if p < 1:
        raise DomainError("p must be >= 1")
    return commutator_xa(X, A) - mat_pow(X, p)


def is_solution(A: Mat, X: Mat, p: int) -> bool:
    return residual(A, X, p).is_zero()


# -- existence ---------------------------------------------------------------------


def has_only_trivial_solution(spec: JordanSpec, p: int) -> bool:
    """True iff X = 0 is the only solution, i.e. A has no multiple eigenvalue."""
    if p < 2:
        raise DomainError("p must be >= 2")
    spec = JordanSpec(spec)
    if any(size > 1 for size, _ in spec):
        return False
    lams = [lam for _, lam in spec]
    return len(set(lams)) == len(lams)


def nontrivial_witness(spec: JordanSpec, p: int) -> Mat:
    """A nonzero solution when A has a multiple eigenvalue.

    Uses the first block of size r >= 2 and puts a single 1 in its top-right
    corner; that matrix commutes with the block and squares to zero. Two
    equal 1x1 eigenvalues are handled by the same corner trick on the 2x2
    scalar submatrix they span.
    """
    spec = JordanSpec(spec)
    n = spec.n
    offsets = spec.offsets()
    for (size, _), off in zip(spec, offsets):
        if size >= 2:
            X = Mat.unit(n, off, off + size - 1)
            break
    else:
        seen: dict[Fraction, int] = {}
        for (_, lam), off in zip(spec, offsets):
            if lam in seen:
                X = Mat.unit(n, seen[lam], off)
                break
            seen[lam] = off
        else:
            raise NoWitnessError(f"{spec!r} has no multiple eigenvalue; X = 0 is the only solution")
    assert is_solution(jordan_matrix(spec), X, p)
    return X


# -- full Jordan block -----------------------------------------------------------------


@dataclass(frozen=True)
class FreeAssignment:
    """First-row values x_{1,2}, ..., x_{1,n} for A = J(n)."""

    n: int
    p: int
    values: Mapping[int, Fraction]

    def __post_init__(self):
        if not (1 < self.p < self.n):
            raise DomainError(f"need 1 < p < n, got p={self.p}, n={self.n}")
        vals = {int(k): to_rational(v) for k, v in dict(self.values).items()}
        if sorted(vals) != list(range(2, self.n + 1)):
            raise ValueError(f"free values must be given for exactly the indices 2..{self.n}")
        object.__setattr__(self, "values", vals)
        if self.p == 2:
            x12 = vals[2]
            for k in range(1, self.n - 1):
                if 1 + k * x12 == 0:
                    raise SingularParameterError(
                        f"x_12 = {format_rational(x12)} makes 1+{k}*x_12 vanish"
                    )

    @classmethod
    def from_list(cls, p: int, first_row) -> "FreeAssignment":
        vals = list(first_row)
        return cls(len(vals) + 1, p, {j: v for j, v in enumerate(vals, start=2)})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "free": {str(k): format_rational(v) for k, v in sorted(self.values.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FreeAssignment":
        return cls(
            int(obj["n"]),
            int(obj["p"]),
            {int(k): parse_rational(v) for k, v in obj["free"].items()},
        )


@dataclass(frozen=True)
class SolutionReport:
    X: Mat
    residual: Mat
    nilpotency_index: int | None
    strictly_upper: bool

    @property
    def residual_zero(self) -> bool:
        return self.residual.is_zero()

    def to_json(self) -> dict:
        return {
            "x": self.X.to_json(),
            "residual_zero": self.residual_zero,
            "nilpotency_index": self.nilpotency_index,
            "strictly_upper": self.strictly_upper,
        }


def report(A: Mat, X: Mat, p: int) -> SolutionReport:
    return SolutionReport(X, residual(A, X, p), nilpotency_index(X), X.is_strictly_upper())


def _band_solve(assign: FreeAssignment) -> list[list[Fraction]]:
    n, p, free = assign.n, assign.p, assign.values
    zero = Fraction(0)
    # zero-based: x[i][j] is x_{i+1,j+1}
    x = [[zero] * n for _ in range(n)]
    for j in range(1, n):
        x[0][j] = free[j + 1]

    def power_entry(i: int, j: int, q: int) -> Fraction:
        # (X^q)_{ij} for strictly upper X, using only entries strictly inside bands < j-i
        if q == 1:
            return x[i][j]
        return sum((x[i][l] * power_entry(l, j, q - 1) for l in range(i + 1, j - q + 2)), zero)

    for b in range(1, n - 1):
        for i in range(0, n - 1 - b):
            j = i + 1 + b
            if p == 2:
                pivot = 1 + x[i][i + 1]
                if pivot == 0:
                    raise SingularParameterError(
                        f"pivot 1+x_{{{i + 1},{i + 2}}} vanishes; "
                        f"the denominator 1+{i + 1}*x_12 is zero at x_12 = {format_rational(free[2])}"
                    )
                rhs = x[i][j - 1] - sum((x[i][l] * x[l][j] for l in range(i + 2, j)), zero)
                x[i + 1][j] = rhs / pivot
            else:
                x[i + 1][j] = x[i][j - 1] - power_entry(i, j, p)
    return x


def solve_full_jordan(assign: FreeAssignment) -> SolutionReport:
    """The unique solution for A = J(n) with the given first row.

    Bands j - i are filled in increasing order, rows top-down within a band.
    Entry (i+1, j) comes from the (i, j) equation x_{i,j-1} - x_{i+1,j} =
    (X^p)_{i,j}. For p >= 3 the right side only involves earlier bands; for
    p = 2 the unknown appears once with coefficient x_{i,i+1} and is divided
    out.
    """
    X = Mat(_band_solve(assign))
    rep = report(jordan_block(assign.n), X, assign.p)
    if not rep.residual_zero:
        raise AssertionError("band recursion produced a nonzero residual")
    return rep


def x0_special(n: int, alpha) -> Mat:
    """Bidiagonal p = 2 solution for J(n), superdiagonal alpha/(1 + k*alpha)."""
    if n < 3:
        raise DomainError("x0_special needs n >= 3")
    alpha = to_rational(alpha)
    for k in range(1, n - 1):
        if 1 + k * alpha == 0:
            raise SingularParameterError(f"1+{k}*alpha vanishes at alpha = {format_rational(alpha)}")
    grid = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n - 1):
        grid[k][k + 1] = alpha / (1 + k * alpha)
    return Mat(grid)


def normalize_to_x0(X: Mat) -> Mat:
    """A conjugator S in C(J(n)) with S X0 S^-1 = X, X0 = x0_special(n, x_12).

    Solves S X0 = X S over S = c_1 E + c_2 A + ... + c_n A^(n-1) and takes a
    solution with c_1 != 0 (S is then invertible, being upper triangular with
    c_1 on the diagonal).
    """
    if not X.is_square:
        raise ShapeError("X must be square")
    n = X.rows
    A = jordan_block(n)
    if not is_solution(A, X, 2):
        raise PreconditionError("X does not solve XA - AX = X^2 for A = J(n)")
    alpha = X[0, 1]
    if alpha == 0:
        raise NotNormalizableError(
            "x_12 = 0: such a solution is not conjugate to the special solution"
        )
    if n < 3:
        # J(2): the only solutions with x_12 != 0 are X itself
        return Mat.identity(n)
    X0 = x0_special(n, alpha)
    powers = [mat_pow(A, k) for k in range(n)]
    # column k of the system: vec(A^k X0 - X A^k)
    cols = [(mat_mul(P, X0) - mat_mul(X, P)).flat() for P in powers]
    system = Mat([[cols[k][r] for k in range(n)] for r in range(n * n)])
    for v in nullspace(system):
        c = v.flat()
        if c[0] != 0:
            S = linear_combination(c, powers)
            assert conjugate(S, X0) == X
            return S
    raise SolverError("no invertible centralizer conjugator found; this should be unreachable")


# -- structural checks -----------------------------------------------------------------


def generalized_eigenspace(A: Mat, lam) -> list[Mat]:
    n = A.rows
    shifted = A - to_rational(lam) * Mat.identity(n)
    return nullspace(mat_pow(shifted, n))


def eigenspace(A: Mat, lam) -> list[Mat]:
    return nullspace(A - to_rational(lam) * Mat.identity(A.rows))


def subspace_is_invariant(X: Mat, basis: list[Mat]) -> bool:
    """X span(basis) is contained in span(basis), by exact rank test."""
    if not basis:
        return True
    B = Mat.from_columns(basis)
    return in_column_space(B, mat_mul(X, B))


def check_generalized_eigenspace_invariance(spec: JordanSpec, X: Mat, p: int) -> bool:
    spec = JordanSpec(spec)
    A = jordan_matrix(spec)
    if not (1 < p < A.rows):
        raise DomainError(f"need 1 < p < n, got p={p}, n={A.rows}")
    if not is_solution(A, X, p):
        raise PreconditionError("X does not solve the equation")
    return all(
        subspace_is_invariant(X, generalized_eigenspace(A, lam)) for lam in spec.eigenvalues()
    )


def check_block_split(spec: JordanSpec, split: int, X: Mat, p: int) -> bool:
    """Block-diagonality of X when blocks [:split] and [split:] share no eigenvalue."""
    spec = JordanSpec(spec)
    if not (0 < split < len(spec)):
        raise PreconditionError("split must leave at least one block in each group")
    first, second = JordanSpec(spec[:split]), JordanSpec(spec[split:])
    if set(first.eigenvalues()) & set(second.eigenvalues()):
        raise PreconditionError("the two block groups share an eigenvalue")
    A = jordan_matrix(spec)
    n, r = A.rows, first.n
    if not (1 < p < n):
        raise DomainError(f"need 1 < p < n, got p={p}, n={n}")
    if not is_solution(A, X, p):
        raise PreconditionError("X does not solve the equation")
    if not (X.submatrix(0, r, r, n).is_zero() and X.submatrix(r, n, 0, r).is_zero()):
        return False
    X1, X2 = X.submatrix(0, r, 0, r), X.submatrix(r, n, r, n)
    return is_solution(jordan_matrix(first), X1, p) and is_solution(jordan_matrix(second), X2, p)


def random_word_terms(A: Mat, X: Mat, p: int, rng: random.Random, count: int = 5) -> list[tuple[int, int, int, int]]:
    """Random (coefficient, i, k, j) tuples describing sum c A^i X^k A^j with k >= 1."""
    n = A.rows
    terms = []
    for _ in range(count):
        c = rng.choice([v for v in range(-3, 4) if v])
        terms.append((c, rng.randint(0, n), rng.randint(1, n), rng.randint(0, n)))
    return terms


def evaluate_terms(A: Mat, X: Mat, terms) -> Mat:
    out = Mat.zeros(A.rows)
    for c, i, k, j in terms:
        out = out + c * mat_mul(mat_mul(mat_pow(A, i), mat_pow(X, k)), mat_pow(A, j))
    return out


def check_word_nilpotency(A: Mat, X: Mat, p: int, trials: int, seed: int = 0) -> bool:
    """Nilpotency of random combinations of A^i X^k A^j (k >= 1)."""
    if not is_solution(A, X, p):
        raise PreconditionError("X does not solve the equation")
    rng = random.Random(seed)
    return all(is_nilpotent(evaluate_terms(A, X, random_word_terms(A, X, p, rng))) for _ in range(trials))


def random_centralizer_element(A: Mat, rng: random.Random, invertible: bool = True, bound: int = 3) -> Mat:
    basis = centralizer_basis(A)
    for _ in range(100):
        coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in basis]
        S = linear_combination(coeffs, basis)
        if not invertible or is_invertible(S):
            return S
    raise SolverError("failed to draw an invertible centralizer element")


# -- catalogued solutions for A = diag(J(2), J(2)) ----------------------------------------

DIAG_J2_J2 = JordanSpec([(2, 0), (2, 0)])


def _fam(rows) -> Mat:
    return Mat(rows)


def catalog_p2(name: str, alpha=0, beta=0) -> Mat:
    a, b = to_rational(alpha), to_rational(beta)
    if name == "X1":
        return _fam([[0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    if name == "X2":
        return _fam([[0, -1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    if name == "X3":
        return _fam([[0, 0, 1, 0], [0, 0, 0, a], [0, 0, 0, 1 - a], [0, 0, 0, 0]])
    if name == "X4":
        return _fam([[0, a, 0, 0], [0, 0, 0, 0], [0, 0, 0, b], [0, 0, 0, 0]])
    if name == "X5":
        return _fam([[0, a, 0, 1], [0, 0, 0, 0], [0, 0, 0, a], [0, 0, 0, 0]])
    raise KeyError(name)


def catalog_p3(name: str, alpha=0, beta=0) -> Mat:
    a, b = to_rational(alpha), to_rational(beta)
    if name == "X1":
        if a == 0 or b == 0:
            raise DomainError("X1 needs alpha, beta nonzero")
        return _fam([[0, 0, a, 0], [0, 0, 0, b], [0, (a - b) / (a * b), 0, 0], [0, 0, 0, 0]])
    if name == "X2":
        return _fam([[0, a, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    if name == "X3":
        return _fam([[0, a, 0, 0], [0, 0, 0, 0], [0, 0, 0, b], [0, 0, 0, 0]])
    if name == "X4":
        return _fam([[0, a, 0, 1], [0, 0, 0, 0], [0, 0, 0, a], [0, 0, 0, 0]])
    raise KeyError(name)


CATALOG = {
    2: (catalog_p2, {"X1": 0, "X2": 0, "X3": 1, "X4": 2, "X5": 1}),
    3: (catalog_p3, {"X1": 2, "X2": 1, "X3": 2, "X4": 1}),
}

_SAMPLES = [Fraction(1), Fraction(2), Fraction(-1, 2), Fraction(3, 5), Fraction(-3)]


@dataclass
class CatalogReport:
    p: int
    checked: list[tuple[str, tuple[Fraction, ...]]]
    cube_nonzero: list[tuple[Fraction, Fraction]]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "checked": [
                {"family": name, "params": [format_rational(v) for v in params]}
                for name, params in self.checked
            ],
            "cube_nonzero": [[format_rational(a), format_rational(b)] for a, b in self.cube_nonzero],
        }


def verify_catalog_families(p: int, samples=_SAMPLES) -> CatalogReport:
    """Residual-check every catalogued family for A = diag(J(2), J(2)).

    Each family is instantiated at every parameter tuple drawn from
    ``samples``; for p = 3 the family X1 must also have nonzero cube when
    alpha != beta.
    """
    if p not in CATALOG:
        raise DomainError("catalogued families exist for p = 2 and p = 3 only")
    build, arity = CATALOG[p]
    A = jordan_matrix(DIAG_J2_J2)
    checked = []
    cubes = []
    for name, k in arity.items():
        if k == 0:
            params_list = [()]
        elif k == 1:
            params_list = [(a,) for a in samples]
        else:
            params_list = [(a, b) for a in samples for b in samples]
        for params in params_list:
            X = build(name, *params)
            if not is_solution(A, X, p):
                raise CatalogVerificationError(
                    f"p={p} family {name} at {[format_rational(v) for v in params]} has nonzero residual"
                )
            checked.append((name, params))
            if p == 3 and name == "X1" and params[0] != params[1]:
                if mat_pow(X, 3).is_zero():
                    raise CatalogVerificationError(
                        f"X1 at {[format_rational(v) for v in params]} has X^3 = 0"
                    )
                cubes.append(params)
    return CatalogReport(p, checked, cubes)


def block_diagonal_solution(blocks: list[Mat]) -> Mat:
    return block_diag(*blocks)
