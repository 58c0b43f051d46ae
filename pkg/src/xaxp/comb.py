"""Coefficients for reordering products of A and X when XA - AX = X^p.

Three families appear:

* a_l(k) = prod_{j<k} (l + j(p-1)), the coefficients of X^l A^m and A^m X^l;
* c(l, k, p), the coefficients of (AX)^l, defined by a recurrence and also
  given by two closed forms;
* weighted degenerate Stirling numbers S(n, k, lam | theta), of which the
  c(l, k, p) are rescaled instances.

The recurrence for c is the ground truth. The closed forms are evaluated
independently and compared against it; a disagreement is reported, never
patched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod

from .exactmat import Mat, format_rational, mat_mul, mat_pow
from .solver import FreeAssignment, solve_full_jordan


class CombError(ValueError):
    pass


def a_coeff(l: int, k: int, p: int) -> int:
    if l < 1 or k < 0 or p < 1:
        raise CombError("need l >= 1, k >= 0, p >= 1")
    return prod(l + j * (p - 1) for j in range(k))


def a_coeff_p2(l: int, k: int) -> int:
    """k! * C(l+k-1, l-1), the p = 2 simplification of a_l(k)."""
    return factorial(k) * comb(l + k - 1, l - 1)


# -- c(l, k, p) ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _c_rec(l: int, k: int, p: int) -> int:
    if k == 0:
        return 1
    if k == l:
        return 0
    # c(l, k) = c(l-1, k) + [l-1 + (p-1)(k-1)] c(l-1, k-1)
    return _c_rec(l - 1, k, p) + (l - 1 + (p - 1) * (k - 1)) * _c_rec(l - 1, k - 1, p)


def c_coeff_rec(l: int, k: int, p: int) -> int:
    if l < 1 or not (0 <= k <= l):
        raise CombError(f"c(l, k) is defined for l >= 1, 0 <= k <= l; got l={l}, k={k}")
    return _c_rec(l, k, p)


def c_coeff_closed(l: int, k: int, p: int) -> Fraction:
    """Alternating-sum closed form for c(l, k, p), 0 <= k <= l-1, p >= 2."""
    if l < 1 or not (0 <= k <= l - 1) or p < 2:
        raise CombError("closed form needs l >= 1, 0 <= k <= l-1, p >= 2")
    total = Fraction(0)
    for r in range(1, l - k + 1):
        term = Fraction((-1) ** (r - 1), factorial(r - 1) * factorial(l - k - r))
        total += term * prod(p * j + (1 - p) * r for j in range(1, l))
    return Fraction(p - 1) ** (k - l + 1) * total


def c_coeff_p2(l: int, k: int) -> int:
    if l < 1 or not (0 <= k <= l - 1):
        raise CombError("need l >= 1, 0 <= k <= l-1")
    return comb(l + k - 1, 2 * k) * prod(2 * j - 1 for j in range(1, k + 1))


def special_c_values(l: int, p: int) -> tuple[Fraction, Fraction, int]:
    """Closed forms for c(l, 1), c(l, 2) and c(l, l-1)."""
    if l < 2:
        raise CombError("need l >= 2")
    c1 = Fraction(l * (l - 1), 2)
    c2 = Fraction(l * (l - 1) * (l - 2) * (3 * l + 4 * p - 5), 24)
    clast = prod(1 + i * p for i in range(1, l - 1))
    return c1, c2, clast


@dataclass
class Discrepancy:
    l: int
    k: int
    p: int
    recurrence: int
    closed: Fraction

    def __str__(self) -> str:
        return (
            f"c({self.l},{self.k},p={self.p}): recurrence {self.recurrence}, "
            f"closed form {format_rational(self.closed)}"
        )


@dataclass
class CrossCheck:
    lmax: int
    ps: tuple[int, ...]
    compared: int = 0
    mismatches: list[Discrepancy] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.mismatches

    @property
    def minimal_counterexample(self) -> Discrepancy | None:
        if not self.mismatches:
            return None
        return min(self.mismatches, key=lambda d: (d.l, d.k, d.p))


def cross_check_closed(lmax: int = 10, ps=range(2, 7)) -> CrossCheck:
    """Compare the alternating-sum closed form against the recurrence."""
    report = CrossCheck(lmax, tuple(ps))
    for p in report.ps:
        for l in range(1, lmax + 1):
            for k in range(l):
                rec, cl = c_coeff_rec(l, k, p), c_coeff_closed(l, k, p)
                report.compared += 1
                if rec != cl:
                    report.mismatches.append(Discrepancy(l, k, p, rec, cl))
    return report


def cross_check_p2(lmax: int = 12) -> CrossCheck:
    report = CrossCheck(lmax, (2,))
    for l in range(1, lmax + 1):
        for k in range(l):
            rec, cl = c_coeff_rec(l, k, 2), c_coeff_p2(l, k)
            report.compared += 1
            if rec != cl:
                report.mismatches.append(Discrepancy(l, k, 2, rec, Fraction(cl)))
    return report


@dataclass
class CoeffTable:
    p: int
    lmax: int
    values: dict[tuple[int, int], int]
    source: str = "recurrence"

    def rows(self):
        for l in range(1, self.lmax + 1):
            for k in range(l + 1):
                yield l, k, self.values[l, k]

    def to_tsv(self) -> str:
        lines = ["l\tk\tc"]
        lines += [f"{l}\t{k}\t{format_rational(Fraction(v))}" for l, k, v in self.rows()]
        return "\n".join(lines) + "\n"


def coeff_table(p: int, lmax: int, source: str = "recurrence") -> CoeffTable:
    if p < 2 or lmax < 1:
        raise CombError("need p >= 2 and lmax >= 1")
    values = {}
    for l in range(1, lmax + 1):
        for k in range(l + 1):
            if source == "recurrence" or k == l:
                values[l, k] = c_coeff_rec(l, k, p)
            elif source == "closed-form":
                v = c_coeff_closed(l, k, p)
                values[l, k] = v.numerator if v.denominator == 1 else v
            else:
                raise CombError(f"unknown source {source!r}")
    return CoeffTable(p, lmax, values, source)


# -- polynomials in p ------------------------------------------------------------------------


def interpolate(points) -> list[Fraction]:
    """Coefficients (constant term first) of the polynomial through the points."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    n = len(pts)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xj * basis[t + 1]
            denom *= xi - xj
        for t, b in enumerate(basis):
            coeffs[t] += yi * b / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_eval(coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def format_poly(coeffs, var: str = "p") -> str:
    terms = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if d == 0:
            body = format_rational(mag)
        else:
            coef = "" if mag == 1 else format_rational(mag) + "*"
            body = coef + (var if d == 1 else f"{var}^{d}")
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def c_as_poly(l: int, k: int) -> list[Fraction]:
    """c(l, k, p) as a polynomial in p, by interpolation at l + 1 integer points."""
    return interpolate([(p, c_coeff_rec(l, k, p)) for p in range(2, l + 3)])


# -- weighted degenerate Stirling numbers -------------------------------------------------------


def stirling_weighted(n: int, k: int, lam=0, theta=0, mode: str = "recurrence") -> Fraction:
    """S(n, k, lam | theta) by recurrence or by the explicit alternating sum."""
    lam, theta = Fraction(lam), Fraction(theta)
    if n < 0 or k < 0 or k > n:
        raise CombError("need 0 <= k <= n")
    if mode == "recurrence":
        return _stirling_rec(n, k, lam, theta)
    if mode == "explicit":
        return _stirling_explicit(n, k, lam, theta)
    raise CombError(f"unknown mode {mode!r}")


@lru_cache(maxsize=None)
def _stirling_rec(n: int, k: int, lam: Fraction, theta: Fraction) -> Fraction:
    if k == n:
        return Fraction(1)
    if k == 0:
        return prod((lam - j * theta for j in range(n)), start=Fraction(1))
    # S(n, k) = (k + lam - theta (n-1)) S(n-1, k) + S(n-1, k-1)
    return (k + lam - theta * (n - 1)) * _stirling_rec(n - 1, k, lam, theta) + _stirling_rec(
        n - 1, k - 1, lam, theta
    )


def _stirling_explicit(n: int, k: int, lam: Fraction, theta: Fraction) -> Fraction:
    total = Fraction(0)
    for r in range(k + 1):
        total += Fraction((-1) ** (k + r), factorial(r) * factorial(k - r)) * prod(
            (lam + r - j * theta for j in range(n)), start=Fraction(1)
        )
    return total


def bridge_holds(p: int, theta, lmax: int = 10) -> bool:
    """Whether c(l, l-k) = S(l, k, 0 | theta) (1-p)^(l-k) for all 1 <= l <= lmax."""
    theta = Fraction(theta)
    for l in range(1, lmax + 1):
        for k in range(l + 1):
            s = stirling_weighted(l, k, 0, theta)
            if c_coeff_rec(l, l - k, p) != s * Fraction(1 - p) ** (l - k):
                return False
    return True


def resolve_theta(p: int, lmax: int = 10) -> Fraction:
    """The theta for which the rescaled c(l, l-k) are Stirling numbers S(l, k, 0 | theta).

    Both signs that a quick reading suggests, p/(p-1) and p/(1-p), are tried;
    exactly one must satisfy the bridge identity.
    """
    candidates = [Fraction(p, p - 1), Fraction(p, 1 - p)]
    good = [t for t in candidates if bridge_holds(p, t, lmax)]
    if len(good) != 1:
        raise CombError(f"bridge identity singles out no unique theta for p={p}: {good}")
    return good[0]


# -- matrix expansions ---------------------------------------------------------------------------


@dataclass
class ExpansionReport:
    identity: str
    l: int
    m: int
    p: int
    n: int
    equal: bool
    first_difference: tuple[int, int] | None = None
    top_power_nonzero: bool = True

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "l": self.l,
            "m": self.m,
            "p": self.p,
            "n": self.n,
            "equal": self.equal,
            "first_difference": list(self.first_difference) if self.first_difference else None,
            "top_power_nonzero": self.top_power_nonzero,
        }


def generic_free(n: int) -> list[Fraction]:
    """Deterministic first-row values with x_12 away from every pole."""
    return [Fraction(j + 1, 2 * j + 3) for j in range(1, n)]


def generic_solution(n: int, p: int, free=None) -> tuple[Mat, Mat]:
    from .exactmat import jordan_block

    free = generic_free(n) if free is None else free
    X = solve_full_jordan(FreeAssignment.from_list(p, free)).X
    return jordan_block(n), X


def expansion_dimension(top_power: int, p: int, cap: int = 12) -> int:
    """Smallest useful n: top power of X nonzero, capped."""
    return max(min(top_power + 2, cap), p + 1)


def _compare(lhs: Mat, rhs: Mat):
    if lhs == rhs:
        return True, None
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            if lhs[i, j] != rhs[i, j]:
                return False, (i, j)
    return False, None


class _Powers:
    def __init__(self, M: Mat):
        self.M = M
        self.cache = {0: Mat.identity(M.rows), 1: M}

    def __call__(self, k: int) -> Mat:
        if k not in self.cache:
            self.cache[k] = mat_pow(self.M, k)
        return self.cache[k]


def _setup(top_power: int, p: int, n, free, A, X):
    if A is None or X is None:
        n = expansion_dimension(top_power, p) if n is None else n
        A, X = generic_solution(n, p, free)
    return A, X, A.rows


def expand_Xl_Am(l: int, m: int, p: int, n: int | None = None, free=None, A=None, X=None) -> ExpansionReport:
    """X^l A^m against sum_k a_l(k) C(m,k) A^(m-k) X^(l+k(p-1))."""
    top = l + m * (p - 1)
    A, X, n = _setup(top, p, n, free, A, X)
    Ap, Xp = _Powers(A), _Powers(X)
    lhs = mat_mul(Xp(l), Ap(m))
    rhs = Mat.zeros(n)
    for k in range(m + 1):
        rhs = rhs + (a_coeff(l, k, p) * comb(m, k)) * mat_mul(Ap(m - k), Xp(l + k * (p - 1)))
    eq, diff = _compare(lhs, rhs)
    return ExpansionReport("X^l A^m", l, m, p, n, eq, diff, not Xp(top).is_zero())


def b_coefficients(p: int, l: int, s: int) -> list[int]:
    """Integers b_j with A^s X^l = sum_j b_j X^(l+j(p-1)) A^(s-j)."""
    return [(-1) ** j * a_coeff(l, j, p) * comb(s, j) for j in range(s + 1)]


def expand_Am_Xl(l: int, m: int, p: int, n: int | None = None, free=None, A=None, X=None) -> ExpansionReport:
    """A^m X^l against sum_k b_k X^(l+k(p-1)) A^(m-k)."""
    top = l + m * (p - 1)
    A, X, n = _setup(top, p, n, free, A, X)
    Ap, Xp = _Powers(A), _Powers(X)
    lhs = mat_mul(Ap(m), Xp(l))
    rhs = Mat.zeros(n)
    for k, b in enumerate(b_coefficients(p, l, m)):
        rhs = rhs + b * mat_mul(Xp(l + k * (p - 1)), Ap(m - k))
    eq, diff = _compare(lhs, rhs)
    return ExpansionReport("A^m X^l", l, m, p, n, eq, diff, not Xp(top).is_zero())


def expand_AX_l(l: int, p: int, n: int | None = None, free=None, A=None, X=None) -> ExpansionReport:
    """(AX)^l against sum_k c(l,k) A^(l-k) X^(l+k(p-1))."""
    top = l + (l - 1) * (p - 1)
    A, X, n = _setup(top, p, n, free, A, X)
    Ap, Xp = _Powers(A), _Powers(X)
    lhs = mat_pow(mat_mul(A, X), l)
    rhs = Mat.zeros(n)
    for k in range(l):
        rhs = rhs + c_coeff_rec(l, k, p) * mat_mul(Ap(l - k), Xp(l + k * (p - 1)))
    eq, diff = _compare(lhs, rhs)
    return ExpansionReport("(AX)^l", l, 0, p, n, eq, diff, not Xp(top).is_zero())


def commutator_power_check(A: Mat, X: Mat, p: int) -> bool:
    """X^l A - A X^l = l X^(p+l-1) for l = 1..n."""
    n = A.rows
    Xp = _Powers(X)
    return all(
        mat_mul(Xp(l), A) - mat_mul(A, Xp(l)) == l * Xp(p + l - 1) for l in range(1, n + 1)
    )
