"""Golden regression items transcribed from the worked examples and table.

Each item is a zero-argument check returning ``(passed, detail)``. Items are
independent, so they can be filtered by name and run in any order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import comb
from .exactmat import JordanSpec, Mat, jordan_block, jordan_matrix, linear_combination, mat_pow
from .riccati import (
    build_T,
    length_three_chain,
    worked_chain_example,
    solution_from_chains,
    validate_chains,
)
from .solver import (
    FreeAssignment,
    NotNormalizableError,
    catalog_p3,
    conjugate,
    is_solution,
    normalize_to_x0,
    random_centralizer_element,
    residual,
    solve_full_jordan,
    verify_catalog_families,
    x0_special,
)

SMALL_PAIR_A = Mat([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
SMALL_PAIR_X = Mat([[-1, 0, 1], [-1, 0, 0], [-1, 0, 1]])

RICCATI_X = Mat([[0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])

# c(l, k, p) as printed, row l = 1..6, k = 0..l-1
PRINTED_TABLE: dict[tuple[int, int], Callable[[int], int]] = {
    (1, 0): lambda p: 1,
    (2, 0): lambda p: 1,
    (2, 1): lambda p: 1,
    (3, 0): lambda p: 1,
    (3, 1): lambda p: 3,
    (3, 2): lambda p: p + 1,
    (4, 0): lambda p: 1,
    (4, 1): lambda p: 6,
    (4, 2): lambda p: 4 * p + 7,
    (4, 3): lambda p: (p + 1) * (2 * p + 1),
    (5, 0): lambda p: 1,
    (5, 1): lambda p: 10,
    (5, 2): lambda p: 5 * (2 * p + 5),
    (5, 3): lambda p: 5 * (p + 1) * (2 * p + 3),
    (5, 4): lambda p: (p + 1) * (2 * p + 1) * (3 * p + 1),
    (6, 0): lambda p: 1,
    (6, 1): lambda p: 15,
    (6, 2): lambda p: 5 * (4 * p + 13),
    (6, 3): lambda p: 15 * (p + 2) * (2 * p + 3),
    (6, 4): lambda p: (p + 1) * (36 * p * p + 70 * p + 31),
    (6, 5): lambda p: (p + 1) * (2 * p + 1) * (3 * p + 1) * (4 * p + 1),
}

TABLE_PS = (2, 3, 5, 7)


def jordan5_closed_form(x12, x13, x14, x15) -> Mat:
    """The displayed general solution for A = J(5), p = 2."""
    a, b, c, d = (Fraction(v) for v in (x12, x13, x14, x15))
    return Mat([
        [0, a, b, c, d],
        [0, 0, a / (1 + a), b / (1 + 2 * a),
         ((1 + 2 * a) ** 2 * c - (1 + a) * b * b) / ((1 + a) * (1 + 2 * a) * (1 + 3 * a))],
        [0, 0, 0, a / (1 + 2 * a), (1 + a) * b / ((1 + 2 * a) * (1 + 3 * a))],
        [0, 0, 0, 0, a / (1 + 3 * a)],
        [0, 0, 0, 0, 0],
    ])


JORDAN5_SAMPLES = [
    (1, 1, 1, 1),
    (Fraction(1, 2), -2, 3, Fraction(5, 7)),
    (2, 0, 0, 1),
    (Fraction(-1, 4), 1, Fraction(-1, 3), 2),
    (-2, Fraction(3, 2), 4, -1),
    (5, -1, Fraction(2, 9), 0),
]


def check_small_pair():
    A, X = SMALL_PAIR_A, SMALL_PAIR_X
    ok = residual(A, X, 2).is_zero() and (X @ A - A @ X) == X @ X
    return ok, "XA - AX = X^2 for the 3x3 pair"


def check_jordan5_general():
    bad = []
    for free in JORDAN5_SAMPLES:
        X = solve_full_jordan(FreeAssignment.from_list(2, free)).X
        if X != jordan5_closed_form(*free):
            bad.append(free)
    return not bad, f"{len(JORDAN5_SAMPLES)} samples, mismatches: {bad}"


def check_special_solution():
    bad = []
    for n in range(3, 11):
        for alpha in (Fraction(1), Fraction(-1, 2 * n), Fraction(3, 2)):
            X0 = x0_special(n, alpha)
            free = [alpha] + [0] * (n - 2)
            if not is_solution(jordan_block(n), X0, 2):
                bad.append((n, alpha, "residual"))
            elif solve_full_jordan(FreeAssignment.from_list(2, free)).X != X0:
                bad.append((n, alpha, "recursion"))
    return not bad, f"n = 3..10, 3 alphas each; failures: {bad}"


def check_commuting_solution():
    A = jordan_block(8)
    rng = random.Random(18)
    for params in [(1, 2, 3, 4), (Fraction(1, 2), -1, 0, 7), (-3, 0, Fraction(2, 5), 1)]:
        X = linear_combination(params, [mat_pow(A, k) for k in (4, 5, 6, 7)])
        if not (is_solution(A, X, 2) and (X @ A - A @ X).is_zero() and (X @ X).is_zero()):
            return False, f"residual or X^2 nonzero at {params}"
        for _ in range(5):
            S = random_centralizer_element(A, rng)
            if conjugate(S, X) != X:
                return False, f"conjugation moved X at {params}"
        try:
            normalize_to_x0(X)
            return False, "normalization should refuse x_12 = 0"
        except NotNormalizableError:
            pass
    return True, "3 parameter samples, 5 centralizer conjugations each"


def check_families_p2():
    rep = verify_catalog_families(2)
    return True, f"{len(rep.checked)} family instances verified"


def check_families_p3():
    rep = verify_catalog_families(3)
    X = catalog_p3("X1", 1, 2)
    ok = X[2, 1] == Fraction(-1, 2) and bool(rep.cube_nonzero)
    return ok, f"{len(rep.checked)} family instances verified, X1^3 != 0 at {len(rep.cube_nonzero)} samples"


def check_riccati_worked():
    A = jordan_matrix(JordanSpec([(2, 0), (2, 0)]))
    vs = worked_chain_example()
    X = solution_from_chains(A, vs)
    T = build_T(A)
    # v1, v2, v3 form a chain; v4 is a kernel vector of T, not T^-1 v3
    chains_ok = validate_chains(T, [vs[:3], vs[3:]])
    return X == RICCATI_X and chains_ok, f"X = ZY^-1 = {X!r}"


def check_riccati_length_three():
    T = build_T(jordan_matrix(JordanSpec([(2, 0), (2, 0)])))
    samples = [
        (1, 0, 0, 0, 0, 0, 0, 0),
        (1, 2, 3, 4, 5, 6, 7, 8),
        (Fraction(1, 2), -1, 0, Fraction(3, 4), 2, -5, 1, 0),
    ]
    bad = [a for a in samples if not validate_chains(T, [length_three_chain(a)])]
    return not bad, f"{len(samples)} samples; failures: {bad}"


def check_coeff_table():
    bad = []
    for (l, k), entry in PRINTED_TABLE.items():
        for p in TABLE_PS:
            if comb.c_coeff_rec(l, k, p) != entry(p):
                bad.append((l, k, p))
        poly = comb.c_as_poly(l, k)
        if any(comb.poly_eval(poly, p) != entry(p) for p in range(0, 12)):
            bad.append((l, k, "poly"))
    return not bad, f"{len(PRINTED_TABLE)} entries; failures: {bad}"


def check_special_values():
    bad = []
    for p in range(2, 8):
        for l in range(2, 13):
            c1, c2, clast = comb.special_c_values(l, p)
            rec = (comb.c_coeff_rec(l, 1, p), comb.c_coeff_rec(l, 2, p), comb.c_coeff_rec(l, l - 1, p))
            if (c1, c2, clast) != rec:
                bad.append((l, p))
    return not bad, f"l = 2..12, p = 2..7; failures: {bad}"


ITEMS: dict[str, Callable[[], tuple[bool, str]]] = {
    "small-pair": check_small_pair,
    "jordan-5-general": check_jordan5_general,
    "special-solution": check_special_solution,
    "commuting-solution": check_commuting_solution,
    "families-p2": check_families_p2,
    "families-p3": check_families_p3,
    "riccati-worked-example": check_riccati_worked,
    "riccati-length-three-chains": check_riccati_length_three,
    "coeff-table": check_coeff_table,
    "special-values": check_special_values,
}


@dataclass
class ItemResult:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def paper_suite(filter: str | None = None) -> list[ItemResult]:
    results = []
    for name, fn in ITEMS.items():
        if filter and filter not in name:
            continue
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing item is a failing item
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(ItemResult(name, bool(ok), detail))
    return results
