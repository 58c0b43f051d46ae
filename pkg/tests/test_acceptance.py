"""Acceptance criteria 1-8, one test each, each printing a PASS/FAIL line."""
import itertools
import random
import time
from fractions import Fraction

from xaxp import comb, suite
from xaxp.exactmat import (
    JordanSpec,
    Mat,
    block_diag,
    conjugate,
    det,
    jordan_block,
    jordan_matrix,
    mat_mul,
    mat_pow,
    sylvester_singular,
)
from xaxp.solver import (
    FreeAssignment,
    NotNormalizableError,
    SingularParameterError,
    catalog_p2,
    catalog_p3,
    check_block_split,
    check_generalized_eigenspace_invariance,
    check_word_nilpotency,
    has_only_trivial_solution,
    is_solution,
    nontrivial_witness,
    normalize_to_x0,
    random_centralizer_element,
    solve_full_jordan,
    x0_special,
)

from conftest import resultant_oracle

GOLDEN = [
    "small-pair", "jordan-5-general", "special-solution", "commuting-solution", "families-p2", "families-p3",
    "riccati-worked-example", "riccati-length-three-chains",
]


def random_solution(rng: random.Random, n: int, p: int, x12=None) -> Mat:
    while True:
        free = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n - 1)]
        if x12 is not None:
            free[0] = Fraction(x12)
        try:
            return solve_full_jordan(FreeAssignment.from_list(p, free)).X
        except SingularParameterError:
            continue


def test_criterion_1_golden_examples(record_criterion):
    t0 = time.perf_counter()
    results = [r for name in GOLDEN for r in suite.paper_suite(name) if r.name == name]
    elapsed = time.perf_counter() - t0
    failed = [r.name for r in results if not r.passed]
    ok = len(results) == len(GOLDEN) and not failed and elapsed < 5
    record_criterion(1, ok, f"{len(results)} golden items, failures {failed}, {elapsed:.2f}s (< 5s)")
    assert ok


def test_criterion_2_coefficient_table(record_criterion):
    comb._c_rec.cache_clear()
    t0 = time.perf_counter()
    ok_items, detail = suite.check_coeff_table()
    elapsed = time.perf_counter() - t0
    ok = ok_items and len(suite.PRINTED_TABLE) == 21 and elapsed < 1
    record_criterion(2, ok, f"{detail}; p in {suite.TABLE_PS} and interpolation, {elapsed:.3f}s (< 1s)")
    assert ok


def test_criterion_3_formula_cross_checks(record_criterion):
    p2 = comb.cross_check_p2(12)
    closed = comb.cross_check_closed(10, range(2, 7))
    rng = random.Random(3)
    pairs = [
        (Fraction(rng.randint(-9, 9), rng.randint(1, 7)), Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
        for _ in range(5)
    ]
    stirling_bad = [
        (n, k, lam, theta)
        for lam, theta in pairs
        for n in range(11)
        for k in range(n + 1)
        if comb.stirling_weighted(n, k, lam, theta) != comb.stirling_weighted(n, k, lam, theta, mode="explicit")
    ]
    # the closed form is accepted either way, as long as a disagreement comes with a minimal report
    closed_ok = closed.agree or closed.minimal_counterexample is not None
    ok = p2.agree and closed_ok and not stirling_bad
    outcome = "agrees" if closed.agree else f"disagrees, minimal {closed.minimal_counterexample}"
    record_criterion(
        3, ok,
        f"p=2 form {p2.compared} values agree={p2.agree}; alternating closed form {outcome} "
        f"over {closed.compared} values; Stirling recurrence vs explicit on 5 (lam, theta), "
        f"n <= 10: {len(stirling_bad)} mismatches",
    )
    assert ok


def test_criterion_4_matrix_identities(record_criterion):
    t0 = time.perf_counter()
    bad, count, used = [], 0, set()
    for p in (2, 3):
        for l in range(1, 7):
            for m in range(1, 8 - l):
                for rep in (comb.expand_Xl_Am(l, m, p), comb.expand_Am_Xl(l, m, p)):
                    count += 1
                    used.add((rep.n, p))
                    if not rep.equal:
                        bad.append((rep.identity, l, m, p))
        for l in range(1, 8):
            rep = comb.expand_AX_l(l, p)
            count += 1
            used.add((rep.n, p))
            if not rep.equal:
                bad.append((rep.identity, l, p))
    for n, p in sorted(used):
        A, X = comb.generic_solution(n, p)
        count += 1
        if not comb.commutator_power_check(A, X, p):
            bad.append(("commutator", n, p))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30 and max(n for n, _ in used) <= 12
    record_criterion(4, ok, f"{count} identity checks, n <= {max(n for n, _ in used)}, failures {bad}, {elapsed:.1f}s (< 30s)")
    assert ok


def _mixed_piece(rng: random.Random, p: int, lam: Fraction):
    """A (blocks, X) pair for one eigenvalue, drawn from solver blocks and the catalogued examples."""
    kind = rng.choice(["J", "catalog", "pair"] if p == 2 else ["J", "catalog"])
    if kind == "J":
        n = rng.randint(p + 1, p + 2)
        return [(n, lam)], random_solution(rng, n, p)
    if kind == "pair":
        return [(1, lam), (2, lam)], suite.SMALL_PAIR_X
    a, b = (Fraction(rng.choice([1, 2, -3]), rng.randint(1, 3)) for _ in range(2))
    if p == 2:
        X = catalog_p2(rng.choice(["X1", "X2", "X3", "X4", "X5"]), a, b)
    else:
        X = catalog_p3(rng.choice(["X1", "X2", "X3", "X4"]), a, b)
    return [(2, lam), (2, lam)], X


def test_criterion_5_structural_properties(record_criterion):
    rng = random.Random(5)
    draws, failures = 150, []
    for d in range(draws):
        # full Jordan block: nilpotency, strict upper, conjugation closure, word combinations
        n = rng.randint(3, 7)
        p = rng.randint(2, n - 1)
        A = jordan_block(n)
        X = random_solution(rng, n, p)
        S = random_centralizer_element(A, rng)
        if not mat_pow(X, n).is_zero():
            failures.append(("nilpotent", d))
        if not X.is_strictly_upper():
            failures.append(("strict upper", d))
        if not is_solution(A, conjugate(S, X), p):
            failures.append(("conjugation", d))
        if not check_word_nilpotency(A, X, p, trials=1, seed=d):
            failures.append(("words", d))

        # mixed spectrum: eigenspace invariance and the block split, after conjugation
        p = rng.choice([2, 3])
        lams = rng.sample([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2)], rng.choice([2, 3]))
        pieces = [_mixed_piece(rng, p, lam) for lam in lams]
        spec = JordanSpec([blk for blocks, _ in pieces for blk in blocks])
        A = jordan_matrix(spec)
        Xc = conjugate(random_centralizer_element(A, rng), block_diag(*[X for _, X in pieces]))
        if not is_solution(A, Xc, p):
            failures.append(("mixed conjugation", d))
            continue
        if not mat_pow(Xc, spec.n).is_zero():
            failures.append(("mixed nilpotent", d))
        if not check_generalized_eigenspace_invariance(spec, Xc, p):
            failures.append(("eigenspace", d))
        if not check_block_split(spec, len(pieces[0][0]), Xc, p):
            failures.append(("block split", d))
    ok = not failures
    record_criterion(5, ok, f"{draws} seeded draws (J(n) and mixed spectra), failures {failures[:5]}")
    assert ok


def test_criterion_6_normalization(record_criterion):
    rng = random.Random(6)
    failures, done = [], 0
    for n in (3, 4, 5):
        A = jordan_block(n)
        for _ in range(10):
            X = random_solution(rng, n, 2)
            while X[0, 1] == 0:
                X = random_solution(rng, n, 2)
            S = normalize_to_x0(X)
            done += 1
            if not (mat_mul(S, A) == mat_mul(A, S) and det(S) != 0 and conjugate(S, x0_special(n, X[0, 1])) == X):
                failures.append((n, X))
        for _ in range(10):
            X = random_solution(rng, n, 2, x12=0)
            try:
                normalize_to_x0(X)
                failures.append((n, "accepted x12 = 0"))
            except NotNormalizableError:
                done += 1
    ok = not failures
    record_criterion(6, ok, f"n = 3, 4, 5: {done} checks (30 conjugators, 30 refusals), failures {len(failures)}")
    assert ok


def _mm(X, Y, n):
    return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def box_has_nonzero_solution(A: Mat, p: int) -> bool:
    """Exhaustive search over X with entries in {-1, 0, 1}, integer arithmetic."""
    n = A.rows
    Ai = tuple(tuple(int(v) for v in A.row(i)) for i in range(n))
    for flat in itertools.product((-1, 0, 1), repeat=n * n):
        if not any(flat):
            continue
        X = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        L, R, P = _mm(X, Ai, n), _mm(Ai, X, n), X
        for _ in range(p - 1):
            P = _mm(P, X, n)
        if all(L[i][j] - R[i][j] == P[i][j] for i in range(n) for j in range(n)):
            return True
    return False


def random_spec(rng: random.Random) -> JordanSpec:
    n = rng.randint(1, 3)
    sizes = []
    while sum(sizes) < n:
        sizes.append(rng.randint(1, n - sum(sizes)))
    return JordanSpec([(s, rng.choice([0, 1, 2])) for s in sizes])


def test_criterion_7_existence_dichotomy(record_criterion):
    rng = random.Random(7)
    cache, failures, kinds = {}, [], {True: 0, False: 0}
    for _ in range(20):
        spec, p = random_spec(rng), rng.choice([2, 3])
        key = (tuple(spec), p)
        if key not in cache:
            cache[key] = box_has_nonzero_solution(jordan_matrix(spec), p)
        trivial = has_only_trivial_solution(spec, p)
        kinds[trivial] += 1
        if trivial == cache[key]:
            failures.append((spec, p, "dichotomy"))
        if not trivial:
            W = nontrivial_witness(spec, p)
            if W.is_zero() or not is_solution(jordan_matrix(spec), W, p):
                failures.append((spec, p, "witness"))
    ok = not failures
    record_criterion(
        7, ok,
        f"20 random specs (n <= 3; {kinds[True]} trivial-only, {kinds[False]} with witness) "
        f"against box search, failures {failures}",
    )
    assert ok


def test_criterion_8_sylvester_singularity(record_criterion):
    mismatches, count = [], 0
    for n in (1, 2, 3):
        for diag in itertools.product(range(-2, 3), repeat=n):
            A = Mat([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])
            count += 1
            if sylvester_singular(A) != resultant_oracle(A):
                mismatches.append(diag)
    ok = not mismatches and count == 155
    record_criterion(8, ok, f"{count} integer diagonal matrices, n <= 3, entries -2..2, mismatches {mismatches}")
    assert ok
