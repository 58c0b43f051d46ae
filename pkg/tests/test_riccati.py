import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings

from xaxp.exactmat import Mat, jordan_block, jordan_matrix, mat_mul, mat_pow, rank
from xaxp.riccati import (
    ChainSet,
    GraphConditionError,
    InvalidSelectionError,
    NotNilpotentError,
    build_T,
    graph_is_invariant,
    jordan_chains_nilpotent,
    length_three_chain,
    worked_chain_example,
    solution_from_chains,
    solutions_from_prefixes,
    validate_chains,
)
from xaxp.solver import FreeAssignment, catalog_p2, residual, solve_full_jordan
from xaxp.suite import RICCATI_X

from conftest import rational_matrices, to_sympy

A22 = jordan_matrix([(2, 0), (2, 0)])
T22 = build_T(A22)


def e(n, i):
    return Mat.column([1 if k == i else 0 for k in range(n)])


class TestBuildT:
    def test_j2(self):
        assert build_T(jordan_block(2)) == Mat(
            [[0, 1, -1, 0], [0, 0, 0, -1], [0, 0, 0, 1], [0, 0, 0, 0]]
        )

    def test_scalar(self):
        assert build_T(Mat([[0]])) == Mat([[0, -1], [0, 0]])

    def test_worked_example(self):
        assert T22.shape == (8, 8)
        assert T22.submatrix(0, 4, 0, 4) == A22
        assert T22.submatrix(0, 4, 4, 8) == -Mat.identity(4)
        assert T22.submatrix(4, 8, 0, 4).is_zero()


class TestGraph:
    def test_zero(self):
        assert graph_is_invariant(A22, Mat.zeros(4))

    def test_worked_example(self):
        assert graph_is_invariant(A22, RICCATI_X)

    def test_identity(self):
        A = jordan_block(4)
        assert not residual(A, Mat.identity(4), 2).is_zero()
        assert not graph_is_invariant(A, Mat.identity(4))

    @settings(max_examples=60, deadline=None)
    @given(rational_matrices(3, 3), rational_matrices(3, 3))
    def test_matches_residual_random(self, A, X):
        assert graph_is_invariant(A, X) == residual(A, X, 2).is_zero()

    def test_matches_residual_on_solutions(self):
        for free in ([1, 2, 3], [Fraction(-1, 5), 0, 7], [0, 1, 0]):
            X = solve_full_jordan(FreeAssignment.from_list(2, free)).X
            assert graph_is_invariant(jordan_block(4), X)
            assert not graph_is_invariant(jordan_block(4), X + Mat.unit(4, 1, 3))


class TestChains:
    def test_j2(self):
        cs = jordan_chains_nilpotent(jordan_block(2))
        assert cs.chains == [[e(2, 0), e(2, 1)]]

    def test_zero(self):
        cs = jordan_chains_nilpotent(Mat.zeros(2))
        assert cs.lengths == [1, 1]

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotentError):
            jordan_chains_nilpotent(Mat.identity(2))

    def test_worked_example_structure(self):
        cs = jordan_chains_nilpotent(T22)
        assert sorted(cs.lengths, reverse=True) == [3, 3, 1, 1]
        assert validate_chains(T22, cs)
        assert rank(Mat.from_columns(cs.vectors)) == 8

    def test_jordan_type_oracle(self):
        # T^3 = 0 with rank T = 4, rank T^2 = 2: blocks 3,3,1,1, so no chain of length four
        S = to_sympy(T22)
        assert (S ** 3).is_zero_matrix
        assert [S.rank(), (S ** 2).rank()] == [4, 2]
        # block counts from rank differences: #blocks of size >= k is rank T^(k-1) - rank T^k
        ranks = [8, 4, 2, 0]
        at_least = [ranks[k - 1] - ranks[k] for k in (1, 2, 3)]
        assert at_least == [4, 2, 2]

    def test_chain_arithmetic(self):
        for seed in (None, 1, 2):
            cs = jordan_chains_nilpotent(T22, None if seed is None else random.Random(seed))
            for chain in cs.chains:
                assert mat_mul(T22, chain[0]).is_zero()
                for lo, hi in zip(chain, chain[1:]):
                    assert mat_mul(T22, hi) == lo

    def test_jordan_block_t(self):
        T = build_T(jordan_block(3))
        cs = jordan_chains_nilpotent(T)
        assert sum(cs.lengths) == 6
        assert validate_chains(T, cs)

    def test_json_round_trip(self):
        cs = jordan_chains_nilpotent(T22)
        obj = cs.to_json()
        assert obj["eigenvalue"] == "0"
        back = ChainSet.from_json(obj)
        assert back.chains == cs.chains


class TestValidate:
    def test_worked_vectors(self):
        v = worked_chain_example()
        assert [mat_mul(T22, x) for x in v[1:3]] == [v[0], v[1]]
        assert mat_mul(T22, v[0]).is_zero()
        # the fourth vector is killed by T rather than mapped to v3
        assert mat_mul(T22, v[3]).is_zero()
        assert not validate_chains(T22, [v])
        assert validate_chains(T22, [v[:3], v[3:]])

    @pytest.mark.parametrize("a", [
        (1, 0, 0, 0, 0, 0, 0, 0),
        (0, 1, 2, -1, 3, 0, 0, 5),
        (Fraction(1, 2), Fraction(-1, 3), 1, 1, 1, 1, 1, 1),
    ])
    def test_length_three_family(self, a):
        assert validate_chains(T22, [length_three_chain(a)])

    def test_perturbed(self):
        v = worked_chain_example()
        bad = [v[0], v[1] + e(8, 0), v[2]]
        assert not validate_chains(T22, [bad])

    def test_zero_head(self):
        assert not validate_chains(T22, [[Mat.zeros(8, 1)]])


class TestSolutionFromChains:
    def test_worked_example(self):
        X = solution_from_chains(A22, worked_chain_example())
        assert X == RICCATI_X
        assert X == catalog_p2("X1")

    def test_standard_basis_gives_zero(self):
        n = 4
        A = jordan_block(n)
        vecs = [Mat.column([1 if k == i else 0 for k in range(2 * n)]) for i in range(n)]
        assert solution_from_chains(A, vecs).is_zero()

    def test_invalid_selection(self):
        A = jordan_block(2)
        with pytest.raises(InvalidSelectionError):
            solution_from_chains(A, [e(4, 1), e(4, 3)])

    def test_singular_y(self):
        A = jordan_block(2)
        with pytest.raises(GraphConditionError):
            solution_from_chains(A, [e(4, 0), e(4, 2) + e(4, 0)])

    def test_prefix_solutions_round_trip(self):
        for seed in (None, 3, 4):
            cs = jordan_chains_nilpotent(T22, None if seed is None else random.Random(seed))
            found = solutions_from_prefixes(A22, cs)
            assert found
            for _, X in found:
                assert residual(A22, X, 2).is_zero()
                assert graph_is_invariant(A22, X)

    def test_prefix_solutions_jordan_block(self):
        A = jordan_block(4)
        for _, X in solutions_from_prefixes(A):
            assert residual(A, X, 2).is_zero()


# -- reachability of the catalogued p = 2 families -----------------------------------------

_s = sp.symbols("s1:9")
_a, _b, _u = sp.symbols("a b u")
_S = sp.Matrix([[_s[0], _s[1], _s[4], _s[5]], [0, _s[0], 0, _s[4]],
                [_s[2], _s[3], _s[6], _s[7]], [0, _s[2], 0, _s[6]]])
FAMILIES = {
    "X1": sp.Matrix([[0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]]),
    "X2": sp.Matrix([[0, -1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]),
    "X3": sp.Matrix([[0, 0, 1, 0], [0, 0, 0, _a], [0, 0, 0, 1 - _a], [0, 0, 0, 0]]),
    "X4": sp.Matrix([[0, _a, 0, 0], [0, 0, 0, 0], [0, 0, 0, _b], [0, 0, 0, 0]]),
    "X5": sp.Matrix([[0, _a, 0, 1], [0, 0, 0, 0], [0, 0, 0, _a], [0, 0, 0, 0]]),
}


def conjugate_families(X: Mat) -> set[str]:
    """Families F with S X_F = X S solvable for invertible centralizer S (Groebner oracle)."""
    Xs = to_sympy(X)
    hits = set()
    for name, XF in FAMILIES.items():
        eqs = list(_S * XF - Xs * _S) + [_u * (_s[0] * _s[6] - _s[2] * _s[4]) - 1]
        if list(sp.groebner(eqs, *_s, _a, _b, _u, order="grevlex")) != [1]:
            hits.add(name)
    return hits


def test_oracle_recognizes_catalog():
    assert conjugate_families(catalog_p2("X1")) == {"X1"}
    assert "X5" in conjugate_families(catalog_p2("X5", 2))


def test_prefix_selections_reach_families():
    hits = set()
    seen = set()
    for seed in range(12):
        cs = jordan_chains_nilpotent(T22, random.Random(seed))
        for _, X in solutions_from_prefixes(A22, cs):
            if X in seen:
                continue
            seen.add(X)
            hits |= conjugate_families(X)
        if {"X1", "X2", "X3", "X4"} <= hits:
            break
    assert {"X1", "X2", "X3", "X4"} <= hits


def test_x5_not_reachable_from_prefixes():
    # T restricted to the graph of X5 is A - X5, of Jordan type (2, 2). With T of type
    # (3, 3, 1, 1), the only prefix pattern of type (2, 2) spans im T, whose graph is X4(-1, -1).
    X5 = catalog_p2("X5", 2)
    M = A22 - X5
    assert mat_pow(M, 2).is_zero() and rank(M) == 2
    imT = Mat.from_columns([mat_mul(T22, v) for v in jordan_chains_nilpotent(T22).vectors])
    assert rank(imT) == 4
    cs = jordan_chains_nilpotent(T22)
    pattern = tuple(2 if L == 3 else 0 for L in cs.lengths)
    X = solution_from_chains(A22, [v for c, k in zip(cs.chains, pattern) for v in c[:k]])
    assert X == catalog_p2("X4", -1, -1)
