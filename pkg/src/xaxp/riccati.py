"""The quadratic case XA - AX = X^2 through Jordan chains.

X solves the quadratic equation exactly when its graph, the column space of
[E; X], is invariant under T = [[A, -E], [0, A]]. Invariant subspaces are
spanned by Jordan chains of T, so solutions can be read off as X = Z Y^-1
from n chain vectors [y_i; z_i] whose top halves form a basis.

Only nilpotent A is handled: then T is nilpotent and all chains belong to
eigenvalue 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactmat import (
    Mat,
    ShapeError,
    format_rational,
    hstack,
    in_column_space,
    inverse,
    is_invertible,
    mat_mul,
    nullspace,
    parse_rational,
    rank,
    vstack,
)
from .solver import residual


class RiccatiError(ValueError):
    pass


class NotNilpotentError(RiccatiError):
    """Chains are only computed for eigenvalue 0 of a nilpotent T."""


class InvalidSelectionError(RiccatiError):
    """Selected vectors do not span a T-invariant subspace."""


class GraphConditionError(RiccatiError):
    """The top halves y_1..y_n of the selected vectors are not a basis."""


@dataclass
class ChainSet:
    """Jordan chains (x_1, ..., x_r) with (T - lam E) x_1 = 0, (T - lam E) x_k = x_{k-1}."""

    chains: list[list[Mat]]
    eigenvalue: Fraction = field(default_factory=Fraction)

    @property
    def vectors(self) -> list[Mat]:
        return [v for c in self.chains for v in c]

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.chains]

    def to_json(self) -> dict:
        return {
            "eigenvalue": format_rational(self.eigenvalue),
            "chains": [[[format_rational(x) for x in v.flat()] for v in c] for c in self.chains],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ChainSet":
        chains = [[Mat.column([parse_rational(x) for x in v]) for v in c] for c in obj["chains"]]
        return cls(chains, parse_rational(obj.get("eigenvalue", "0")))


def build_T(A: Mat) -> Mat:
    if not A.is_square:
        raise ShapeError("A must be square")
    n = A.rows
    E = Mat.identity(n)
    return vstack(hstack(A, -E), hstack(Mat.zeros(n), A))


def graph_basis(X: Mat) -> Mat:
    return vstack(Mat.identity(X.rows), X)


def graph_is_invariant(A: Mat, X: Mat) -> bool:
    """Whether T maps the graph of X into itself."""
    if A.shape != X.shape or not A.is_square:
        raise ShapeError("A and X must be square of equal size")
    G = graph_basis(X)
    return in_column_space(G, mat_mul(build_T(A), G))


def jordan_chains_nilpotent(T: Mat, rng: random.Random | None = None) -> ChainSet:
    """A Jordan basis of a nilpotent T by kernel filtration.

    Working down from the top level k, new chain heads are taken from the
    RREF nullspace basis of T^k (free columns in increasing order) whenever
    they are independent of ker T^(k-1) plus the level-k vectors of chains
    already started. Each head x yields the chain (T^(k-1) x, ..., T x, x).

    With ``rng`` the candidate heads are random integer combinations of that
    nullspace basis instead, which gives a different chain basis per seed.
    """
    if not T.is_square:
        raise ShapeError("T must be square")
    N = T.rows
    powers = [Mat.identity(N)]
    while not powers[-1].is_zero():
        if len(powers) > N:
            raise NotNilpotentError("T is not nilpotent; only eigenvalue 0 is supported")
        powers.append(mat_mul(powers[-1], T))
    m = len(powers) - 1
    kernels = [nullspace(P) for P in powers]  # kernels[k] = ker T^k

    rank_targets = [len(K) for K in kernels]
    heads: list[tuple[Mat, int]] = []
    for k in range(m, 0, -1):
        span = list(kernels[k - 1])
        for x, length in heads:
            span.append(mat_mul(powers[length - k], x))
        current = rank(Mat.from_columns(span)) if span else 0
        for v in _candidates(kernels[k], rng):
            if current == rank_targets[k]:
                break
            trial = span + [v]
            r = rank(Mat.from_columns(trial))
            if r > current:
                span, current = trial, r
                heads.append((v, k))

    chains = []
    for x, length in heads:
        chains.append([mat_mul(powers[length - 1 - s], x) for s in range(length)])
    cs = ChainSet(chains)
    assert validate_chains(T, cs)
    assert rank(Mat.from_columns(cs.vectors)) == N
    return cs


def _candidates(basis: list[Mat], rng: random.Random | None):
    if rng is None:
        yield from basis
        return
    # random combinations; fall back to the plain basis so the level always completes
    for _ in range(2 * len(basis)):
        coeffs = [rng.randint(-2, 2) for _ in basis]
        v = Mat.zeros(basis[0].rows, 1)
        for c, b in zip(coeffs, basis):
            if c:
                v = v + c * b
        if not v.is_zero():
            yield v
    yield from basis


def validate_chains(T: Mat, chains: ChainSet | Sequence[Sequence[Mat]], eigenvalue=None) -> bool:
    if isinstance(chains, ChainSet):
        lam, chain_list = chains.eigenvalue, chains.chains
    else:
        lam, chain_list = Fraction(0), chains
    if eigenvalue is not None:
        lam = Fraction(eigenvalue)
    shifted = T - lam * Mat.identity(T.rows)
    for chain in chain_list:
        if not chain or chain[0].is_zero():
            return False
        prev = None
        for v in chain:
            image = mat_mul(shifted, v)
            expected = Mat.zeros(T.rows, 1) if prev is None else prev
            if image != expected:
                return False
            prev = v
    return True


def solution_from_chains(A: Mat, vectors: Sequence[Mat]) -> Mat:
    """X = Z Y^-1 from n vectors [y_i; z_i] spanning a T-invariant subspace."""
    n = A.rows
    if len(vectors) != n:
        raise InvalidSelectionError(f"need exactly {n} vectors, got {len(vectors)}")
    V = Mat.from_columns(list(vectors))
    if V.rows != 2 * n:
        raise ShapeError(f"vectors must have length {2 * n}")
    if not in_column_space(V, mat_mul(build_T(A), V)):
        raise InvalidSelectionError("selected vectors do not span a T-invariant subspace")
    Y, Z = V.submatrix(0, n, 0, n), V.submatrix(n, 2 * n, 0, n)
    if not is_invertible(Y):
        raise GraphConditionError("top halves y_1..y_n do not form a basis")
    X = mat_mul(Z, inverse(Y))
    if not residual(A, X, 2).is_zero():
        raise AssertionError("X = Z Y^-1 does not solve the equation")
    return X


def prefix_selections(lengths: Sequence[int], n: int):
    """Tuples (t_1, ..., t_m), 0 <= t_i <= lengths[i], summing to n."""
    for t in product(*(range(L + 1) for L in lengths)):
        if sum(t) == n:
            yield t


def solutions_from_prefixes(A: Mat, chains: ChainSet | None = None) -> list[tuple[tuple[int, ...], Mat]]:
    """Every solution reachable from prefix-closed selections of a chain basis."""
    n = A.rows
    T = build_T(A)
    if chains is None:
        chains = jordan_chains_nilpotent(T)
    found = []
    for t in prefix_selections(chains.lengths, n):
        vecs = [v for c, k in zip(chains.chains, t) for v in c[:k]]
        Y = Mat.from_columns(vecs).submatrix(0, n, 0, n)
        if not is_invertible(Y):
            continue
        found.append((t, solution_from_chains(A, vecs)))
    return found


def worked_chain_example() -> list[Mat]:
    """The length-four chain for A = diag(J(2), J(2)) from the worked example."""
    return [
        Mat.column([2, 0, 0, 0, 0, 0, 0, 0]),
        Mat.column([0, 1, 0, 0, -1, 0, 0, 0]),
        Mat.column([0, 0, -1, 0, 0, -1, 0, 0]),
        Mat.column([0, 0, 0, 1, 0, 0, 1, 0]),
    ]


def length_three_chain(a: Sequence) -> list[Mat]:
    """The eight-parameter family of length-three chains for A = diag(J(2), J(2))."""
    a1, a2, a3, a4, a5, a6, a7, a8 = (Fraction(v) for v in a)
    return [
        Mat.column([2 * a1, 0, 2 * a2, 0, 0, 0, 0, 0]),
        Mat.column([a3, a1, a4, a2, -a1, 0, -a2, 0]),
        Mat.column([a5, a6, a7, a8, a6 - a3, -a1, a8 - a4, -a2]),
    ]
