from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import strategies as st

from xaxp.exactmat import Mat

ACCEPTANCE_LINES: list[str] = []


def to_sympy(M: Mat) -> sp.Matrix:
    return sp.Matrix(M.rows, M.cols, [sp.Rational(v.numerator, v.denominator) for v in M.flat()])


def from_sympy(M: sp.Matrix) -> Mat:
    return Mat([[Fraction(int(sp.fraction(v)[0]), int(sp.fraction(v)[1])) for v in M.row(i)] for i in range(M.rows)])


def resultant_oracle(A: Mat) -> bool:
    """Res(charpoly A, charpoly (A - E)) = 0, i.e. A and A + E share an eigenvalue."""
    t = sp.symbols("t")
    S = to_sympy(A)
    f = S.charpoly(t).as_expr()
    g = (S - sp.eye(A.rows)).charpoly(t).as_expr()
    return sp.resultant(f, g, t) == 0


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def rational_matrices(draw, rows=None, cols=None, max_dim=4):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    return Mat([[draw(small_rationals) for _ in range(c)] for _ in range(r)])


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}")
        print(ACCEPTANCE_LINES[-1])
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
