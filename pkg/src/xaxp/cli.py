"""Command-line front end.

Exit status: 0 when everything requested passed, 1 when a verification
failed, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import comb, riccati, solver, suite
from .exactmat import Mat, format_rational, jordan_block, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_matrix(path: str) -> Mat:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    try:
        return Mat.from_json(obj)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _parse_free(text: str) -> dict[int, Fraction]:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"--free entries look like j=value, got {part!r}")
        k, v = part.split("=", 1)
        try:
            out[int(k)] = parse_rational(v)
        except ValueError as exc:
            raise UsageError(f"--free: {exc}") from None
    return out


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command}")


def _emit(payload, pretty_text: str | None, pretty: bool) -> None:
    if pretty and pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(payload, indent=2 if pretty else None))


def cmd_solve_jordan(args) -> int:
    _need(args, "n", "p", "free")
    assign = solver.FreeAssignment(args.n, args.p, _parse_free(args.free))
    rep = solver.solve_full_jordan(assign)
    text = rep.X.pretty() + f"\nresidual zero: {rep.residual_zero}, nilpotency index: {rep.nilpotency_index}"
    _emit(rep.to_json(), text, args.pretty)
    return EXIT_OK if rep.residual_zero else EXIT_FAIL


def cmd_verify(args) -> int:
    _need(args, "a", "x", "p")
    A, X = _load_matrix(args.a), _load_matrix(args.x)
    if A.shape != X.shape or not A.is_square:
        raise UsageError("A and X must be square matrices of the same size")
    rep = solver.report(A, X, args.p)
    payload = rep.to_json()
    payload["residual"] = rep.residual.to_json()
    text = f"residual:\n{rep.residual.pretty()}\nresidual zero: {rep.residual_zero}"
    _emit(payload, text, args.pretty)
    return EXIT_OK if rep.residual_zero else EXIT_FAIL


def cmd_x0(args) -> int:
    _need(args, "n")
    alpha = parse_rational(args.alpha) if args.alpha is not None else Fraction(1)
    X0 = solver.x0_special(args.n, alpha)
    ok = solver.is_solution(jordan_block(args.n), X0, 2)
    _emit({"x": X0.to_json(), "residual_zero": ok}, X0.pretty(), args.pretty)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_normalize(args) -> int:
    _need(args, "x")
    X = _load_matrix(args.x)
    S = solver.normalize_to_x0(X)
    X0 = solver.x0_special(X.rows, X[0, 1]) if X.rows >= 3 else X
    payload = {"s": S.to_json(), "x0": X0.to_json(), "alpha": format_rational(X[0, 1])}
    _emit(payload, f"S =\n{S.pretty()}\nX0 =\n{X0.pretty()}", args.pretty)
    return EXIT_OK


def cmd_riccati_chains(args) -> int:
    _need(args, "a")
    A = _load_matrix(args.a)
    chains = riccati.jordan_chains_nilpotent(riccati.build_T(A))
    _emit(chains.to_json(), None, args.pretty)
    return EXIT_OK


def cmd_riccati_solve(args) -> int:
    _need(args, "a")
    A = _load_matrix(args.a)
    found = riccati.solutions_from_prefixes(A)
    payload = {"solutions": [{"prefix": list(t), "x": X.to_json()} for t, X in found]}
    text = "\n\n".join(f"prefix {t}:\n{X.pretty()}" for t, X in found)
    _emit(payload, text, args.pretty)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    _need(args, "p", "lmax")
    if args.symbolic:
        lines = ["l\tk\tc"]
        for l in range(1, args.lmax + 1):
            for k in range(l):
                lines.append(f"{l}\t{k}\t{comb.format_poly(comb.c_as_poly(l, k))}")
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK
    table = comb.coeff_table(args.p, args.lmax)
    sys.stdout.write(table.to_tsv())
    return EXIT_OK


def cmd_identities(args) -> int:
    _need(args, "l", "p")
    m = args.m if args.m is not None else 1
    reps = [
        comb.expand_Xl_Am(args.l, m, args.p, args.n),
        comb.expand_Am_Xl(args.l, m, args.p, args.n),
        comb.expand_AX_l(args.l, args.p, args.n),
    ]
    ok = all(r.equal for r in reps)
    text = "\n".join(f"{r.identity}: l={r.l} m={r.m} p={r.p} n={r.n} equal={r.equal}" for r in reps)
    _emit({"reports": [r.to_json() for r in reps], "all_equal": ok}, text, args.pretty)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_paper_suite(args) -> int:
    results = suite.paper_suite(args.filter)
    ok = all(r.passed for r in results)
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results)
    _emit({"items": [r.to_json() for r in results], "all_passed": ok}, text, args.pretty)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "solve-jordan": cmd_solve_jordan,
    "verify": cmd_verify,
    "x0": cmd_x0,
    "normalize": cmd_normalize,
    "riccati-chains": cmd_riccati_chains,
    "riccati-solve": cmd_riccati_solve,
    "coeffs": cmd_coeffs,
    "identities": cmd_identities,
    "paper-suite": cmd_paper_suite,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xaxp", description="Exact solutions of XA - AX = X^p.")
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("--a", metavar="FILE", help="matrix A (JSON)")
    parser.add_argument("--x", metavar="FILE", help="matrix X (JSON)")
    parser.add_argument("--p", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--free", metavar="j=v,...", help="first-row values x_1j")
    parser.add_argument("--alpha", help="x0: superdiagonal parameter (default 1)")
    parser.add_argument("--lmax", type=int)
    parser.add_argument("--l", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--symbolic", action="store_true", help="coeffs: print polynomials in p")
    parser.add_argument("--pretty", action="store_true")
    parser.add_argument("--filter", metavar="NAME", help="paper-suite: run items whose name contains NAME")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        # library precondition violations (shape, domain, pole, refusal)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
