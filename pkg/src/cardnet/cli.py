"""Command-line front end.

Subcommands: encode (CNFP -> DIMACS), pbencode (OPB -> DIMACS), solve,
optimize, stats (size CSV over a method/parameter grid), verify (property
suites), demo (instance generators), dpll (built-in reference solver with
SAT-competition output), ledger (regenerate the formula ledger).

Exit codes: 0 success, 1 usage, 2 parse error, 3 encoding error, 4 solver
failure, 10 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import build
from .cnf import CnfFormula
from .cnfp import CnfpSyntaxError, encode_cnfp, parse_cnfp, queens_cnfp, write_cnfp
from .docs import formula_ledger
from .encode import METHODS, NETWORK_METHODS, EncodeOptions
from .network import cnf_cost
from .pb import PbSyntaxError, parse_opb
from .sat import dpll_sat
from .solve import MinimizeConfig, minimize, solve_decision
from .verify import run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_ENCODE = 3
EXIT_SOLVER = 4
EXIT_VERIFY = 10


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _options(args) -> EncodeOptions:
    return EncodeOptions(method=args.method, lam=args.lam,
                         direct_mixing=not args.no_direct)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_encode_flags(parser, default_method="oe4"):
    parser.add_argument("--method", default=default_method, choices=METHODS)
    parser.add_argument("--lambda", dest="lam", type=_positive_int, default=5,
                        help="variable weight for direct-network mixing")
    parser.add_argument("--no-direct", action="store_true",
                        help="disable direct-network mixing")


def _cmd_encode(args) -> int:
    try:
        problem = parse_cnfp(Path(args.input).read_text())
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.input}: {exc}")
    except CnfpSyntaxError as exc:
        return _fail(EXIT_PARSE, str(exc))
    try:
        formula = encode_cnfp(problem, _options(args))
    except ValueError as exc:
        return _fail(EXIT_ENCODE, str(exc))
    Path(args.output).write_text(formula.write_dimacs())
    return EXIT_OK


def _cmd_pbencode(args) -> int:
    try:
        problem = parse_opb(Path(args.input).read_text())
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.input}: {exc}")
    except PbSyntaxError as exc:
        return _fail(EXIT_PARSE, str(exc))
    try:
        from .solve import encode_problem

        enc = encode_problem(problem, _options(args))
    except ValueError as exc:
        return _fail(EXIT_ENCODE, str(exc))
    Path(args.output).write_text(enc.formula.write_dimacs())
    return EXIT_OK


def _load_problem(path: str):
    text = Path(path).read_text()
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("p cnf+"):
            return parse_cnfp(text)
        if stripped.startswith(("c", "p")):
            continue
        break
    return parse_opb(text)


def _cmd_solve(args) -> int:
    try:
        problem = _load_problem(args.input)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.input}: {exc}")
    except (CnfpSyntaxError, PbSyntaxError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    cfg = MinimizeConfig(solver_cmd=args.solver, time_limit=args.time_limit)
    try:
        result = solve_decision(problem, _options(args), cfg)
    except ValueError as exc:
        return _fail(EXIT_ENCODE, str(exc))
    if result.status == "UNKNOWN":
        return _fail(EXIT_SOLVER, f"solver failed: {result.diagnostic}")
    print(f"s {'SATISFIABLE' if result.status == 'SAT' else 'UNSATISFIABLE'}")
    if result.model:
        lits = [v if result.model[v] else -v for v in sorted(result.model)]
        print("v " + " ".join(map(str, lits)) + " 0")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    try:
        problem = _load_problem(args.input)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.input}: {exc}")
    except (CnfpSyntaxError, PbSyntaxError) as exc:
        return _fail(EXIT_PARSE, str(exc))
    if not hasattr(problem, "objective") or problem.objective is None:
        return _fail(EXIT_USAGE, "optimize needs an OPB problem with a min: line")
    cfg = MinimizeConfig(strategy="binary" if args.strategy == "bin" else "sequential",
                         q=args.q, switch_gap=args.switch,
                         solver_cmd=args.solver, time_limit=args.time_limit)
    try:
        result = minimize(problem, _options(args), cfg)
    except ValueError as exc:
        return _fail(EXIT_ENCODE, str(exc))
    if result.status == "INFEASIBLE":
        print("s UNSATISFIABLE")
        return EXIT_OK
    if result.status != "OPTIMAL":
        return _fail(EXIT_SOLVER, f"optimization aborted with bounds "
                                  f"[{result.lower_bound}, {result.upper_bound}]")
    print(f"o {result.value}")
    print("s OPTIMUM FOUND")
    lits = [v if result.model[v] else -v for v in sorted(result.model)]
    print("v " + " ".join(map(str, lits)) + " 0")
    return EXIT_OK


def _parse_grid(spec: str) -> dict[str, list[int]]:
    grid: dict[str, list[int]] = {}
    for part in spec.split(","):
        name, _, rng = part.partition("=")
        name = name.strip()
        if name not in ("n", "k") or not rng:
            raise ValueError(f"grid entries look like n=64..256 or k=4;8;16, got {part!r}")
        if ".." in rng:
            lo, hi = (int(x) for x in rng.split("..", 1))
            vals = []
            v = lo
            while v <= hi:
                vals.append(v)
                v *= 2
        else:
            vals = [int(x) for x in rng.split(";")]
        grid[name] = vals
    if "n" not in grid or "k" not in grid:
        raise ValueError("grid needs both n= and k= entries")
    return grid


def stats_report(methods: list[str], grid: dict[str, list[int]]) -> str:
    """CSV rows (method, n, k, vars, clauses, gates2, gates3, gates4,
    combines) over raw networks with mixing disabled; unsupported
    combinations get NA data columns."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["method", "n", "k", "vars", "clauses",
                     "gates2", "gates3", "gates4", "combines"])
    for method in methods:
        for n in grid["n"]:
            for k in grid["k"]:
                try:
                    net = _raw_network(method, n, k)
                except ValueError:
                    writer.writerow([method, n, k] + ["NA"] * 6)
                    continue
                v, c = cnf_cost(net)
                hist, combines = net.gate_histogram()
                g2 = sum(cnt for (order, _m), cnt in hist.items() if order == 2)
                g3 = sum(cnt for (order, _m), cnt in hist.items() if order == 3)
                g4 = sum(cnt for (order, _m), cnt in hist.items() if order == 4)
                writer.writerow([method, n, k, v, c, g2, g3, g4, combines])
    return out.getvalue()


def _raw_network(method: str, n: int, k: int):
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    if method == "oe4":
        return build.oe4_sel(n, k)
    if method == "oe2":
        return build.m_oe_sel(n, k, 2)
    if method == "fourwise":
        return build.mw_sel(n, k, build.even_split4(n))
    if method == "bitonic_sel":
        return build.bit_sel(n, k)
    if method.startswith("pairwise_"):
        return build.pw_sel(n, k, method.removeprefix("pairwise_"))
    raise ValueError(f"stats supports network methods, not {method!r}")


def _cmd_stats(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in NETWORK_METHODS]
    if bad:
        return _fail(EXIT_USAGE, f"unknown network methods: {', '.join(bad)}")
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    text = stats_report(methods, grid)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    ok = run_suite(args.suite)
    if args.suite in ("sizes", "all"):
        Path("docs").mkdir(exist_ok=True)
        Path("docs/formula-ledger.md").write_text(formula_ledger())
    if not ok:
        return _fail(EXIT_VERIFY, f"suite {args.suite} failed")
    return EXIT_OK


def _cmd_demo(args) -> int:
    if args.kind != "queens":
        return _fail(EXIT_USAGE, f"unknown demo {args.kind!r}")
    problem = queens_cnfp(args.n)
    text = write_cnfp(problem)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_dpll(args) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.input}: {exc}")
    formula = CnfFormula()
    max_var = 0
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "%", "p")):
            continue
        lits = [int(t) for t in line.split()]
        if lits and lits[-1] == 0:
            lits.pop()
        if lits:
            clauses.append(lits)
            max_var = max(max_var, max(abs(l) for l in lits))
        else:
            formula.trivially_unsat = True
    formula.fresh_vars(max_var)
    for clause in clauses:
        formula.add_clause(clause)
    status, model = dpll_sat(formula)
    if status == "UNSAT":
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model[v] else -v for v in sorted(model)]
    print("v " + " ".join(map(str, lits)) + " 0")
    return 10


def _cmd_ledger(args) -> int:
    text = formula_ledger()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cardnet",
        description="cardinality / pseudo-Boolean constraint compiler to CNF")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a CNFP file to DIMACS CNF")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _add_encode_flags(p)
    p.set_defaults(fn=_cmd_encode)

    p = sub.add_parser("pbencode", help="encode an OPB file to DIMACS CNF")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _add_encode_flags(p)
    p.set_defaults(fn=_cmd_pbencode)

    p = sub.add_parser("solve", help="solve a CNFP or OPB decision problem")
    p.add_argument("input")
    p.add_argument("--solver", required=True,
                   help="solver command with a {cnf} placeholder")
    p.add_argument("--time-limit", type=float, default=None)
    _add_encode_flags(p)
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("optimize", help="minimize an OPB objective")
    p.add_argument("input")
    p.add_argument("--solver", required=True)
    p.add_argument("--strategy", choices=("seq", "bin"), default="bin")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--switch", type=int, default=96)
    p.add_argument("--time-limit", type=float, default=None)
    _add_encode_flags(p)
    p.set_defaults(fn=_cmd_optimize)

    p = sub.add_parser("stats", help="CSV size statistics over a parameter grid")
    p.add_argument("--methods", required=True, help="comma-separated network methods")
    p.add_argument("--grid", required=True, help="e.g. n=64..256,k=4..16")
    p.add_argument("--csv", help="output file (default: stdout)")
    p.set_defaults(fn=_cmd_stats)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all",
                   choices=("zero-one", "ac", "equisat", "sizes", "all"))
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("demo", help="generate a demo instance")
    p.add_argument("kind", choices=("queens",))
    p.add_argument("n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_demo)

    p = sub.add_parser("dpll", help="reference DPLL solver (SAT-competition output)")
    p.add_argument("input")
    p.set_defaults(fn=_cmd_dpll)

    p = sub.add_parser("ledger", help="regenerate the formula ledger")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=_cmd_ledger)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    return args.fn(args)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
