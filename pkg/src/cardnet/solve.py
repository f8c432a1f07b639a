"""Drive an external SAT solver over DIMACS files for decision and optimization.

External solvers are stateless across calls, so each iteration rewrites the
base CNF (built once) plus the accumulated bound clauses.  Minimization
starts with the binary bound-halving strategy and switches to sequential
re-solving once the open interval is small; pure cardinality objectives are
strengthened incrementally with unit clauses on the already-encoded counter
outputs instead of fresh bound encodings.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .cnf import TRUE, CnfFormula, Lit, is_const
from .encode import EncodeOptions, encode_atmost
from .pb import PbConstraint, PbProblem, encode_goal_bound, encode_pb, normalize_pb


@dataclass
class SolverResult:
    status: str  # "SAT" | "UNSAT" | "UNKNOWN"
    model: dict[int, bool] | None = None
    wall_time: float = 0.0
    exit_code: int | None = None
    diagnostic: str = ""


@dataclass
class MinimizeConfig:
    strategy: str = "binary"     # "sequential" | "binary"
    q: int = 3
    switch_gap: int = 96
    solver_cmd: str = ""
    time_limit: float | None = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if self.switch_gap < 1:
            raise ValueError("switch gap must be at least 1")
        if self.strategy not in ("sequential", "binary"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class MinimizeResult:
    status: str  # "OPTIMAL" | "INFEASIBLE" | "UNKNOWN"
    value: int | None = None
    model: dict[int, bool] | None = None
    lower_bound: int | None = None
    upper_bound: int | None = None
    sat_calls: int = 0


def next_binary_bound(upper: int, lower: int, q: int) -> int:
    """Next strict bound tried by the binary strategy: floor((upper*(q-1) + lower) / q)."""
    return (upper * (q - 1) + lower) // q


def _parse_dimacs(text: str) -> tuple[int, list[tuple[int, ...]]]:
    num_vars = 0
    clauses: list[tuple[int, ...]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            parts = line.split()
            num_vars = int(parts[2])
            continue
        lits = [int(tok) for tok in line.split()]
        if lits and lits[-1] == 0:
            lits.pop()
        if lits:
            clauses.append(tuple(lits))
    return num_vars, clauses


def _model_satisfies(clauses: Sequence[tuple[int, ...]], model: dict[int, bool]) -> bool:
    for clause in clauses:
        if not any(model.get(abs(l), False) if l > 0 else not model.get(abs(l), False)
                   for l in clause):
            return False
    return True


def run_external_solver(cnf_text: str, extra_units: Sequence[Lit],
                        cfg: MinimizeConfig) -> SolverResult:
    """Run the configured solver on the CNF plus extra unit clauses.

    Expects SAT-competition `s`/`v` output lines; a claimed model is
    revalidated against the CNF and a failing one downgrades to UNKNOWN.
    """
    num_vars, clauses = _parse_dimacs(cnf_text)
    for lit in extra_units:
        if is_const(lit):
            continue
        clauses.append((lit,))
        num_vars = max(num_vars, abs(lit))
    body = [f"p cnf {num_vars} {len(clauses)}"]
    body.extend(" ".join(map(str, c)) + " 0" for c in clauses)
    started = time.monotonic()
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as handle:
        handle.write("\n".join(body) + "\n")
        path = handle.name
    try:
        cmd = [part.replace("{cnf}", path) for part in shlex.split(cfg.solver_cmd)]
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True,
                                  timeout=cfg.time_limit)
        except subprocess.TimeoutExpired:
            return SolverResult("UNKNOWN", diagnostic="solver timeout",
                                wall_time=time.monotonic() - started)
        except OSError as exc:
            return SolverResult("UNKNOWN", diagnostic=f"spawn failure: {exc}",
                                wall_time=time.monotonic() - started)
        elapsed = time.monotonic() - started
        status = None
        values: list[int] = []
        for line in proc.stdout.splitlines():
            if line.startswith("s "):
                verdict = line[2:].strip()
                if verdict == "SATISFIABLE":
                    status = "SAT"
                elif verdict == "UNSATISFIABLE":
                    status = "UNSAT"
            elif line.startswith("v "):
                values.extend(int(tok) for tok in line[2:].split())
        if status is None:
            return SolverResult("UNKNOWN", wall_time=elapsed,
                                exit_code=proc.returncode,
                                diagnostic="unparseable solver output")
        if status == "UNSAT":
            return SolverResult("UNSAT", wall_time=elapsed, exit_code=proc.returncode)
        model = {v: False for v in range(1, num_vars + 1)}
        for lit in values:
            if lit != 0 and abs(lit) <= num_vars:
                model[abs(lit)] = lit > 0
        if not _model_satisfies(clauses, model):
            return SolverResult("UNKNOWN", wall_time=elapsed,
                                exit_code=proc.returncode,
                                diagnostic="solver model fails validation")
        return SolverResult("SAT", model=model, wall_time=elapsed,
                            exit_code=proc.returncode)
    finally:
        Path(path).unlink(missing_ok=True)


@dataclass
class _EncodedProblem:
    formula: CnfFormula
    constraints: list[PbConstraint]
    objective: list[tuple[int, Lit]] | None


def encode_problem(problem: PbProblem, opts: EncodeOptions | None = None) -> _EncodedProblem:
    """Encode all constraints of a problem into one formula whose variables
    1..num_vars are the problem variables."""
    opts = opts or EncodeOptions()
    formula = CnfFormula()
    formula.fresh_vars(problem.num_vars)
    for c in problem.constraints:
        for norm in normalize_pb(c):
            encode_pb(formula, norm, opts=opts)
    return _EncodedProblem(formula, list(problem.constraints), problem.objective)


def _check_model(constraints: Sequence[PbConstraint], model: dict[int, bool]) -> bool:
    return all(c.holds(model) for c in constraints)


def solve_decision(problem, opts: EncodeOptions | None = None,
                   cfg: MinimizeConfig | None = None) -> SolverResult:
    """Encode and solve a decision problem (PB or CNF-plus-cardinality); a
    model is revalidated against the original constraints arithmetically."""
    cfg = cfg or MinimizeConfig()
    if hasattr(problem, "card_lines"):
        from .cnfp import encode_cnfp

        formula = encode_cnfp(problem, opts)
        num_vars = problem.num_vars
        validate = problem.model_ok
    else:
        if problem.objective is not None:
            raise ValueError("decision solving expects no objective")
        enc = encode_problem(problem, opts)
        formula = enc.formula
        num_vars = problem.num_vars
        validate = lambda model: _check_model(enc.constraints, model)
    result = run_external_solver(formula.write_dimacs(), (), cfg)
    if result.status == "SAT":
        assert result.model is not None
        projected = {v: result.model.get(v, False) for v in range(1, num_vars + 1)}
        if not validate(projected):
            return SolverResult("UNKNOWN", diagnostic="model violates source constraints",
                                wall_time=result.wall_time, exit_code=result.exit_code)
        result.model = projected
    return result


def _objective_value(objective: Sequence[tuple[int, Lit]], model: dict[int, bool]) -> int:
    total = 0
    for coeff, lit in objective:
        if is_const(lit):
            total += coeff if lit is TRUE else 0
        elif (model[abs(lit)] if lit > 0 else not model[abs(lit)]):
            total += coeff
    return total


def minimize(problem: PbProblem, opts: EncodeOptions | None = None,
             cfg: MinimizeConfig | None = None) -> MinimizeResult:
    """Minimize the objective with binary bound halving then sequential
    re-solving; returns the proven optimum and a validated witness."""
    if problem.objective is None:
        raise ValueError("minimize needs an objective")
    opts = opts or EncodeOptions()
    cfg = cfg or MinimizeConfig()
    enc = encode_problem(problem, opts)
    formula = enc.formula
    objective = list(problem.objective)
    sat_calls = 0

    def solve_now(extra_units: Sequence[Lit] = ()) -> SolverResult:
        nonlocal sat_calls
        sat_calls += 1
        return run_external_solver(formula.write_dimacs(), extra_units, cfg)

    def project(model: dict[int, bool]) -> dict[int, bool]:
        return {v: model.get(v, False) for v in range(1, problem.num_vars + 1)}

    first = solve_now()
    if first.status == "UNSAT":
        return MinimizeResult("INFEASIBLE", sat_calls=sat_calls)
    if first.status != "SAT":
        return MinimizeResult("UNKNOWN", sat_calls=sat_calls)
    best_model = project(first.model)
    upper = _objective_value(objective, best_model)
    lower = sum(a for a, _ in objective if a < 0)

    if cfg.strategy == "binary":
        while upper - lower >= cfg.switch_gap:
            bound = next_binary_bound(upper, lower, cfg.q)
            if bound <= lower:
                break
            flag = formula.fresh_var()
            encode_goal_bound(formula, objective, bound, flag, opts)
            res = solve_now([flag])
            if res.status == "SAT":
                model = project(res.model)
                value = _objective_value(objective, model)
                if value >= upper:
                    return MinimizeResult("UNKNOWN", value=upper, model=best_model,
                                          lower_bound=lower, upper_bound=upper,
                                          sat_calls=sat_calls)
                best_model, upper = model, value
                formula.add_clause([flag])
            elif res.status == "UNSAT":
                lower = bound
                formula.add_clause([-flag])  # disable, keep numbering stable
            else:
                return MinimizeResult("UNKNOWN", value=upper, model=best_model,
                                      lower_bound=lower, upper_bound=upper,
                                      sat_calls=sat_calls)

    # sequential phase: tighten f <= upper - 1 until UNSAT proves optimality
    counter = None  # incremental strengthening state for unit objectives
    unit_objective = all(a == 1 for a, _ in objective)
    while True:
        if upper <= lower:
            break
        if unit_objective:
            lits = [l for _, l in objective]
            bound_k = upper - 1
            if bound_k < 0:
                break
            if counter is None:
                counter = encode_atmost(formula, lits, bound_k, opts)
            else:
                from .encode import strengthen

                strengthen(counter, bound_k)
                counter.k = bound_k
        else:
            encode_goal_bound(formula, objective, upper, None, opts)
        res = solve_now()
        if res.status == "UNSAT":
            break
        if res.status != "SAT":
            return MinimizeResult("UNKNOWN", value=upper, model=best_model,
                                  lower_bound=lower, upper_bound=upper,
                                  sat_calls=sat_calls)
        model = project(res.model)
        value = _objective_value(objective, model)
        if value >= upper:
            return MinimizeResult("UNKNOWN", value=upper, model=best_model,
                                  lower_bound=lower, upper_bound=upper,
                                  sat_calls=sat_calls)
        best_model, upper = model, value

    if not _check_model(enc.constraints, best_model):
        return MinimizeResult("UNKNOWN", value=upper, model=best_model,
                              lower_bound=lower, upper_bound=upper, sat_calls=sat_calls)
    return MinimizeResult("OPTIMAL", value=upper, model=best_model,
                          lower_bound=lower, upper_bound=upper, sat_calls=sat_calls)
