"""Unit propagation, a small DPLL oracle, and propagation-quality harnesses.

Propagation uses occurrence lists with a FIFO scan queue so trails are
deterministic and reproducible.  The DPLL oracle branches on the
lowest-indexed unassigned variable, trying true first, with no learning; it
is meant for desk-scale checks, not performance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cnf import CnfFormula, Lit, is_const


@dataclass
class Assignment:
    """Partial map var -> bool plus the assignment trail."""

    values: dict[int, bool] = field(default_factory=dict)
    trail: list[tuple[int, bool, str]] = field(default_factory=list)

    def lit_value(self, lit: int) -> bool | None:
        v = self.values.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def assign(self, lit: int, reason: str) -> None:
        var = abs(lit)
        if var in self.values:
            raise ValueError(f"variable {var} assigned twice")
        self.values[var] = lit > 0
        self.trail.append((var, lit > 0, reason))

    def copy(self) -> "Assignment":
        return Assignment(dict(self.values), list(self.trail))


@dataclass
class UpResult:
    status: str  # "fixpoint" | "conflict"
    assignment: Assignment
    conflict_clause: tuple[int, ...] | None = None


class Propagator:
    """Reusable occurrence index over an immutable clause list."""

    def __init__(self, formula: CnfFormula):
        self.trivially_unsat = formula.trivially_unsat
        self.clauses = list(formula.clauses)
        self.occ: dict[int, list[int]] = {}
        for idx, clause in enumerate(self.clauses):
            for lit in clause:
                self.occ.setdefault(lit, []).append(idx)
        self.initial_units = [c[0] for c in self.clauses if len(c) == 1]

    def propagate(self, assignment: Assignment,
                  seeds: Sequence[int] = ()) -> UpResult:
        """Extend the assignment to a UP fixpoint; seeds are asserted first.

        A clause already falsified by the seeds is an immediate conflict.
        """
        if self.trivially_unsat:
            return UpResult("conflict", assignment, ())
        queue: list[int] = []
        head = 0

        def enqueue(lit: int, reason: str) -> tuple[int, ...] | None:
            val = assignment.lit_value(lit)
            if val is True:
                return None
            if val is False:
                return (lit,)
            assignment.assign(lit, reason)
            queue.append(lit)
            return None

        for lit in self.initial_units:
            conf = enqueue(lit, "propagated")
            if conf is not None:
                return UpResult("conflict", assignment, self._unit_reason(lit))
        for lit in seeds:
            conf = enqueue(lit, "decision")
            if conf is not None:
                return UpResult("conflict", assignment, conf)
        # scan clauses watching the negations of newly-true literals, FIFO
        while head < len(queue):
            lit = queue[head]
            head += 1
            for cidx in self.occ.get(-lit, ()):
                clause = self.clauses[cidx]
                unassigned = None
                satisfied = False
                for l in clause:
                    v = assignment.lit_value(l)
                    if v is True:
                        satisfied = True
                        break
                    if v is None:
                        if unassigned is not None:
                            unassigned = False  # two free literals, not unit
                            break
                        unassigned = l
                if satisfied or unassigned is False:
                    continue
                if unassigned is None:
                    return UpResult("conflict", assignment, clause)
                assignment.assign(unassigned, "propagated")
                queue.append(unassigned)
        return UpResult("fixpoint", assignment)

    def _unit_reason(self, lit: int) -> tuple[int, ...]:
        for clause in self.clauses:
            if clause == (lit,):
                return clause
        return (lit,)


def unit_propagate(formula: CnfFormula, seed: Assignment | Iterable[int] | None = None) -> UpResult:
    """One-shot unit propagation from a seed assignment (or literal list)."""
    prop = Propagator(formula)
    if isinstance(seed, Assignment):
        assignment, seeds = seed.copy(), []
    else:
        assignment, seeds = Assignment(), list(seed or [])
    return prop.propagate(assignment, seeds)


def dpll_sat(formula: CnfFormula, assumptions: Sequence[Lit] = ()) -> tuple[str, dict[int, bool] | None]:
    """Complete SAT check; returns ("SAT", model) or ("UNSAT", None).

    The model covers every allocated variable (unconstrained ones default to
    false) and satisfies all clauses and assumptions.
    """
    from .cnf import FALSE

    if formula.trivially_unsat:
        return "UNSAT", None
    if any(a is FALSE for a in assumptions):
        return "UNSAT", None
    assumptions = [a for a in assumptions if not is_const(a)]
    prop = Propagator(formula)
    branch_vars = sorted({abs(l) for c in prop.clauses for l in c}
                         | {abs(l) for l in assumptions})

    def search(assignment: Assignment) -> Assignment | None:
        for var in branch_vars:
            if var not in assignment.values:
                break
        else:
            return assignment
        for value in (True, False):
            trial = assignment.copy()
            res = Propagator.propagate(prop, trial, [var if value else -var])
            if res.status == "fixpoint":
                found = search(res.assignment)
                if found is not None:
                    return found
        return None

    first = prop.propagate(Assignment(), list(assumptions))
    if first.status == "conflict":
        return "UNSAT", None
    solution = search(first.assignment)
    if solution is None:
        return "UNSAT", None
    model = {v: solution.values.get(v, False) for v in range(1, formula.next_var)}
    return "SAT", model


# ---------------------------------------------------------------------------
# propagation-quality harnesses
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    passed: bool
    detail: str = ""


def _input_true_seed(lit: Lit) -> int:
    if is_const(lit):
        raise ValueError("constant input literal in scenario")
    return lit


def check_arc_consistency(enc, k: int, scenario: Sequence[int],
                          extra: int | None = None,
                          prop: Propagator | None = None) -> CheckReport:
    """Drive the two halves of the arc-consistency property on one scenario.

    Phase 1 asserts the scenario's k input positions true one at a time,
    propagating after each; it passes when no conflict occurs and every other
    input literal has been propagated to false.  Phase 2 asserts one more
    input (extra, or the first non-member) and requires a conflict.
    """
    if len(scenario) != k:
        raise ValueError("scenario must list exactly k input positions")
    prop = prop or Propagator(enc.formula)
    res = prop.propagate(Assignment())
    if res.status == "conflict":
        return CheckReport(False, "conflict at step 0")
    assignment = res.assignment
    for step, idx in enumerate(scenario):
        res = prop.propagate(assignment, [_input_true_seed(enc.input_lits[idx])])
        if res.status == "conflict":
            return CheckReport(False, f"conflict at step {step}")
        assignment = res.assignment
    members = set(scenario)
    for idx, lit in enumerate(enc.input_lits):
        if idx in members:
            continue
        if assignment.lit_value(lit) is not False:
            return CheckReport(False, f"input {idx} not propagated to 0")
    if extra is None:
        others = [i for i in range(len(enc.input_lits)) if i not in members]
        if not others:
            return CheckReport(True)
        extra = others[0]
    res = prop.propagate(assignment, [_input_true_seed(enc.input_lits[extra])])
    if res.status != "conflict":
        return CheckReport(False, "no conflict on the (k+1)-th input")
    return CheckReport(True)


def check_forward_prop(enc, i: int, subset: Sequence[int],
                       prop: Propagator | None = None) -> CheckReport:
    """After asserting i input positions true, UP must have set y_1..y_i."""
    if len(subset) != i:
        raise ValueError("subset size must equal i")
    if i > len(enc.output_lits):
        raise ValueError("i exceeds the exposed outputs")
    prop = prop or Propagator(enc.formula)
    res = prop.propagate(Assignment(),
                         [_input_true_seed(enc.input_lits[idx]) for idx in subset])
    if i <= enc.k:
        if res.status == "conflict":
            return CheckReport(False, "unexpected conflict")
        for j in range(i):
            if res.assignment.lit_value(enc.output_lits[j]) is not True:
                return CheckReport(False, f"output {j + 1} not set by UP")
        return CheckReport(True)
    # i == k+1: forward propagation reaches the asserted output, conflicting
    if res.status != "conflict":
        return CheckReport(False, "no conflict past the bound")
    return CheckReport(True)
