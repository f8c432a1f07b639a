"""CNF assembly: literals with first-class constants, clause simplification, DIMACS output.

Literals are signed DIMACS-style integers (variable index >= 1, sign = polarity).
The two constants TRUE and FALSE are separate sentinel objects so that constant
inputs (padding, injected carries) flow through every encoder uniformly and get
eliminated at clause-add time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union


class _Const:
    """Constant literal sentinel. Negation flips between TRUE and FALSE."""

    __slots__ = ("_name",)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self) -> str:
        return self._name

    def __neg__(self) -> "_Const":
        return FALSE if self is TRUE else TRUE


TRUE = _Const("TRUE")
FALSE = _Const("FALSE")

Lit = Union[int, _Const]


def neg(lit: Lit) -> Lit:
    """Negate a literal; involution, TRUE <-> FALSE."""
    return -lit


def is_const(lit: Lit) -> bool:
    return lit is TRUE or lit is FALSE


def lit_var(lit: Lit) -> int:
    if is_const(lit):
        raise ValueError("constant literal has no variable")
    return abs(lit)


@dataclass
class CnfFormula:
    """A growing clause list with a fresh-variable counter.

    Variable 0 is never used (DIMACS sign encoding).  `trivially_unsat` is set
    as soon as clause simplification ever produces the empty clause; the empty
    clause itself is not stored.
    """

    next_var: int = 1
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    trivially_unsat: bool = False

    def fresh_var(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def fresh_vars(self, count: int) -> list[int]:
        return [self.fresh_var() for _ in range(count)]

    @property
    def num_vars(self) -> int:
        return self.next_var - 1

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def add_clause(self, lits: Iterable[Lit]) -> None:
        """Add a clause after constant/duplicate/tautology simplification.

        FALSE literals are dropped, a TRUE literal satisfies the clause (it is
        not stored), duplicates collapse, and a clause with both polarities of
        a variable is a tautology and dropped.  A clause that simplifies to
        the empty clause marks the formula trivially unsatisfiable.
        """
        seen: set[int] = set()
        out: list[int] = []
        for lit in lits:
            if lit is FALSE:
                continue
            if lit is TRUE:
                return
            if not isinstance(lit, int) or lit == 0:
                raise ValueError(f"malformed literal {lit!r}")
            if abs(lit) >= self.next_var:
                raise ValueError(f"literal {lit} uses an unallocated variable")
            if -lit in seen:
                return
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
        if not out:
            self.trivially_unsat = True
            return
        self.clauses.append(tuple(out))

    def write_dimacs(self) -> str:
        """Serialize to DIMACS CNF.

        A trivially unsatisfiable formula is emitted as the canonical
        two-clause contradiction `1 0 / -1 0` because DIMACS has no empty
        clause convention that all solvers accept.
        """
        if self.trivially_unsat:
            return "p cnf 1 2\n1 0\n-1 0\n"
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        for clause in self.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
        return "\n".join(lines) + "\n"
