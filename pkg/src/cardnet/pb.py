"""Pseudo-Boolean front end: OPB parsing, normalization, optimal mixed-radix
base search, and the sorter-chain encoding with carry merging.

An at-least constraint sum(a_i * l_i) >= k with positive coefficients is
compiled by writing every coefficient in a mixed radix base, feeding each
digit position's literals (with multiplicity) into a selection network, and
merging every r-th output of a position - the carries - into the next
position with a dedicated merger.  After adding a constant to the right-hand
side to make it a multiple of the top weight, the whole constraint reduces to
one positive unit clause on the top position's m-th output.  Positive
assertion needs the zero-propagating clause polarity, the mirror image of the
at-most scheme.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from . import build
from .cnf import FALSE, TRUE, CnfFormula, Lit, neg
from .encode import EncodeOptions, EncodedConstraint, emit_network, encode_atmost

MAX_COEFF_MAGNITUDE = 2 ** 62  # 63-bit magnitudes; larger coefficients are rejected
PRIMES_UNDER_50 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class PbSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PbConstraint:
    terms: tuple[tuple[int, Lit], ...]
    rel: str  # ">=", "<=", "="
    k: int

    def value(self, model: dict[int, bool]) -> int:
        total = 0
        for coeff, lit in self.terms:
            if lit is TRUE:
                total += coeff
            elif lit is FALSE:
                continue
            elif (model[abs(lit)] if lit > 0 else not model[abs(lit)]):
                total += coeff
        return total

    def holds(self, model: dict[int, bool]) -> bool:
        v = self.value(model)
        return {"<=": v <= self.k, ">=": v >= self.k, "=": v == self.k}[self.rel]


@dataclass
class PbProblem:
    constraints: list[PbConstraint] = field(default_factory=list)
    objective: list[tuple[int, Lit]] | None = None
    var_names: dict[str, int] = field(default_factory=dict)

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def name_of(self, var: int) -> str:
        for name, v in self.var_names.items():
            if v == var:
                return name
        raise KeyError(var)


@dataclass(frozen=True)
class MixedRadixBase:
    radices: tuple[int, ...]

    @property
    def weights(self) -> tuple[int, ...]:
        ws = [1]
        for r in self.radices:
            ws.append(ws[-1] * r)
        return tuple(ws)


def parse_opb(text: str) -> PbProblem:
    """Parse the linear OPB subset: `* comments`, an optional `min:` line, and
    constraint lines `(<sign><int> <var>)+ (>=|<=|=) <int> ;`."""
    problem = PbProblem()
    term_re = re.compile(r"([+-]?\d+)\s+([A-Za-z_][A-Za-z0-9_]*)")

    def var_of(name: str) -> int:
        if name not in problem.var_names:
            problem.var_names[name] = len(problem.var_names) + 1
        return problem.var_names[name]

    def parse_terms(src: str, lineno: int) -> list[tuple[int, Lit]]:
        terms = []
        pos = 0
        while pos < len(src):
            m = term_re.match(src, pos)
            if not m:
                raise PbSyntaxError(f"expected a term, got {src[pos:pos + 20]!r}",
                                    lineno, pos + 1)
            coeff = int(m.group(1))
            if abs(coeff) >= MAX_COEFF_MAGNITUDE:
                raise PbSyntaxError("coefficient magnitude exceeds 63 bits",
                                    lineno, pos + 1)
            terms.append((coeff, var_of(m.group(2))))
            pos = m.end()
            while pos < len(src) and src[pos].isspace():
                pos += 1
        return terms

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("*"):
            continue
        if line.startswith("min:"):
            if problem.objective is not None:
                raise PbSyntaxError("duplicate objective line", lineno)
            body = line[len("min:"):].strip()
            if not body.endswith(";"):
                raise PbSyntaxError("objective must end with ';'", lineno, len(raw))
            problem.objective = parse_terms(body[:-1].strip(), lineno)
            continue
        if not line.endswith(";"):
            raise PbSyntaxError("constraint must end with ';'", lineno, len(raw))
        body = line[:-1].strip()
        rel_m = re.search(r"(>=|<=|=)", body)
        if not rel_m:
            raise PbSyntaxError("missing relation", lineno)
        lhs, rel, rhs = body[:rel_m.start()], rel_m.group(1), body[rel_m.end():]
        try:
            k = int(rhs.strip())
        except ValueError:
            raise PbSyntaxError(f"malformed right-hand side {rhs.strip()!r}",
                                lineno, rel_m.end() + 1) from None
        if abs(k) >= MAX_COEFF_MAGNITUDE:
            raise PbSyntaxError("right-hand side exceeds 63 bits", lineno)
        terms = parse_terms(lhs.strip(), lineno)
        if not terms:
            raise PbSyntaxError("constraint has no terms", lineno)
        problem.constraints.append(PbConstraint(tuple(terms), rel, k))
    return problem


def normalize_pb(c: PbConstraint) -> list[PbConstraint]:
    """Rewrite into at-least form(s): positive coefficients over possibly
    negated literals, merged duplicates, k required to be >= 1 (k <= 0 is
    trivially true and yields no constraint)."""
    if c.rel == "=":
        return (normalize_pb(PbConstraint(c.terms, ">=", c.k))
                + normalize_pb(PbConstraint(c.terms, "<=", c.k)))
    terms, k = list(c.terms), c.k
    if c.rel == "<=":
        terms = [(-a, l) for a, l in terms]
        k = -k
    # now an at-least form; flip negative coefficients and merge duplicates
    merged: dict[int, int] = {}
    const = 0
    for a, l in terms:
        if a == 0 or l is FALSE:
            continue
        if l is TRUE:
            const += a
            continue
        merged[l] = merged.get(l, 0) + a
    k -= const
    out = []
    for l, a in merged.items():
        if a < 0:
            l, a = neg(l), -a
            k += a
        if a > 0:
            out.append((a, l))
    if k <= 0:
        return []
    return [PbConstraint(tuple(sorted(out, key=lambda t: (abs(t[1]), t[1] < 0, -t[0]))),
                         ">=", k)]


# ---------------------------------------------------------------------------
# mixed radix machinery
# ---------------------------------------------------------------------------

def to_digits(v: int, base: MixedRadixBase) -> list[int]:
    """Digits of v, least significant first; the top digit is unbounded."""
    if v < 0:
        raise ValueError("digits are defined for non-negative values")
    digits = []
    for r in base.radices:
        digits.append(v % r)
        v //= r
    digits.append(v)
    return digits


def value_of(digits: Sequence[int], base: MixedRadixBase) -> int:
    ws = base.weights
    if len(digits) != len(ws):
        raise ValueError("digit vector length must be len(radices) + 1")
    return sum(d * w for d, w in zip(digits, ws))


def base_cost(coeffs: Sequence[int], base: MixedRadixBase) -> int:
    """Sum of all coefficient digits in the base."""
    return sum(sum(to_digits(c, base)) for c in coeffs)


def find_base(coeffs: Sequence[int]) -> MixedRadixBase:
    """Branch-and-bound search for a prime (< 50) radix sequence minimizing
    the total digit sum; ties break to the shorter, lexicographically
    smaller base."""
    coeffs = [c for c in coeffs if c > 0]
    if not coeffs:
        return MixedRadixBase(())
    max_coeff = max(coeffs)
    best: list[tuple[int, int, tuple[int, ...]]] = [(sum(coeffs), 0, ())]

    def lower_bound(cost_so_far: int, residues: Sequence[int]) -> int:
        return cost_so_far + sum(1 for r in residues if r > 0)

    def dfs(prefix: tuple[int, ...], weight: int, residues: list[int], cost_so_far: int):
        total = cost_so_far + sum(residues)
        cand = (total, len(prefix), prefix)
        if cand < best[0]:
            best[0] = cand
        # any extension costs at least one digit per nonzero residue
        if lower_bound(cost_so_far, residues) > best[0][0]:
            return
        for p in PRIMES_UNDER_50:
            if weight * p > max_coeff:
                break
            dfs(prefix + (p,), weight * p,
                [r // p for r in residues],
                cost_so_far + sum(r % p for r in residues))

    dfs((), 1, list(coeffs), 0)
    return MixedRadixBase(best[0][2])


def simplify_rhs(c: PbConstraint, base: MixedRadixBase) -> tuple[int, int]:
    """Minimal constant to add to both sides so the bound becomes an exact
    multiple of the top weight; returns (const_add, adjusted bound)."""
    if c.rel != ">=":
        raise ValueError("simplify_rhs applies to normalized at-least forms")
    w_last = base.weights[-1]
    const_add = (w_last - c.k % w_last) % w_last
    return const_add, c.k + const_add


# ---------------------------------------------------------------------------
# digit-position planning and emission
# ---------------------------------------------------------------------------

@dataclass
class PositionPlan:
    weight: int
    radix: int | None             # None for the top position
    bundles: list[tuple[Lit, int]]
    max_inputs: int = 0           # digits plus maximal possible carries
    t_outputs: int = 0            # outputs worth exposing after truncation


@dataclass
class DigitPlan:
    base: MixedRadixBase
    const_add: int
    adjusted_k: int
    assert_index: int             # 1-based output of the top position
    positions: list[PositionPlan]


def plan_digits(c: PbConstraint, base: MixedRadixBase) -> DigitPlan:
    """Distribute every coefficient's digits (and the added constant's) over
    the weight positions and fix each position's truncated output count."""
    const_add, k_adj = simplify_rhs(c, base)
    npos = len(base.radices) + 1
    positions = [PositionPlan(base.weights[i],
                              base.radices[i] if i < len(base.radices) else None, [])
                 for i in range(npos)]
    for coeff, lit in c.terms:
        for i, d in enumerate(to_digits(coeff, base)):
            if d:
                positions[i].bundles.append((lit, d))
    for i, d in enumerate(to_digits(const_add, base)):
        if d:
            positions[i].bundles.append((TRUE, d))
    carries = 0
    for pos in positions:
        pos.max_inputs = sum(mult for _, mult in pos.bundles) + carries
        carries = pos.max_inputs // pos.radix if pos.radix else 0
    m_assert = k_adj // base.weights[-1]
    positions[-1].t_outputs = min(positions[-1].max_inputs, m_assert)
    for i in range(npos - 2, -1, -1):
        r = positions[i].radix
        positions[i].t_outputs = min(positions[i].max_inputs,
                                     positions[i + 1].t_outputs * r + r - 1)
    return DigitPlan(base, const_add, k_adj, m_assert, positions)


def _select_sorted(formula: CnfFormula, lits: list[Lit], t: int,
                   opts: EncodeOptions) -> list[Lit]:
    """Top-t sorted outputs of the position's selection network, emitted in
    the zero-propagating polarity."""
    from .encode import _mixer_for, build_selection_network

    n = len(lits)
    t = min(t, n)
    if n == 0 or t == 0:
        return []
    if n == 1:
        return list(lits)
    net = build_selection_network(opts.method, n, t, _mixer_for(opts))
    outs = emit_network(formula, net, lits, "atleast")
    return outs[:t]


def _merge_sorted(formula: CnfFormula, a: list[Lit], b: list[Lit], t: int) -> list[Lit]:
    """Merge two sorted literal runs, keeping the top t."""
    if not b:
        return a[:t]
    if not a:
        return b[:t]
    cols = sorted([a, b], key=len, reverse=True)
    k_merge = min(t, len(a) + len(b))
    if len(cols[0]) > k_merge:
        cols = [cols[0][:k_merge], cols[1][:k_merge]]
    net = build.oe4_merge((len(cols[0]), len(cols[1])), k_merge)
    outs = emit_network(formula, net, cols[0] + cols[1], "atleast")
    return outs[:t]


def encode_pb(formula: CnfFormula, c: PbConstraint, base: MixedRadixBase | None = None,
              opts: EncodeOptions | None = None) -> EncodedConstraint:
    """Encode a normalized at-least constraint through the digit/carry chain.

    All-unit-coefficient constraints degenerate to the at-most encoder over
    the negated literals.  Otherwise each position selects its top outputs in
    zero-propagating polarity, carries are merged (not appended) into the
    next position, and one positive unit asserts the top position's m-th
    output.
    """
    opts = opts or EncodeOptions()
    if c.rel != ">=" or any(a <= 0 for a, _ in c.terms) or c.k < 1:
        raise ValueError("encode_pb expects a normalized at-least constraint")
    total = sum(a for a, _ in c.terms)
    if total < c.k:
        formula.add_clause([])
        return EncodedConstraint(formula, tuple(l for _, l in c.terms), c.k)
    if base is None:
        base = find_base([a for a, _ in c.terms])
    if all(a == 1 for a, _ in c.terms):
        # plain cardinality: at-least k over lits == at-most n-k over negations
        lits = [l for _, l in c.terms]
        return encode_atmost(formula, [neg(l) for l in lits], len(lits) - c.k, opts)
    plan = plan_digits(c, base)
    if plan.positions[-1].max_inputs < plan.assert_index:
        formula.add_clause([])
        return EncodedConstraint(formula, tuple(l for _, l in c.terms), c.k)
    carries: list[Lit] = []
    outs: list[Lit] = []
    for pos in plan.positions:
        digit_lits: list[Lit] = []
        for lit, mult in pos.bundles:
            digit_lits.extend([lit] * mult)
        sorted_digits = _select_sorted(formula, digit_lits, pos.t_outputs, opts)
        outs = _merge_sorted(formula, sorted_digits, carries, pos.t_outputs)
        if pos.radix:
            carries = [outs[q * pos.radix - 1]
                       for q in range(1, len(outs) // pos.radix + 1)]
    if plan.assert_index > len(outs):
        formula.add_clause([])
        return EncodedConstraint(formula, tuple(l for _, l in c.terms), c.k)
    formula.add_clause([outs[plan.assert_index - 1]])
    return EncodedConstraint(formula, tuple(l for _, l in c.terms), c.k, tuple(outs))


def emit_normalizer(formula: CnfFormula, unary: Sequence[Lit], radix: int,
                    both_polarities: bool = False) -> tuple[list[Lit], list[Lit]]:
    """Carry aliases plus remainder literals for a sorted unary run.

    Carries are aliases of every radix-th output (no clauses).  Remainder
    literal j (1 <= j < radix) is forced true when the count is congruent to
    at least j past a full block: (u_{q*r+j} & ~u_{(q+1)*r}) => rem_j; the
    reverse direction is emitted on request.
    """
    carries = [unary[q * radix - 1] for q in range(1, len(unary) // radix + 1)]
    remainders: list[Lit] = []
    for j in range(1, radix):
        supports = []
        for q in range(0, len(unary) // radix + 1):
            idx = q * radix + j
            if idx <= len(unary):
                blocker = unary[(q + 1) * radix - 1] if (q + 1) * radix <= len(unary) else FALSE
                supports.append((unary[idx - 1], blocker))
        if not supports:
            remainders.append(FALSE)
            continue
        rem = formula.fresh_var()
        for lit, blocker in supports:
            formula.add_clause([neg(lit), blocker, rem])
        if both_polarities:
            formula.add_clause([-rem] + [lit for lit, _ in supports])
        remainders.append(rem)
    return carries, remainders


def encode_goal_bound(formula: CnfFormula, objective: Sequence[tuple[int, Lit]],
                      bound: int, flag: Lit | None,
                      opts: EncodeOptions | None = None) -> None:
    """Encode f(x) <= bound - 1; with a flag literal every emitted clause gets
    ~flag disjoined, so fixing flag to 0 disables the bound."""
    opts = opts or EncodeOptions()
    pos_terms: list[tuple[int, Lit]] = []
    offset = 0
    for a, l in objective:
        if a > 0:
            pos_terms.append((a, l))
        elif a < 0:
            offset += a
            pos_terms.append((-a, neg(l)))
    target = formula if flag is None else _GuardedFormula(formula, neg(flag))
    limit = bound - 1 - offset  # bound on the all-positive part
    total = sum(a for a, _ in pos_terms)
    if limit < 0:
        target.add_clause([])
        return
    if limit >= total:
        return
    atleast = PbConstraint(tuple((a, neg(l)) for a, l in pos_terms), ">=", total - limit)
    for norm in normalize_pb(atleast):
        encode_pb(target, norm, opts=opts)


class _GuardedFormula:
    """Formula proxy that disjoins a guard literal into every clause."""

    def __init__(self, formula: CnfFormula, guard: Lit):
        self._formula = formula
        self._guard = guard

    def add_clause(self, lits) -> None:
        self._formula.add_clause(list(lits) + [self._guard])

    def fresh_var(self) -> int:
        return self._formula.fresh_var()

    def fresh_vars(self, count: int) -> list[int]:
        return self._formula.fresh_vars(count)

    @property
    def next_var(self) -> int:
        return self._formula.next_var

    @property
    def num_clauses(self) -> int:
        return self._formula.num_clauses

    @property
    def clauses(self):
        return self._formula.clauses

    @property
    def trivially_unsat(self) -> bool:
        return self._formula.trivially_unsat
