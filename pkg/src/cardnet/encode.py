"""Translate cardinality constraints to CNF through selection networks.

The clause scheme per selector output p is the monotone implication family
{x_{i1} & ... & x_{ip} => y_p} over all p-subsets of the inputs; a fused
combine pair costs at most 5 clauses and 2 variables.  At-most-k constraints
build a (k+1)-selection network over the literals in this one-propagating
polarity and assert the unit ~y_{k+1}.  The mirrored zero-propagating polarity
(used by the pseudo-Boolean pipeline, which asserts an output positively) is
emitted by the same walker with polarity="atleast".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import build
from .cnf import FALSE, TRUE, CnfFormula, Lit, is_const, neg
from .network import CombinePair, Network, Selector

METHODS = ("oe4", "oe2", "pairwise_classic", "pairwise_bitonic",
           "pairwise_half_bitonic", "fourwise", "bitonic_sel",
           "sequential", "totalizer", "binomial")
NETWORK_METHODS = METHODS[:7]
BASELINE_METHODS = METHODS[7:]


@dataclass(frozen=True)
class CardConstraint:
    """lits REL k over Boolean literals; rel is one of < <= = >= >."""

    lits: tuple[Lit, ...]
    rel: str
    k: int

    def __post_init__(self):
        if self.rel not in ("<", "<=", "=", ">=", ">"):
            raise ValueError(f"unknown relation {self.rel!r}")
        if not self.lits:
            raise ValueError("constraint needs at least one literal")

    def holds(self, count: int) -> bool:
        return {"<": count < self.k, "<=": count <= self.k, "=": count == self.k,
                ">=": count >= self.k, ">": count > self.k}[self.rel]


@dataclass
class EncodeOptions:
    method: str = "oe4"
    lam: int = 5                 # weight of a variable vs a clause when mixing
    direct_mixing: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")


@dataclass
class EncodedConstraint:
    """Result of encoding one at-most-k constraint.

    output_lits are the unary counter outputs y_1..y_{k+1} (y_j true once j
    inputs are true); the last one carries the asserted unit.  They stay
    available for incremental strengthening with deeper unit clauses.
    """

    formula: CnfFormula
    input_lits: tuple[Lit, ...]
    k: int
    output_lits: tuple[Lit, ...] = ()

    @property
    def input_map(self) -> dict[int, Lit]:
        return dict(enumerate(self.input_lits))


@dataclass(frozen=True)
class AtMostForm:
    lits: tuple[Lit, ...]
    k: int


@dataclass(frozen=True)
class NormalizedCard:
    """<=-forms equivalent to the source constraint, or a trivial verdict."""

    atmosts: tuple[AtMostForm, ...]
    trivially_unsat: bool = False


def normalize_card(c: CardConstraint) -> NormalizedCard:
    """Reduce any relation to at-most forms: >= and > flip to negated
    literals, < lowers the bound, = yields both directions.  Constant
    literals are folded into the bound first."""
    lits = []
    base = 0
    for lit in c.lits:
        if lit is TRUE:
            base += 1
        elif lit is not FALSE:
            lits.append(lit)
    n = len(lits)

    def atmost(ls, k):
        if k < 0:
            return None  # trivially unsatisfiable
        if k >= len(ls) or not ls:
            return ()    # trivially true
        return (AtMostForm(tuple(ls), k),)

    k = c.k - base
    if c.rel == "<":
        forms = atmost(lits, k - 1)
    elif c.rel == "<=":
        forms = atmost(lits, k)
    elif c.rel == ">":
        forms = atmost([neg(l) for l in lits], n - k - 1)
    elif c.rel == ">=":
        forms = atmost([neg(l) for l in lits], n - k)
    else:  # "="
        lo = atmost([neg(l) for l in lits], n - k)
        hi = atmost(lits, k)
        forms = None if lo is None or hi is None else lo + hi
    if forms is None:
        return NormalizedCard((), trivially_unsat=True)
    return NormalizedCard(forms)


# ---------------------------------------------------------------------------
# gate-level clause emission
# ---------------------------------------------------------------------------

def _selector_outputs(formula: CnfFormula, in_lits: Sequence[Lit], m: int,
                      polarity: str) -> list[Lit]:
    trues = sum(1 for l in in_lits if l is TRUE)
    free = [l for l in in_lits if not is_const(l)]
    outs: list[Lit] = []
    for p in range(1, m + 1):
        if p <= trues:
            outs.append(TRUE)
        elif p > trues + len(free):
            outs.append(FALSE)
        else:
            y = formula.fresh_var()
            need = p - trues
            if polarity == "atmost":
                for subset in combinations(free, need):
                    formula.add_clause([neg(l) for l in subset] + [y])
            else:
                for subset in combinations(free, len(free) - need + 1):
                    formula.add_clause([-y, *subset])
            outs.append(y)
    return outs


def emit_selector_clauses(formula: CnfFormula, gate: Selector,
                          wire_lits: dict[int, Lit], polarity: str = "atmost") -> None:
    """Emit one selector's clause family, mapping its output wires to fresh
    variables (constant-forced outputs fold instead of allocating)."""
    in_lits = [wire_lits[w] for w in gate.inputs]
    outs = _selector_outputs(formula, in_lits, gate.m, polarity)
    for w, lit in zip(gate.outputs, outs):
        wire_lits[w] = lit


def _combine_outputs(formula: CnfFormula, ym2, ym1, yy, xx, xp1, xp2,
                     want_x: bool, want_y: bool, polarity: str) -> tuple[Lit | None, Lit | None]:
    def det_or(*disjuncts):
        # three-valued or over (lit-or-const) conjunction pairs
        if any(d is True for d in disjuncts):
            return True
        if all(d is False for d in disjuncts):
            return False
        return None

    def cv(l):  # constant view
        if l is TRUE:
            return True
        if l is FALSE:
            return False
        return None

    def conj(a, b):
        if cv(a) is False or cv(b) is False:
            return False
        if cv(a) is True and cv(b) is True:
            return True
        return None

    out_x: Lit | None = None
    out_y: Lit | None = None

    if want_y:
        det = det_or(cv(yy), cv(xp2), conj(ym1, xp1))
        if det is True and (polarity == "atmost"
                            or (cv(ym1) is True or cv(xp2) is True)
                            and (cv(yy) is True or cv(xp1) is True)):
            out_y = TRUE
        elif det is False:
            out_y = FALSE
        else:
            y = formula.fresh_var()
            if polarity == "atmost":
                formula.add_clause([neg(yy), y])
                formula.add_clause([neg(xp2), y])
                formula.add_clause([neg(ym1), neg(xp1), y])
            else:
                formula.add_clause([-y, ym1, xp2])
                formula.add_clause([-y, yy, xp1])
            out_y = y

    if want_x:
        det = det_or(conj(ym1, xx), conj(ym2, xp1))
        if det is True and (polarity == "atmost"
                            or cv(xx) is True and cv(ym2) is True
                            and (cv(ym1) is True or cv(xp1) is True)):
            out_x = TRUE
        elif det is False:
            out_x = FALSE
        else:
            x = formula.fresh_var()
            if polarity == "atmost":
                formula.add_clause([neg(ym1), neg(xx), x])
                formula.add_clause([neg(ym2), neg(xp1), x])
            else:
                formula.add_clause([-x, xx])
                formula.add_clause([-x, ym2])
                formula.add_clause([-x, ym1, xp1])
            out_x = x

    return out_x, out_y


def emit_combine_clauses(formula: CnfFormula, gate: CombinePair,
                         wire_lits: dict[int, Lit], polarity: str = "atmost") -> None:
    """Emit the fused clause set of one combine pair (at most 5 clauses and 2
    variables; boundary constants simplify both away)."""
    out_x, out_y = _combine_outputs(
        formula, wire_lits[gate.ym2], wire_lits[gate.ym1], wire_lits[gate.yy],
        wire_lits[gate.xx], wire_lits[gate.xp1], wire_lits[gate.xp2],
        gate.out_x is not None, gate.out_y is not None, polarity)
    if gate.out_x is not None:
        wire_lits[gate.out_x] = out_x
    if gate.out_y is not None:
        wire_lits[gate.out_y] = out_y


def emit_network(formula: CnfFormula, net: Network, input_lits: Sequence[Lit],
                 polarity: str = "atmost",
                 needed_prefix: int | None = None) -> list[Lit]:
    """Walk the gates in topological order and return the output literals.

    With needed_prefix, gate outputs that do not (transitively) feed the first
    needed_prefix network outputs are skipped entirely.
    """
    if len(input_lits) != net.num_inputs:
        raise ValueError("input literal count does not match the network")
    live: set[int] | None = None
    if needed_prefix is not None:
        live = set(net.outputs[:needed_prefix])
        for gate in reversed(net.gates):
            if any(w in live for w in gate.outputs):
                live.update(gate.inputs)
    wire_lits: dict[int, Lit] = {}
    for w, src in enumerate(net.sources):
        if src[0] == "input":
            wire_lits[w] = input_lits[src[1]]
        elif src[0] == "const":
            wire_lits[w] = TRUE if src[1] else FALSE
    for gate in net.gates:
        if live is not None and not any(w in live for w in gate.outputs):
            for w in gate.outputs:
                wire_lits[w] = FALSE  # dead wire, never consumed
            continue
        if isinstance(gate, Selector):
            emit_selector_clauses(formula, gate, wire_lits, polarity)
        else:
            emit_combine_clauses(formula, gate, wire_lits, polarity)
    return [wire_lits[w] for w in net.outputs]


def dry_run_cost(net: Network, needed_prefix: int | None = None,
                 polarity: str = "atmost") -> tuple[int, int]:
    """(variables, clauses) the emitter would add for this network with free
    inputs and no output assertion."""
    formula = CnfFormula()
    inputs = formula.fresh_vars(net.num_inputs)
    before = formula.next_var
    emit_network(formula, net, inputs, polarity, needed_prefix)
    return formula.next_var - before, formula.num_clauses


# ---------------------------------------------------------------------------
# direct-network mixing
# ---------------------------------------------------------------------------

def _direct_cost(n: int, m: int, cap: int | None = None) -> tuple[int, int] | None:
    """Cost of a single m-selector of order n; None when the clause count
    already exceeds cap."""
    clauses = 0
    for p in range(1, m + 1):
        clauses += math.comb(n, p)
        if cap is not None and clauses > cap:
            return None
    return m, clauses


class DirectMixer:
    """Chooses, per (n, m) sub-problem, between a single direct selector and
    the method's recursive construction by minimizing lam*V + C.  Decisions
    are memoized, so repeated queries agree."""

    def __init__(self, method: str, lam: int):
        if method not in NETWORK_METHODS:
            raise ValueError(f"mixing applies to network methods, not {method!r}")
        self.method = method
        self.lam = lam
        self._memo: dict[tuple[int, int], bool] = {}

    def _recursive_network(self, n: int, m: int) -> Network:
        net = Network(n)
        wires = net.input_wires()
        if self.method == "oe4":
            out = build._emit_oe4_sel(net, wires, m, mixer=self)
        elif self.method == "oe2":
            out = build._emit_oe2_sel(net, wires, m, mixer=self)
        elif self.method == "fourwise":
            out = build._emit_mw_sel(net, wires, m, build.even_split4(n), mixer=self)
        else:
            return _padded_pow2_network(self.method, n, m)
        net.set_outputs(out)
        return net

    def recursive_cost(self, n: int, m: int) -> tuple[int, int]:
        return dry_run_cost(self._recursive_network(n, m))

    def use_direct(self, n: int, m: int) -> bool:
        key = (n, m)
        if key not in self._memo:
            if n <= 1 or m < 1:
                self._memo[key] = False
            else:
                rv, rc = self.recursive_cost(n, m)
                cap = self.lam * rv + rc
                direct = _direct_cost(n, m, cap=cap)
                self._memo[key] = direct is not None and \
                    self.lam * direct[0] + direct[1] <= cap
        return self._memo[key]


_MIXERS: dict[tuple[str, int], DirectMixer] = {}


def _mixer_for(opts: EncodeOptions) -> DirectMixer | None:
    if not opts.direct_mixing or opts.method not in NETWORK_METHODS:
        return None
    key = (opts.method, opts.lam)
    if key not in _MIXERS:
        _MIXERS[key] = DirectMixer(*key)
    return _MIXERS[key]


def choose_direct(n: int, m: int, opts: EncodeOptions) -> bool:
    """True when a single direct selector beats the method's recursive
    construction for (n, m) under the lam*V + C measure."""
    mixer = _mixer_for(opts) or DirectMixer(
        opts.method if opts.method in NETWORK_METHODS else "oe4", opts.lam)
    return mixer.use_direct(n, m)


# ---------------------------------------------------------------------------
# selection-network construction per method
# ---------------------------------------------------------------------------

def _next_pow2(x: int) -> int:
    return 1 << (x - 1).bit_length()


def _padded_pow2_network(method: str, n: int, m: int) -> Network:
    """Build a power-of-two-only construction for arbitrary (n, m) by padding
    the inputs with constant-false wires and widening the selection target."""
    n_pad = _next_pow2(n)
    m_sel = min(_next_pow2(m), n_pad)
    if method == "bitonic_sel":
        inner = build.bit_sel(n_pad, m_sel)
    else:
        variant = method.removeprefix("pairwise_")
        inner = build.pw_sel(n_pad, m_sel, variant)
    if n_pad == n:
        return inner
    net = Network(n)
    pad = [net.const_wire(0)] * (n_pad - n)
    wires = net.input_wires() + pad
    # replay the inner network's gates over the padded wire list
    mapping: dict[int, int] = {}
    for w, src in enumerate(inner.sources):
        if src[0] == "input":
            mapping[w] = wires[src[1]]
        elif src[0] == "const":
            mapping[w] = net.const_wire(src[1])
    for gate in inner.gates:
        if isinstance(gate, Selector):
            outs = net.add_selector([mapping[w] for w in gate.inputs], gate.m)
            for w, nw in zip(gate.outputs, outs):
                mapping[w] = nw
        else:
            ox, oy = net.add_combine(*(mapping[w] for w in gate.inputs),
                                     gate.out_x is not None, gate.out_y is not None)
            if gate.out_x is not None:
                mapping[gate.out_x] = ox
            if gate.out_y is not None:
                mapping[gate.out_y] = oy
    net.set_outputs([mapping[w] for w in inner.outputs])
    return net


def build_selection_network(method: str, n: int, m: int,
                            mixer: DirectMixer | None = None) -> Network:
    """Network whose output prefix of length m is the sorted m largest inputs."""
    if method not in NETWORK_METHODS:
        raise ValueError(f"{method!r} is not a network method")
    if mixer is not None and n >= 2 and mixer.use_direct(n, m):
        return build.direct_selector(n, m)
    if method == "oe4":
        net = Network(n)
        net.set_outputs(build._emit_oe4_sel(net, net.input_wires(), m, mixer=mixer))
        return net
    if method == "oe2":
        net = Network(n)
        net.set_outputs(build._emit_oe2_sel(net, net.input_wires(), m, mixer=mixer))
        return net
    if method == "fourwise":
        if n == 1:
            net = Network(1)
            net.set_outputs(net.input_wires())
            return net
        net = Network(n)
        net.set_outputs(build._emit_mw_sel(net, net.input_wires(), m,
                                           build.even_split4(n), mixer=mixer))
        return net
    return _padded_pow2_network(method, n, m)


# ---------------------------------------------------------------------------
# at-most-k encoders
# ---------------------------------------------------------------------------

def encode_atmost(formula: CnfFormula, lits: Sequence[Lit], k: int,
                  opts: EncodeOptions | None = None) -> EncodedConstraint:
    """Standard encoding of sum(lits) <= k: a (k+1)-selection network over the
    literals in at-most polarity plus the unit clause ~y_{k+1}."""
    opts = opts or EncodeOptions()
    n = len(lits)
    if not 0 <= k < n:
        raise ValueError("encode_atmost needs 0 <= k < n; normalize first")
    if opts.method in BASELINE_METHODS:
        return encode_baseline(formula, lits, k, opts.method)
    if k == 0:
        for lit in lits:
            formula.add_clause([neg(lit)])
        return EncodedConstraint(formula, tuple(lits), k)
    net = build_selection_network(opts.method, n, k + 1, _mixer_for(opts))
    outs = emit_network(formula, net, list(lits), "atmost")
    formula.add_clause([neg(outs[k])])
    return EncodedConstraint(formula, tuple(lits), k, tuple(outs[:k + 1]))


def strengthen(enc: EncodedConstraint, new_k: int) -> None:
    """Tighten an encoded at-most constraint to a smaller bound by asserting a
    deeper output of the already-encoded network."""
    if not 0 <= new_k < enc.k:
        raise ValueError("strengthening requires a strictly smaller bound")
    if not enc.output_lits:
        raise ValueError("constraint has no exposed outputs")
    enc.formula.add_clause([neg(enc.output_lits[new_k])])


# ---------------------------------------------------------------------------
# baseline encoders
# ---------------------------------------------------------------------------

def _encode_sequential(formula: CnfFormula, lits: Sequence[Lit], k: int) -> EncodedConstraint:
    # unary running counter with the overflow bits simplified away
    n = len(lits)
    s = [[formula.fresh_var() for _ in range(k)] for _ in range(n - 1)]
    formula.add_clause([neg(lits[0]), s[0][0]])
    for j in range(1, k):
        formula.add_clause([-s[0][j]])
    for i in range(1, n - 1):
        xi = lits[i]
        formula.add_clause([neg(xi), s[i][0]])
        formula.add_clause([-s[i - 1][0], s[i][0]])
        formula.add_clause([neg(xi), -s[i - 1][k - 1]])
        for j in range(1, k):
            formula.add_clause([neg(xi), -s[i - 1][j - 1], s[i][j]])
            formula.add_clause([-s[i - 1][j], s[i][j]])
    formula.add_clause([neg(lits[n - 1]), -s[n - 2][k - 1]])
    return EncodedConstraint(formula, tuple(lits), k)


def _totalizer_node(formula: CnfFormula, lits: Sequence[Lit]) -> list[Lit]:
    if len(lits) == 1:
        return [lits[0]]
    half = len(lits) // 2
    a = _totalizer_node(formula, lits[:half])
    b = _totalizer_node(formula, lits[half:])
    m1, m2 = len(a), len(b)
    out = formula.fresh_vars(m1 + m2)

    def av(i):  # unary value literal with the 1/0 boundary convention
        return TRUE if i == 0 else (a[i - 1] if i <= m1 else FALSE)

    def bv(i):
        return TRUE if i == 0 else (b[i - 1] if i <= m2 else FALSE)

    for i in range(m1 + 1):
        for j in range(m2 + 1):
            c = i + j
            if 1 <= c:
                formula.add_clause([neg(av(i)), neg(bv(j)), out[c - 1]])
            if c < m1 + m2:
                formula.add_clause([-out[c], av(i + 1), bv(j + 1)])
    return list(out)


def _encode_totalizer(formula: CnfFormula, lits: Sequence[Lit], k: int) -> EncodedConstraint:
    outs = _totalizer_node(formula, list(lits))
    formula.add_clause([neg(outs[k])])
    return EncodedConstraint(formula, tuple(lits), k, tuple(outs[:k + 1]))


def _encode_binomial(formula: CnfFormula, lits: Sequence[Lit], k: int) -> EncodedConstraint:
    for subset in combinations(lits, k + 1):
        formula.add_clause([neg(l) for l in subset])
    return EncodedConstraint(formula, tuple(lits), k)


def encode_baseline(formula: CnfFormula, lits: Sequence[Lit], k: int,
                    which: str) -> EncodedConstraint:
    """Comparison encoders: sequential counter, totalizer, binomial."""
    n = len(lits)
    if not 0 <= k < n:
        raise ValueError("encode_baseline needs 0 <= k < n")
    if k == 0 and which != "binomial":
        for lit in lits:
            formula.add_clause([neg(lit)])
        return EncodedConstraint(formula, tuple(lits), k)
    if which == "sequential":
        return _encode_sequential(formula, lits, k)
    if which == "totalizer":
        return _encode_totalizer(formula, lits, k)
    if which == "binomial":
        return _encode_binomial(formula, lits, k)
    raise ValueError(f"unknown baseline {which!r}")


def encode_card(formula: CnfFormula, c: CardConstraint,
                opts: EncodeOptions | None = None) -> list[EncodedConstraint]:
    """Normalize and encode a constraint with any relation."""
    norm = normalize_card(c)
    if norm.trivially_unsat:
        formula.add_clause([])
        return []
    return [encode_atmost(formula, form.lits, form.k, opts) for form in norm.atmosts]
