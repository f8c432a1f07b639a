"""In-memory representation of generalized selection networks.

A Network is a DAG of gates over wires.  Wires are integer ids; each wire has
exactly one source: an input slot, a constant (0/1), or a gate output.  Gates
are either m-selectors of some order n (a full sorter is the m == n case) or
fused combine pairs, which compute one odd/even output pair of the two-layer
combine step of the four-way odd-even merger:

    y''_i = y_i | x_{i+2} | (y_{i-1} & x_{i+1})
    x''_i = (y_{i-1} & x_i) | (y_{i-2} & x_{i+1})

Networks are immutable once built (builders append gates, then freeze the
designated output list); evaluation and cost queries are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Selector:
    """Outputs the m largest of its inputs in non-increasing order."""

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.inputs)

    @property
    def m(self) -> int:
        return len(self.outputs)


@dataclass(frozen=True)
class CombinePair:
    """One fused output pair of a combine step.

    Input roles, in order: y_{i-2}, y_{i-1}, y_i, x_i, x_{i+1}, x_{i+2}.
    Out-of-range neighbours are constant wires (TRUE below the ys, FALSE past
    either end).  out_x is the odd output slot (x''_i, the larger of the
    pair), out_y the even slot (y''_i); boundary pairs may produce only one.
    """

    ym2: int
    ym1: int
    yy: int
    xx: int
    xp1: int
    xp2: int
    out_x: int | None
    out_y: int | None

    @property
    def inputs(self) -> tuple[int, ...]:
        return (self.ym2, self.ym1, self.yy, self.xx, self.xp1, self.xp2)

    @property
    def outputs(self) -> tuple[int, ...]:
        outs = []
        if self.out_x is not None:
            outs.append(self.out_x)
        if self.out_y is not None:
            outs.append(self.out_y)
        return tuple(outs)


Gate = Selector | CombinePair


class Network:
    """Wires, gates in topological order, and a designated output sequence."""

    def __init__(self, num_inputs: int):
        self.num_inputs = num_inputs
        # wire id -> source: ("input", slot) | ("const", 0|1) | ("gate", gate_idx, pos)
        self.sources: list[tuple] = [("input", i) for i in range(num_inputs)]
        self.gates: list[Gate] = []
        self.outputs: list[int] = []
        self._const_wire: dict[int, int] = {}

    # -- construction -----------------------------------------------------

    def input_wires(self) -> list[int]:
        return list(range(self.num_inputs))

    def const_wire(self, bit: int) -> int:
        if bit not in (0, 1):
            raise ValueError("constant wires carry 0 or 1")
        if bit not in self._const_wire:
            self.sources.append(("const", bit))
            self._const_wire[bit] = len(self.sources) - 1
        return self._const_wire[bit]

    def _new_wires(self, count: int, gate_idx: int) -> tuple[int, ...]:
        base = len(self.sources)
        for pos in range(count):
            self.sources.append(("gate", gate_idx, pos))
        return tuple(range(base, base + count))

    def _check_defined(self, wires: Sequence[int]) -> None:
        for w in wires:
            if not 0 <= w < len(self.sources):
                raise ValueError(f"undefined wire {w}")

    def add_selector(self, inputs: Sequence[int], m: int) -> tuple[int, ...]:
        if not 1 <= m <= len(inputs):
            raise ValueError(f"selector needs 1 <= m <= n, got m={m}, n={len(inputs)}")
        self._check_defined(inputs)
        gate_idx = len(self.gates)
        outs = self._new_wires(m, gate_idx)
        self.gates.append(Selector(tuple(inputs), outs))
        return outs

    def add_combine(self, ym2: int, ym1: int, yy: int, xx: int, xp1: int, xp2: int,
                    want_x: bool, want_y: bool) -> tuple[int | None, int | None]:
        self._check_defined((ym2, ym1, yy, xx, xp1, xp2))
        if not (want_x or want_y):
            raise ValueError("combine pair must produce at least one output")
        gate_idx = len(self.gates)
        out_x = out_y = None
        if want_x:
            (out_x,) = self._new_wires(1, gate_idx)
        if want_y:
            (out_y,) = self._new_wires(1, gate_idx)
        self.gates.append(CombinePair(ym2, ym1, yy, xx, xp1, xp2, out_x, out_y))
        return out_x, out_y

    def set_outputs(self, wires: Sequence[int]) -> None:
        self._check_defined(wires)
        self.outputs = list(wires)

    # -- queries -----------------------------------------------------------

    def eval(self, bits: Sequence[int]) -> list[int]:
        """Evaluate obliviously on a 0-1 input of length num_inputs."""
        if len(bits) != self.num_inputs:
            raise ValueError(f"expected {self.num_inputs} input bits, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("inputs must be 0/1")
        val = [0] * len(self.sources)
        for w, src in enumerate(self.sources):
            if src[0] == "input":
                val[w] = bits[src[1]]
            elif src[0] == "const":
                val[w] = src[1]
        for gate in self.gates:
            if isinstance(gate, Selector):
                top = sorted((val[w] for w in gate.inputs), reverse=True)
                for w, v in zip(gate.outputs, top):
                    val[w] = v
            else:
                ym2, ym1, yy = val[gate.ym2], val[gate.ym1], val[gate.yy]
                xx, xp1, xp2 = val[gate.xx], val[gate.xp1], val[gate.xp2]
                if gate.out_x is not None:
                    val[gate.out_x] = (ym1 & xx) | (ym2 & xp1)
                if gate.out_y is not None:
                    val[gate.out_y] = yy | xp2 | (ym1 & xp1)
        return [val[w] for w in self.outputs]

    def gate_histogram(self) -> tuple[dict[tuple[int, int], int], int]:
        """Counts of selector gates keyed by (order, m), plus combine-pair count."""
        hist: dict[tuple[int, int], int] = {}
        combines = 0
        for gate in self.gates:
            if isinstance(gate, Selector):
                key = (gate.order, gate.m)
                hist[key] = hist.get(key, 0) + 1
            else:
                combines += 1
        return hist, combines

    def is_permutation_network(self) -> bool:
        """True when no gate discards elements (every selector is a full sorter)."""
        return all(isinstance(g, CombinePair) or g.m == g.order for g in self.gates)

    @property
    def num_gates(self) -> int:
        return len(self.gates)


def cnf_cost(net: Network, needed_prefix: int | None = None) -> tuple[int, int]:
    """Exact (variables, clauses) the at-most encoder would emit for this network.

    Computed by a dry-run emission (including constant simplification) with
    free input literals and no output assertion.  With needed_prefix, gate
    outputs that do not feed the first needed_prefix network outputs are
    skipped, matching the truncated accounting used for mergers embedded in a
    larger selection network.
    """
    from .encode import dry_run_cost

    return dry_run_cost(net, needed_prefix=needed_prefix)
