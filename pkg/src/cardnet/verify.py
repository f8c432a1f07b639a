"""In-process verification suites behind the `verify` CLI subcommand.

These are compact mirrors of the test suite: the zero-one selection checks
run every construction exhaustively over all 0-1 inputs at desk scale, the
arc-consistency and equisatisfiability suites drive the propagation
harnesses, and the sizes suite evaluates every registered closed form
against freshly built networks.
"""

from __future__ import annotations

import random
from itertools import combinations

from . import build
from .cnf import CnfFormula
from .encode import (EncodeOptions, NETWORK_METHODS, encode_atmost)
from .formulas import registry
from .network import Network
from .sat import check_arc_consistency, dpll_sat


def threshold_masks(n: int) -> list[int]:
    """For each p, the bitmask over all 2^n assignments marking inputs with at
    least p ones; index 0 is the all-ones mask."""
    full = (1 << (1 << n)) - 1
    var_masks = []
    for i in range(n):
        mask = 0
        for a in range(1 << n):
            if (a >> i) & 1:
                mask |= 1 << a
        var_masks.append(mask)
    th = [full] + [0] * n
    for x in var_masks:
        for p in range(n, 0, -1):
            th[p] |= th[p - 1] & x
    return th


def mask_eval(net: Network, n: int) -> list[int]:
    """Evaluate the network over all 2^n inputs at once with bit-parallel masks."""
    full = (1 << (1 << n)) - 1
    val = [0] * len(net.sources)
    for w, src in enumerate(net.sources):
        if src[0] == "input":
            i = src[1]
            mask = 0
            for a in range(1 << n):
                if (a >> i) & 1:
                    mask |= 1 << a
            val[w] = mask
        elif src[0] == "const":
            val[w] = full if src[1] else 0
    for gate in net.gates:
        if hasattr(gate, "m"):  # Selector
            ins = [val[w] for w in gate.inputs]
            th = [full] + [0] * len(ins)
            for x in ins:
                for p in range(len(ins), 0, -1):
                    th[p] |= th[p - 1] & x
            for pos, w in enumerate(gate.outputs, start=1):
                val[w] = th[pos]
        else:
            ym2, ym1, yy = val[gate.ym2], val[gate.ym1], val[gate.yy]
            xx, xp1, xp2 = val[gate.xx], val[gate.xp1], val[gate.xp2]
            if gate.out_x is not None:
                val[gate.out_x] = (ym1 & xx) | (ym2 & xp1)
            if gate.out_y is not None:
                val[gate.out_y] = yy | xp2 | (ym1 & xp1)
    return [val[w] for w in net.outputs]


def selection_failures(net: Network, n: int, k: int) -> str | None:
    """Check, over all 2^n inputs at once, that the output prefix equals the
    input threshold functions and that no tail position beats position k."""
    outs = mask_eval(net, n)
    th = threshold_masks(n)
    kk = min(k, len(outs))
    for p in range(1, kk + 1):
        want = th[p] if p <= n else 0
        if outs[p - 1] != want:
            return f"output {p} differs from the {p}-threshold"
    if kk:
        gate_mask = outs[kk - 1]
        for t in range(kk, len(outs)):
            if outs[t] & ~gate_mask:
                return f"tail position {t + 1} not dominated"
    return None


def sorter_failures(net: Network, n: int) -> str | None:
    return selection_failures(net, n, len(net.outputs))


def run_zero_one(limit: int = 8, log=print) -> bool:
    ok = True

    def check(name: str, net: Network, n: int, k: int):
        nonlocal ok
        fail = selection_failures(net, n, k)
        if fail:
            ok = False
            log(f"  FAIL {name}: {fail}")

    for n in (2, 4, 8):
        if n <= limit:
            check(f"oe_sort({n})", build.oe_sort(n), n, n)
    for n in range(1, limit + 1):
        for k in range(0, n + 1):
            check(f"oe4_sel({n},{k})", build.oe4_sel(n, k), n, k)
            check(f"m_oe_sel({n},{k},2)", build.m_oe_sel(n, k, 2), n, k)
    for n in (2, 4, 8):
        if n > limit:
            continue
        for k in (1, 2, 4, 8):
            if k <= n:
                for variant in ("classic", "bitonic", "half_bitonic"):
                    check(f"pw_sel({n},{k},{variant})", build.pw_sel(n, k, variant), n, k)
                check(f"bit_sel({n},{k})", build.bit_sel(n, k), n, k)
    log(f"zero-one suite: {'PASS' if ok else 'FAIL'}")
    return ok


def run_ac(limit: int = 6, log=print) -> bool:
    ok = True
    rng = random.Random(2024)
    for method in ("oe4", "oe2"):
        for n in range(2, limit + 1):
            for k in range(0, n):
                formula = CnfFormula()
                lits = formula.fresh_vars(n)
                enc = encode_atmost(formula, lits, k,
                                    EncodeOptions(method=method))
                subsets = list(combinations(range(n), k))
                if len(subsets) > 20:
                    subsets = rng.sample(subsets, 20)
                for subset in subsets:
                    report = check_arc_consistency(enc, k, subset)
                    if not report.passed:
                        ok = False
                        log(f"  FAIL ac {method} n={n} k={k} {subset}: {report.detail}")
    log(f"arc-consistency suite: {'PASS' if ok else 'FAIL'}")
    return ok


def run_equisat(limit: int = 5, log=print) -> bool:
    ok = True
    for method in NETWORK_METHODS + ("sequential", "totalizer", "binomial"):
        for n in range(1, limit + 1):
            for k in range(0, n):
                formula = CnfFormula()
                lits = formula.fresh_vars(n)
                encode_atmost(formula, lits, k, EncodeOptions(method=method))
                for bits in range(1 << n):
                    fixing = [v if (bits >> i) & 1 else -v
                              for i, v in enumerate(lits)]
                    status, _ = dpll_sat(formula, fixing)
                    want = "SAT" if bin(bits).count("1") <= k else "UNSAT"
                    if status != want:
                        ok = False
                        log(f"  FAIL equisat {method} n={n} k={k} bits={bits:0{n}b}")
    log(f"equisatisfiability suite: {'PASS' if ok else 'FAIL'}")
    return ok


def run_sizes(log=print) -> dict[str, bool]:
    results: dict[str, bool] = {}
    for name, info in registry().items():
        if info.check is None:
            continue
        passed = bool(info.check())
        results[name] = passed
        log(f"  {'PASS' if passed else 'FAIL'} {name}")
    log(f"sizes suite: {'PASS' if all(results.values()) else 'FAIL'}")
    return results


def run_suite(which: str, log=print) -> bool:
    if which == "zero-one":
        return run_zero_one(log=log)
    if which == "ac":
        return run_ac(log=log)
    if which == "equisat":
        return run_equisat(log=log)
    if which == "sizes":
        return all(run_sizes(log=log).values())
    if which == "all":
        results = [run_zero_one(log=log), run_ac(log=log), run_equisat(log=log),
                   all(run_sizes(log=log).values())]
        return all(results)
    raise ValueError(f"unknown suite {which!r}")
