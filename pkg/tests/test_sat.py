"""Unit propagation, the DPLL oracle, and the propagation harnesses."""

import random

from cardnet.cnf import CnfFormula
from cardnet.encode import EncodeOptions, encode_atmost
from cardnet.sat import (Assignment, Propagator, check_arc_consistency,
                         check_forward_prop, dpll_sat, unit_propagate)

from conftest import formula_from_clauses


def test_up_unit():
    f = formula_from_clauses(1, [(1,)])
    res = unit_propagate(f)
    assert res.status == "fixpoint"
    assert res.assignment.values == {1: True}


def test_up_chain():
    f = formula_from_clauses(3, [(-1, 2), (-2, 3)])
    res = unit_propagate(f, [1])
    assert res.status == "fixpoint"
    assert res.assignment.values == {1: True, 2: True, 3: True}


def test_up_conflict():
    f = formula_from_clauses(1, [(1,), (-1,)])
    res = unit_propagate(f)
    assert res.status == "conflict"
    assert res.conflict_clause is not None


def test_up_trail_is_deterministic():
    f = formula_from_clauses(4, [(-1, 2), (-1, 3), (-2, 4)])
    t1 = unit_propagate(f, [1]).assignment.trail
    t2 = unit_propagate(f, [1]).assignment.trail
    assert t1 == t2
    assert [v for v, _, _ in t1] == [1, 2, 3, 4]  # FIFO clause-scan order


def test_up_confluence_random_orders():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(3, 8)
        clauses = []
        for _ in range(rng.randint(2, 12)):
            clause = tuple({rng.choice([1, -1]) * rng.randint(1, n)
                            for _ in range(rng.randint(1, 3))})
            clauses.append(clause)
        f = formula_from_clauses(n, clauses)
        seeds = [v for v in range(1, n // 2 + 1)]
        results = set()
        for _ in range(5):
            rng.shuffle(seeds)
            res = unit_propagate(f, list(seeds))
            key = (res.status,
                   frozenset(res.assignment.values.items()) if res.status == "fixpoint" else None)
            results.add(key)
        assert len(results) == 1


def test_dpll_examples():
    f = formula_from_clauses(2, [(1, 2), (-1,)])
    status, model = dpll_sat(f)
    assert status == "SAT" and model[2] is True and model[1] is False
    f = formula_from_clauses(1, [(1,), (-1,)])
    assert dpll_sat(f)[0] == "UNSAT"


def test_dpll_model_satisfies():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(2, 10)
        clauses = [tuple({rng.choice([1, -1]) * rng.randint(1, n)
                          for _ in range(rng.randint(1, 4))})
                   for _ in range(rng.randint(1, 20))]
        f = formula_from_clauses(n, clauses)
        status, model = dpll_sat(f)
        if status == "SAT":
            assert all(any(model[abs(l)] == (l > 0) for l in c) for c in f.clauses)


def _mask_sat(n, clauses):
    """Exhaustive truth-table satisfiability via bit-parallel masks."""
    full = (1 << (1 << n)) - 1
    var_masks = []
    for i in range(n):
        m = 0
        for a in range(1 << n):
            if (a >> i) & 1:
                m |= 1 << a
        var_masks.append(m)
    acc = full
    for clause in clauses:
        cm = 0
        for l in clause:
            vm = var_masks[abs(l) - 1]
            cm |= vm if l > 0 else (~vm & full)
        acc &= cm
    return acc != 0


def test_dpll_agrees_with_truth_table():
    rng = random.Random(99)
    for trial in range(500):
        n = rng.randint(1, 18) if trial % 10 == 0 else rng.randint(1, 10)
        clauses = [tuple({rng.choice([1, -1]) * rng.randint(1, n)
                          for _ in range(rng.randint(1, 4))})
                   for _ in range(rng.randint(1, 2 * n + 4))]
        f = formula_from_clauses(n, clauses)
        want = "SAT" if _mask_sat(n, f.clauses) else "UNSAT"
        assert dpll_sat(f)[0] == want


def test_dpll_with_assumptions_on_encoding():
    f = CnfFormula()
    lits = f.fresh_vars(3)
    encode_atmost(f, lits, 1, EncodeOptions(method="oe4"))
    assert dpll_sat(f, [lits[0], lits[1]])[0] == "UNSAT"
    assert dpll_sat(f, [lits[0]])[0] == "SAT"


def test_ac_scenario_example():
    f = CnfFormula()
    lits = f.fresh_vars(5)
    enc = encode_atmost(f, lits, 2, EncodeOptions(method="oe4"))
    # asserting inputs 2 and 5 must drive 1, 3, 4 to false
    report = check_arc_consistency(enc, 2, (1, 4))
    assert report.passed
    prop = Propagator(f)
    res = prop.propagate(Assignment(), [lits[1]])
    res = prop.propagate(res.assignment, [lits[4]])
    assert all(res.assignment.lit_value(lits[i]) is False for i in (0, 2, 3))
    # phase 2 inside the harness asserts another input and expects conflict
    res = prop.propagate(res.assignment, [lits[0]])
    assert res.status == "conflict"


def test_ac_k0():
    f = CnfFormula()
    lits = f.fresh_vars(4)
    enc = encode_atmost(f, lits, 0, EncodeOptions(method="oe4"))
    assert check_arc_consistency(enc, 0, ()).passed


def test_forward_prop_examples():
    f = CnfFormula()
    lits = f.fresh_vars(5)
    enc = encode_atmost(f, lits, 2, EncodeOptions(method="oe4"))
    assert check_forward_prop(enc, 0, ()).passed
    assert check_forward_prop(enc, 1, (3,)).passed
    assert check_forward_prop(enc, 2, (0, 4)).passed
    assert check_forward_prop(enc, 3, (0, 2, 4)).passed  # k+1 ones: conflict


def test_seed_conflict_reported_at_step_zero():
    f = CnfFormula()
    lits = f.fresh_vars(2)
    f.add_clause([-lits[0]])
    f.add_clause([lits[0]])

    class FakeEnc:
        formula = f
        input_lits = tuple(lits)

    report = check_arc_consistency(FakeEnc(), 1, (1,))
    assert not report.passed
    assert "step 0" in report.detail
