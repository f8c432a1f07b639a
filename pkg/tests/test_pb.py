"""OPB parsing, base search, digit planning, and the PB encoding chain."""

import random

import pytest

from cardnet.cnf import FALSE, TRUE, CnfFormula
from cardnet.pb import (MixedRadixBase, PbConstraint, PbSyntaxError, base_cost,
                        emit_normalizer, encode_goal_bound, encode_pb, find_base,
                        normalize_pb, parse_opb, plan_digits, simplify_rhs,
                        to_digits, value_of)
from cardnet.sat import dpll_sat

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def test_parse_opb_objective_and_constraints():
    text = "min: +1 x1 +2 x2 ;\n+2 x1 +3 x2 +5 x3 >= 6 ;\n"
    p = parse_opb(text)
    assert p.objective == [(1, 1), (2, 2)]
    assert len(p.constraints) == 1
    c = p.constraints[0]
    assert c.terms == ((2, 1), (3, 2), (5, 3)) and c.rel == ">=" and c.k == 6


def test_parse_opb_examples():
    p = parse_opb("+5 x1 +7 x2 >= 9 ;\n")
    assert p.constraints[0].terms == ((5, 1), (7, 2)) and p.constraints[0].k == 9
    p = parse_opb("* a comment\n+1 x1 -1 x2 <= 0 ;\n")
    assert p.constraints[0].terms == ((1, 1), (-1, 2))
    assert p.constraints[0].rel == "<="


def test_parse_opb_errors_are_positional():
    with pytest.raises(PbSyntaxError) as err:
        parse_opb("+1 x1 >= 1 ;\n+1 x1 >= 1\n")
    assert err.value.line == 2
    with pytest.raises(PbSyntaxError):
        parse_opb("+1 x1 x2 >= 1 ;\n")  # nonlinear product
    with pytest.raises(PbSyntaxError):
        parse_opb(f"+{2**63} x1 >= 1 ;\n")


def test_normalize_pb_examples():
    out = normalize_pb(PbConstraint(((1, 1), (-1, 2)), "<=", 0))
    assert out == [PbConstraint(((1, -1), (1, 2)), ">=", 1)]

    out = normalize_pb(PbConstraint(((2, 1), (3, 2), (5, 3)), "<=", 6))
    (c,) = out
    assert c.rel == ">=" and c.k == 4
    assert sorted(c.terms) == [(2, -1), (3, -2), (5, -3)]

    out = normalize_pb(PbConstraint(((2, 1), (3, 2)), ">=", 4))
    assert out == [PbConstraint(((3, 2), (2, 1)), ">=", 4)] or \
        out[0].rel == ">=" and set(out[0].terms) == {(2, 1), (3, 2)} and out[0].k == 4

    assert normalize_pb(PbConstraint(((2, 1),), ">=", 0)) == []
    eq = normalize_pb(PbConstraint(((1, 1), (1, 2)), "=", 1))
    assert len(eq) == 2


def test_normalize_pb_merges_duplicates():
    (c,) = normalize_pb(PbConstraint(((2, 1), (3, 1), (1, 2)), ">=", 4))
    assert dict((abs(l), a) for a, l in c.terms) == {1: 5, 2: 1}


def test_normalize_pb_truth_table_equivalence():
    rng = random.Random(23)
    for _ in range(120):
        n = rng.randint(1, 4)
        terms = tuple((rng.randint(-6, 6), rng.choice([1, -1]) * rng.randint(1, n))
                      for _ in range(rng.randint(1, 5)))
        rel = rng.choice([">=", "<=", "="])
        k = rng.randint(-8, 12)
        c = PbConstraint(terms, rel, k)
        norm = normalize_pb(c)
        for bits in range(1 << n):
            model = {v: bool((bits >> (v - 1)) & 1) for v in range(1, n + 1)}
            assert c.holds(model) == all(nc.holds(model) for nc in norm)


def test_digits_worked_example():
    base = MixedRadixBase((3, 5))
    assert to_digits(164, base) == [2, 4, 10]
    assert value_of([2, 4, 10], base) == 164
    assert to_digits(0, base) == [0, 0, 0]


def test_digits_round_trip_random():
    rng = random.Random(4)
    for _ in range(300):
        radices = tuple(rng.choice(PRIMES) for _ in range(rng.randint(0, 4)))
        base = MixedRadixBase(radices)
        v = rng.randrange(10 ** 6)
        digits = to_digits(v, base)
        assert value_of(digits, base) == v
        assert all(0 <= d < r for d, r in zip(digits, radices))


def test_find_base_worked_example():
    coeffs = [2, 2, 2, 2, 5, 18]
    base = find_base(coeffs)
    assert base_cost(coeffs, base) <= 8
    assert base_cost(coeffs, MixedRadixBase((2, 3, 3))) == 8


def test_find_base_unary_when_all_ones():
    assert find_base([1, 1, 1]).radices == ()


def exhaustive_best_cost(coeffs):
    # every prime sequence whose weights stay within the largest coefficient
    best = sum(coeffs)
    stack = [((), 1)]
    while stack:
        radices, w = stack.pop()
        best = min(best, base_cost(coeffs, MixedRadixBase(radices)))
        for p in PRIMES:
            if w * p <= max(coeffs):
                stack.append((radices + (p,), w * p))
    return best


def test_find_base_matches_exhaustive():
    rng = random.Random(31)
    for _ in range(50):
        coeffs = [rng.randint(1, 60) for _ in range(rng.randint(1, 7))]
        assert base_cost(coeffs, find_base(coeffs)) == exhaustive_best_cost(coeffs)


def test_simplify_rhs_examples():
    base = MixedRadixBase((2, 2))
    c = PbConstraint(((5, 1), (7, 2)), ">=", 9)
    assert simplify_rhs(c, base) == (3, 12)
    # the non-minimal variant (add 7, bound 16) is also an exact multiple
    assert (9 + 7) % base.weights[-1] == 0
    c0 = PbConstraint(((5, 1), (7, 2)), ">=", 8)
    assert simplify_rhs(c0, base) == (0, 8)


def test_plan_digit_decomposition():
    # coefficient spread over weights (1, 2, 6, 18)
    c = PbConstraint(((2, 1), (2, 2), (2, 3), (2, 4), (5, 5), (18, 6)), ">=", 23)
    plan = plan_digits(c, MixedRadixBase((2, 3, 3)))
    nonconst = [[(l, m) for l, m in pos.bundles if l is not TRUE]
                for pos in plan.positions]
    assert nonconst[0] == [(5, 1)]
    assert nonconst[1] == [(1, 1), (2, 1), (3, 1), (4, 1), (5, 2)]
    assert nonconst[2] == []
    assert nonconst[3] == [(6, 1)]
    # digit accounting: weights times multiplicities rebuild the coefficients
    total = sum(pos.weight * sum(m for l, m in pos.bundles if l is not TRUE)
                for pos in plan.positions)
    assert total == 2 + 2 + 2 + 2 + 5 + 18
    with_const = sum(pos.weight * sum(m for _, m in pos.bundles)
                     for pos in plan.positions)
    assert with_const == total + plan.const_add


def test_plan_digit_accounting_random():
    rng = random.Random(61)
    for _ in range(80):
        n = rng.randint(1, 6)
        terms = tuple((rng.randint(1, 200), i + 1) for i in range(n))
        k = rng.randint(1, sum(a for a, _ in terms))
        c = PbConstraint(terms, ">=", k)
        base = find_base([a for a, _ in terms])
        if not base.radices:
            continue
        plan = plan_digits(c, base)
        total = sum(pos.weight * sum(m for _, m in pos.bundles)
                    for pos in plan.positions)
        assert total == sum(a for a, _ in terms) + plan.const_add
        assert plan.adjusted_k % base.weights[-1] == 0


def test_encode_pb_single_assertion_unit():
    f = CnfFormula()
    f.fresh_vars(2)
    c = PbConstraint(((5, 1), (7, 2)), ">=", 9)
    enc = encode_pb(f, c, MixedRadixBase((2, 2)))
    units = [cl for cl in f.clauses if len(cl) == 1]
    assert len(units) == 1 and units[0][0] > 0
    assert units[0][0] == enc.output_lits[2]  # third top output
    for bits in range(4):
        model = {1: bool(bits & 1), 2: bool(bits & 2)}
        fixing = [v if model[v] else -v for v in (1, 2)]
        want = "SAT" if c.holds(model) else "UNSAT"
        assert dpll_sat(f, fixing)[0] == want


def test_encode_pb_cardinality_degenerates_to_atmost():
    f = CnfFormula()
    f.fresh_vars(3)
    c = PbConstraint(((1, 1), (1, 2), (1, 3)), ">=", 2)
    encode_pb(f, c, MixedRadixBase(()))
    for bits in range(8):
        model = {v: bool((bits >> (v - 1)) & 1) for v in (1, 2, 3)}
        fixing = [v if model[v] else -v for v in (1, 2, 3)]
        assert dpll_sat(f, fixing)[0] == ("SAT" if c.holds(model) else "UNSAT")


def test_encode_pb_infeasible_bound():
    f = CnfFormula()
    f.fresh_vars(2)
    encode_pb(f, PbConstraint(((2, 1), (3, 2)), ">=", 6))
    assert f.trivially_unsat


def test_carry_chain_counts_floor_quotient():
    # a top-position output is assertable exactly when floor((value+const)/w)
    # reaches its index: the carry chain computes the exact quotient
    from cardnet.cnf import TRUE as T

    f = CnfFormula()
    f.fresh_vars(3)
    c = PbConstraint(((3, 1), (5, 2), (6, 3)), ">=", 7)
    base = find_base([3, 5, 6])
    enc = encode_pb(f, c, base)
    plan = plan_digits(c, base)
    w_last = base.weights[-1]
    for bits in range(8):
        model = {v: bool((bits >> (v - 1)) & 1) for v in (1, 2, 3)}
        value = c.value(model) + plan.const_add
        fixing = [v if model[v] else -v for v in (1, 2, 3)]
        if dpll_sat(f, fixing)[0] == "UNSAT":
            continue  # the assertion unit itself rules this fixing out
        for j, out in enumerate(enc.output_lits, start=1):
            want = value // w_last >= j
            if out is T:
                assert want, (bits, j)
            else:
                assert (dpll_sat(f, fixing + [out])[0] == "SAT") == want, (bits, j)


def test_random_pb_equisat():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 6)
        coeffs = [rng.randint(1, 20) for _ in range(n)]
        lits = [(i + 1) * rng.choice((1, -1)) for i in range(n)]
        k = rng.randint(1, sum(coeffs))
        c = PbConstraint(tuple(zip(coeffs, lits)), ">=", k)
        f = CnfFormula()
        f.fresh_vars(n)
        for norm in normalize_pb(c):
            encode_pb(f, norm)
        for bits in range(1 << n):
            model = {v: bool((bits >> (v - 1)) & 1) for v in range(1, n + 1)}
            fixing = [v if model[v] else -v for v in range(1, n + 1)]
            assert dpll_sat(f, fixing)[0] == ("SAT" if c.holds(model) else "UNSAT")


def test_normalizer_remainder_semantics():
    # remainder j is forced exactly when count % r >= j within an open block
    for r in (2, 3):
        for length in (4, 5, 6):
            f = CnfFormula()
            lits = f.fresh_vars(length)
            # sorted unary run: u_p is anything with u_1 >= u_2 >= ...
            carries, rems = emit_normalizer(f, lits, r)
            assert carries == [lits[q * r - 1] for q in range(1, length // r + 1)]
            for count in range(length + 1):
                fixing = [l if i < count else -l for i, l in enumerate(lits)]
                for j, rem in enumerate(rems, start=1):
                    if rem is FALSE:
                        continue
                    forced = dpll_sat(f, fixing + [-rem])[0] == "UNSAT"
                    # forced iff some open block shows >= j past a full multiple
                    expect = any(q * r + j <= count < (q + 1) * r
                                 for q in range(0, length // r + 1))
                    assert forced == expect, (r, length, count, j)


def test_goal_bound_flagged():
    f = CnfFormula()
    x1, x2 = f.fresh_vars(2)
    flag = f.fresh_var()
    encode_goal_bound(f, [(1, x1), (1, x2)], 2, flag)
    # with the flag on, x1 + x2 <= 1
    assert dpll_sat(f, [flag, x1, x2])[0] == "UNSAT"
    assert dpll_sat(f, [flag, x1, -x2])[0] == "SAT"
    # with the flag off the bound is vacuous
    assert dpll_sat(f, [-flag, x1, x2])[0] == "SAT"


def test_goal_bound_trivial_cases():
    f = CnfFormula()
    x1 = f.fresh_var()
    flag = f.fresh_var()
    encode_goal_bound(f, [(2, x1)], -1, flag)  # impossible bound
    assert dpll_sat(f, [flag])[0] == "UNSAT"
    assert dpll_sat(f, [-flag])[0] == "SAT"

    g = CnfFormula()
    y1 = g.fresh_var()
    gflag = g.fresh_var()
    encode_goal_bound(g, [(2, y1)], 10, gflag)  # vacuous bound
    assert g.num_clauses == 0


def test_goal_bound_negative_coefficients():
    f = CnfFormula()
    x1, x2 = f.fresh_vars(2)
    # f = 2*x1 - 3*x2; bound f <= 0 via bound=1
    encode_goal_bound(f, [(2, x1), (-3, x2)], 1, None)
    for bits in range(4):
        model = {1: bool(bits & 1), 2: bool(bits & 2)}
        val = 2 * model[1] - 3 * model[2]
        fixing = [v if model[v] else -v for v in (1, 2)]
        assert dpll_sat(f, fixing)[0] == ("SAT" if val <= 0 else "UNSAT")
