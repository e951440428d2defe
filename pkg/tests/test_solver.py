import random

import pytest
from hypothesis import given, settings

from conftest import WORKED_A, WORKED_B, WORKED_Z, instances, subsets, worked_instance
from mstint.graphcore import Instance, mst_weight
from mstint.instance_io import BudgetPolicy, generate
from mstint.levels import Reject, round_weights
from mstint.solver import TooLarge, exact_opt, solve


def brute_opt(inst):
    best = None
    for r in subsets(sorted(inst.interdictable)):
        if inst.cost(r) <= inst.budget:
            w = mst_weight(inst, inst.all_edges - set(r))
            best = w if best is None else max(best, w)
    return best


def test_worked_instance_solution():
    report = solve(worked_instance())
    assert report.cost <= 4
    assert report.case in {"1", "3"}
    _, opt = exact_opt(worked_instance())
    assert 7 * report.rounded_value >= opt


def test_case_two_takes_every_interdictable_edge():
    inst = worked_instance().replace(budget=8)
    report = solve(inst)
    assert report.case == "2"
    assert report.removal == {WORKED_A, WORKED_B, WORKED_Z}


def test_trivial_when_no_removal_changes_the_tree():
    inst = Instance.build(3, [(0, 1, 0, 5), (1, 2, 0, 5), (0, 2, 0, 5), (0, 1, 0, 5)], 2)
    report = solve(inst)
    assert report.case == "trivial"
    assert report.removal == frozenset()
    assert report.original_value == 0


def test_solve_rejects_disconnectable_instances():
    inst = Instance.build(3, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1)], 2)
    with pytest.raises(Reject):
        solve(inst)


@settings(max_examples=120, deadline=None)
@given(instances(max_n=6, max_m=10))
def test_guarantees_against_brute_force(inst):
    try:
        report = solve(inst)
    except Reject:
        return
    rounded, _ = round_weights(inst)
    assert report.cost <= inst.budget
    assert 7 * report.rounded_value >= brute_opt(rounded)
    assert 14 * report.original_value >= brute_opt(inst)


def test_case_three_meets_hull_bound():
    rng = random.Random(4)
    seen = 0
    while seen < 40:
        inst = generate(rng.randrange(1 << 30), rng.randint(3, 7), rng.randint(6, 14), 8, 5,
                        BudgetPolicy.below_cut(0.5))
        try:
            report = solve(inst)
        except Reject:
            continue
        if report.case != "3":
            continue
        seen += 1
        assert 7 * report.rounded_value >= report.nu_star
        _, ropt = exact_opt(round_weights(inst)[0])
        assert report.nu_star >= ropt
        assert report.witness_low is not None and report.witness_high is not None


def test_backends_agree_on_solution():
    rng = random.Random(8)
    for _ in range(30):
        inst = generate(rng.randrange(1 << 30), 6, 12, 8, 5, BudgetPolicy.below_cut(0.5))
        try:
            a = solve(inst, backend="exhaustive")
        except Reject:
            continue
        assert solve(inst, backend="mnp") == a


def test_exact_opt_ties_break_lexicographically():
    # removing edge 0 or edge 1 both force a weight-5 backup
    inst = Instance.build(3, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 1, 5, None), (1, 2, 5, None)], 1)
    assert exact_opt(inst) == (frozenset({0}), 6)
    # with a useless parallel twin the empty set ties and wins
    twin = Instance.build(2, [(0, 1, 1, 1), (0, 1, 1, 1), (0, 1, 9, None)], 1)
    assert exact_opt(twin) == (frozenset(), 1)


def test_exact_opt_candidates_and_limits():
    inst = worked_instance()
    assert exact_opt(inst, candidates={WORKED_Z}) == (frozenset({WORKED_Z}), 4)
    with pytest.raises(TooLarge):
        exact_opt(inst, limit=2)
    disc = Instance.build(2, [(0, 1, 1, 1)], 1)
    with pytest.raises(ValueError, match="disconnects"):
        exact_opt(disc)
