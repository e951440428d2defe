"""Acceptance suite: twelve criteria, each printing one PASS/FAIL line.

All comparisons are exact (integers and ``Fraction``); tolerances are zero.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES, brute_components, brute_walk, random_decompositions, subsets
from mstint.extensions import (
    McpInstance,
    TspInstance,
    edges_with_weights,
    mcp_to_interdiction,
    shen_fixture,
    tsp_interdict,
    tsp_walk_length,
)
from mstint.graphcore import Instance, mst_weight
from mstint.instance_io import BudgetPolicy, generate
from mstint.levels import Reject, round_weights
from mstint.pareto import extreme_supported_tuples
from mstint.patterns import (
    PartitionTower,
    algorithm2,
    analyze,
    block_ratio_bound_holds,
    overbudget_pattern,
    pattern_functions,
    prefix_dominance,
    top_identities_hold,
)
from mstint.sfm import ParametricObjective, sfm_min
from mstint.solver import best_of_two, exact_opt, solve


def record(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


# --- shared corpora --------------------------------------------------------

@pytest.fixture(scope="module")
def decompositions():
    """Random decompositions with n <= 8, m <= 16, weights <= 8, costs <= 5."""
    return random_decompositions(seed=2024, count=400)


@pytest.fixture(scope="module")
def removal_pairs(decompositions):
    rng = random.Random(99)
    pairs = []
    while len(pairs) < 1000:
        _, d = decompositions[len(pairs) % len(decompositions)]
        pairs.append((d, frozenset(e for e in d.ground if rng.random() < 0.5)))
    return pairs


@pytest.fixture(scope="module")
def overbudget_pairs(decompositions):
    rng = random.Random(7)
    pairs = []
    for _, d in itertools.cycle(decompositions):
        if len(pairs) >= 300:
            break
        if d.cost(d.ground) <= d.budget:
            continue
        while True:
            u = frozenset(e for e in d.ground if rng.random() < 0.6)
            if d.cost(u) > d.budget:
                break
        pairs.append((d, u))
    return pairs


# --- criteria --------------------------------------------------------------

def test_criterion_01_approximation_guarantee():
    rng = random.Random(1)
    start = time.perf_counter()
    solved = rejected = 0
    failures = []
    while solved < 500:
        n = rng.randint(2, 8)
        m = rng.randint(n - 1, 16)
        inst = generate(rng.randrange(1 << 30), n, m, 8, 5, BudgetPolicy.below_cut(0.5))
        assert inst.budget <= sum(e.cost for e in inst.edges) / 2 or inst.budget == 1
        try:
            report = solve(inst)
        except Reject:
            rejected += 1
            continue
        solved += 1
        _, opt = exact_opt(inst)
        _, ropt = exact_opt(round_weights(inst)[0])
        if not (Fraction(report.rounded_value) >= Fraction(ropt, 7)
                and Fraction(report.original_value) >= Fraction(opt, 14)):
            failures.append(inst)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    record(1, "approximation 7 (rounded) / 14 (original)", ok,
           f"{solved} instances, {len(failures)} violations, {rejected} rejected, {elapsed:.1f}s")
    assert ok


def test_criterion_02_value_formula(removal_pairs):
    bad = sum(
        d.val(u) != mst_weight(d.instance, d.instance.all_edges - u) for d, u in removal_pairs
    )
    record(2, "val(U) = MST weight of E minus U", bad == 0, f"{len(removal_pairs)} pairs, {bad} mismatches")
    assert bad == 0


def test_criterion_03_top_identities(removal_pairs):
    bad = sum(not top_identities_hold(PartitionTower(d, u)) for d, u in removal_pairs)
    record(3, "g_p(V) - 2^(p+1) = val(U), kappa_p(V) = 2c(U)", bad == 0,
           f"{len(removal_pairs)} pairs, {bad} mismatches")
    assert bad == 0


def test_criterion_04_greedy_budget_guarantee(overbudget_pairs):
    keys = ("budget_guarantee", "boost_over_budget", "boost_impact_gap", "fits_budget")
    bad = 0
    for d, u in overbudget_pairs:
        checks = analyze(d, u).checks
        bad += not all(checks[k] for k in keys)
    ok = bad == 0 and len(overbudget_pairs) >= 300
    record(4, "greedy set vs B*val(U)/(2c(U)) - 2^(p+1); booster over budget", ok,
           f"{len(overbudget_pairs)} cases, {bad} violations")
    assert ok


def test_criterion_05_best_of_two(overbudget_pairs):
    bad = 0
    for d, u in overbudget_pairs:
        r = best_of_two(d, u)
        bad += not (d.cost(r) <= d.budget
                    and Fraction(d.val(r)) >= Fraction(d.budget * d.val(u), 6 * d.cost(u)))
    record(5, "best of two >= B*val(U)/(6c(U))", bad == 0, f"{len(overbudget_pairs)} cases, {bad} violations")
    assert bad == 0


def test_criterion_06_block_ratio_bound(overbudget_pairs):
    bad = 0
    for d, u in overbudget_pairs:
        tower = PartitionTower(d, u)
        pattern, _ = algorithm2(d, u)
        boosted, _, _ = overbudget_pattern(d, u, tower)
        bad += not block_ratio_bound_holds(tower, pattern_functions(tower, pattern))
        bad += not block_ratio_bound_holds(tower, pattern_functions(tower, boosted))
    record(6, "per-block ratio bound for greedy and boosted patterns", bad == 0,
           f"{2 * len(overbudget_pairs)} patterns, {bad} violations")
    assert bad == 0


def test_criterion_07_prefix_dominance():
    rng = random.Random(17)
    checked = bad = 0
    while checked < 1000:
        k = rng.randint(1, 9)
        pairs = [(rng.randint(0, 40), rng.randint(0, 40)) for _ in range(k)]
        pairs.sort(key=lambda ab: (ab[1] != 0, -Fraction(ab[0], ab[1]) if ab[1] else 0))
        a, b = [x for x, _ in pairs], [y for _, y in pairs]
        q = rng.randint(1, k)
        lam = Fraction(rng.randint(0, 30), 30)
        if sum(b[: q - 1]) + lam * b[q - 1] <= 0:
            continue
        checked += 1
        bad += not prefix_dominance(a, b, q, lam)
    record(7, "prefix dominance", bad == 0, f"{checked} tuples, {bad} false")
    assert bad == 0


def hull(d):
    best = {}
    for s in subsets(d.ground):
        c, v = d.cost(s), d.val(s)
        best[c] = max(best.get(c, v), v)
    out = []
    for c, v in sorted(best.items()):
        if out and v <= out[-1][1]:
            continue
        while len(out) >= 2:
            (c1, v1), (c2, v2) = out[-2], out[-1]
            if (v2 - v1) * (c - c2) <= (v - v2) * (c2 - c1):
                out.pop()
            else:
                break
        out.append((c, v))
    return out


def test_criterion_08_pareto_front(decompositions):
    small = [d for _, d in decompositions if len(d.ground) <= 14][:200]
    bad = 0
    for d in small:
        front = extreme_supported_tuples(d)
        ws = [pt.witness for pt in front]
        bad += not (
            front.pairs() == hull(d)
            and all(a <= b for a, b in zip(ws, ws[1:]))
            and len(front) <= len(d.ground) + 1
        )
    ok = bad == 0 and len(small) >= 100
    record(8, "front = exhaustive hull, nested, size <= m+1", ok, f"{len(small)} instances, {bad} mismatches")
    assert ok


def test_criterion_09_sfm_backends(decompositions):
    rng = random.Random(23)
    pool = [d for _, d in decompositions if len(d.ground) <= 14]
    bad = 0
    for j in range(200):
        obj = ParametricObjective(pool[j % len(pool)])
        lam = Fraction(rng.randint(0, 400), rng.randint(1, 25))
        _, exhaustive = sfm_min(obj, lam, backend="exhaustive")
        _, mnp = sfm_min(obj, lam, backend="mnp")
        bad += exhaustive != mnp
    record(9, "min-norm-point = exhaustive minimum", bad == 0, f"200 lambdas, {bad} mismatches")
    assert bad == 0


def tsp_corpus(count):
    rng = random.Random(31)
    out = []
    while len(out) < count:
        n = rng.randint(2, 6)
        m = rng.randint(n, 9)
        raw = generate(rng.randrange(1 << 30), n, m, 7, 3, BudgetPolicy.below_cut(0.5))
        inst = Instance.build(n, [(e.u, e.v, e.weight + 1, e.cost) for e in raw.edges], raw.budget)
        try:
            out.append(TspInstance(inst))
        except ValueError:
            continue
    return out


def test_criterion_10_tsp_interdiction():
    start = time.perf_counter()
    bad_ratio = bad_sandwich = probes = 0
    corpus = tsp_corpus(100)
    for tsp in corpus:
        inst = tsp.instance
        best = 0
        for r in subsets(sorted(inst.interdictable)):
            if inst.cost(r) > inst.budget:
                continue
            walk = brute_walk(inst, frozenset(r))
            bad_sandwich += walk != tsp_walk_length(tsp, r)
            mst = mst_weight(inst, inst.all_edges - set(r))
            probes += 1
            bad_sandwich += not (mst <= walk <= 2 * mst)
            best = max(best, walk)
        result = tsp_interdict(tsp)
        bad_ratio += not (28 * tsp_walk_length(tsp, result.removal) >= best)
    elapsed = time.perf_counter() - start
    ok = bad_ratio == bad_sandwich == 0 and elapsed < 180
    record(10, "tour interdiction within 28, MST sandwich", ok,
           f"{len(corpus)} instances, {probes} probes, {bad_ratio}+{bad_sandwich} violations, {elapsed:.1f}s")
    assert ok


def test_criterion_11_component_reduction():
    rng = random.Random(41)
    bad = checked = 0
    for n in range(2, 8):
        for _ in range(25):
            m = rng.randint(1, 9)
            edges = tuple(tuple(rng.sample(range(n), 2)) for _ in range(m))
            q = rng.randint(1, 3)
            mcp = McpInstance(n, edges, q)
            _, value = exact_opt(mcp_to_interdiction(mcp))
            base = brute_components(n, edges)
            gain = max(
                brute_components(n, [e for k, e in enumerate(edges) if k not in r]) - base
                for r in subsets(range(m)) if len(r) <= q
            )
            checked += 1
            bad += value != gain
    record(11, "reduced interdiction value = component gain", bad == 0, f"{checked} graphs, {bad} mismatches")
    assert bad == 0


def test_criterion_12_fixture_counterexample():
    inst = shen_fixture()
    removal, value = exact_opt(inst)
    _, restricted = exact_opt(inst, candidates=edges_with_weights(inst, [1, 2, 3, 4, 5]))
    ok = (
        value == 103
        and removal == edges_with_weights(inst, [1, 2, 6])
        and restricted == 10
        and value > restricted
        and mst_weight(inst, inst.all_edges) == 3
    )
    record(12, "fixture optimum 103 beats restricted optimum 10", ok,
           f"optimum {value} via weights {sorted(inst.edges[i].weight for i in removal)}, restricted {restricted}")
    assert ok
