from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from mstint.graphcore import Instance
from mstint.instance_io import BudgetPolicy, generate
from mstint.levels import Reject, round_weights
from mstint.solver import prepare


def brute_mst(instance: Instance, active) -> int | None:
    """Cheapest spanning tree by trying every ``(n-1)``-subset; None if disconnected."""
    ids = sorted(active)
    n = instance.n
    best = None
    for combo in itertools.combinations(ids, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for i in combo:
            e = instance.edges[i]
            a, b = find(e.u), find(e.v)
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            w = sum(instance.edges[i].weight for i in combo)
            best = w if best is None else min(best, w)
    return best


def brute_components(n: int, pairs) -> int:
    adj = {v: set() for v in range(n)}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen, count = set(), 0
    for s in range(n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x] - seen)
    return count


def brute_walk(inst, removal=()):
    """Shortest closed walk via Floyd-Warshall distances and every vertex permutation."""
    n = inst.n
    inf = float("inf")
    d = [[0 if a == b else inf for b in range(n)] for a in range(n)]
    for e in inst.edges:
        if e.id not in removal:
            d[e.u][e.v] = d[e.v][e.u] = min(d[e.u][e.v], e.weight)
    for k, a, b in itertools.product(range(n), repeat=3):
        d[a][b] = min(d[a][b], d[a][k] + d[k][b])
    best = inf
    for perm in itertools.permutations(range(1, n)):
        tour = (0, *perm, 0)
        best = min(best, sum(d[x][y] for x, y in zip(tour, tour[1:])))
    return best


def subsets(items):
    items = list(items)
    return itertools.chain.from_iterable(
        itertools.combinations(items, k) for k in range(len(items) + 1)
    )


def worked_instance() -> Instance:
    """Path connector 0-1-2-3 (weight 2) plus a=0-1, b=2-3 (weight 1, cost 2), z=1-2 (weight 0, cost 3)."""
    return Instance.build(
        4,
        [
            (0, 1, 2, None), (1, 2, 2, None), (2, 3, 2, None),
            (0, 1, 1, 2),  # a
            (2, 3, 1, 2),  # b
            (1, 2, 0, 3),  # z
        ],
        4,
    )


WORKED_A, WORKED_B, WORKED_Z = 3, 4, 5


def random_decompositions(seed: int, count: int, max_n: int = 8, max_m: int = 16, max_weight: int = 8):
    """Seeded stream of (raw instance, level decomposition) with a nonempty ground set."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, max_n)
        m = rng.randint(max(n - 1, 2), max_m)
        inst = generate(rng.randrange(1 << 30), n, m, max_weight, 5, BudgetPolicy.below_cut(0.5))
        try:
            prep = prepare(round_weights(inst)[0])
        except Reject:
            continue
        if prep.decomp is not None and prep.decomp.ground:
            out.append((inst, prep.decomp))
    return out


@st.composite
def instances(draw, max_n: int = 6, max_m: int = 10, max_weight: int = 8, max_cost: int = 5):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(n - 1, max_m))
    tree = [(draw(st.integers(0, k - 1)), k) for k in range(1, n)]
    extra = []
    for _ in range(m - (n - 1)):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 2))
        extra.append((u, v if v < u else v + 1))
    spec = [
        (u, v, draw(st.integers(0, max_weight)), draw(st.integers(1, max_cost)))
        for u, v in tree + extra
    ]
    budget = draw(st.integers(1, max(1, sum(c for *_, c in spec) // 2)))
    return Instance.build(n, spec, budget)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
