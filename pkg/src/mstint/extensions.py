"""Metric TSP interdiction, component-maximisation reductions and fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphcore import DISCONNECTED, Connectivity, Instance, components, global_min_cut
from .solver import SolveReport, solve

HELD_KARP_LIMIT = 12


@dataclass(frozen=True)
class TspInstance:
    """Graph with positive lengths (stored as weights) that no interdiction set disconnects."""

    instance: Instance

    def __post_init__(self):
        inst = self.instance
        if any(e.weight <= 0 for e in inst.edges):
            raise ValueError("edge lengths must be positive")
        if inst.n >= 2:
            _, cost = global_min_cut(inst, inst.all_edges)
            if cost <= inst.budget:
                raise ValueError("an interdiction set disconnects the graph")


def tsp_walk_length(tsp: TspInstance | Instance, removal: Iterable[int] = ()) -> int | Connectivity:
    """Shortest closed walk visiting every vertex in ``(V, E \\ removal)``.

    Closed walks in the graph are Hamiltonian cycles in its metric closure,
    so this is Held-Karp over all-pairs shortest path distances.
    """
    inst = tsp.instance if isinstance(tsp, TspInstance) else tsp
    n = inst.n
    if n > HELD_KARP_LIMIT:
        raise ValueError(f"Held-Karp is limited to {HELD_KARP_LIMIT} vertices")
    removal = frozenset(removal)
    inf = float("inf")
    dist = [[0 if a == b else inf for b in range(n)] for a in range(n)]
    for e in inst.edges:
        if e.id in removal:
            continue
        if e.weight < dist[e.u][e.v]:
            dist[e.u][e.v] = dist[e.v][e.u] = e.weight
    for k in range(n):
        dk = dist[k]
        for a in range(n):
            da = dist[a]
            via = da[k]
            if via == inf:
                continue
            for b in range(n):
                if via + dk[b] < da[b]:
                    da[b] = via + dk[b]
    if any(d == inf for d in dist[0]):
        return DISCONNECTED
    if n == 1:
        return 0

    # best[S][j]: shortest path from 0 through the set S (bitmask over 1..n-1) ending at j
    full = 1 << (n - 1)
    best = [[inf] * n for _ in range(full)]
    for j in range(1, n):
        best[1 << (j - 1)][j] = dist[0][j]
    for mask in range(1, full):
        row = best[mask]
        for j in range(1, n):
            cur = row[j]
            if cur == inf:
                continue
            dj = dist[j]
            for k in range(1, n):
                bit = 1 << (k - 1)
                if mask & bit:
                    continue
                cand = cur + dj[k]
                if cand < best[mask | bit][k]:
                    best[mask | bit][k] = cand
    return int(min(best[full - 1][j] + dist[j][0] for j in range(1, n)))


@dataclass(frozen=True)
class TspResult:
    removal: frozenset[int]
    mst_value: int
    lower: int
    upper: int
    report: SolveReport


def tsp_interdict(tsp: TspInstance) -> TspResult:
    """Interdict the tour by interdicting the MST with lengths as weights.

    The surviving tour length lies between the MST weight and twice it.
    """
    report = solve(tsp.instance)
    mst = report.original_value
    return TspResult(report.removal, mst, mst, 2 * mst, report)


@dataclass(frozen=True)
class McpInstance:
    """Remove edges to maximise the number of components.

    Unit costs with ``budget = q`` is the edge-count version; explicit
    ``costs`` give the budgeted disconnection variant.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    budget: int
    costs: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.costs is not None and (
            len(self.costs) != len(self.edges) or any(c < 1 for c in self.costs)
        ):
            raise ValueError("costs must be positive, one per edge")

    def cost(self, k: int) -> int:
        return 1 if self.costs is None else self.costs[k]

    def components_after(self, removal: Iterable[int]) -> int:
        inst = Instance.build(self.n, [(u, v, 0, 1) for u, v in self.edges], 1)
        return components(inst, inst.all_edges - frozenset(removal)).count


def mcp_to_interdiction(mcp: McpInstance) -> Instance:
    """MST interdiction instance whose value of ``R`` is the component gain of ``R``.

    Original edges become weight-0 interdictable edges.  A spanning tree of
    non-interdictable edges is appended: weight 1 inside each original
    component and weight 0 between components, so the MST weight counts only
    newly created components.  A non-interdictable flag stands in for cost
    ``B + 1``; both encodings exclude the tree from every interdiction set.
    """
    spec = [(u, v, 0, mcp.cost(k)) for k, (u, v) in enumerate(mcp.edges)]
    base = Instance.build(mcp.n, spec, mcp.budget)
    part = components(base, base.all_edges)
    blocks = part.blocks()
    tree = []
    for block in blocks:
        verts = sorted(block)
        tree += [(a, b, 1, None) for a, b in zip(verts, verts[1:])]
    reps = [min(b) for b in blocks]
    tree += [(a, b, 0, None) for a, b in zip(reps, reps[1:])]
    return Instance.build(mcp.n, spec + tree, mcp.budget)


def shen_fixture() -> Instance:
    """Three-vertex multigraph where a 3-edge optimum leaves the tree-plus-replacement edges.

    Vertices u=0, v=1, w=2; unit costs; budget 3.
    """
    u, v, w = 0, 1, 2
    edges = [
        (u, v, 3, 1), (u, v, 4, 1), (u, v, 5, 1),
        (v, w, 2, 1), (v, w, 101, 1),
        (w, u, 1, 1), (w, u, 6, 1), (w, u, 100, 1),
    ]
    return Instance.build(3, edges, 3)


def edges_with_weights(instance: Instance, weights: Sequence[int]) -> frozenset[int]:
    """Ids of the edges carrying the given weights (each weight used once)."""
    out, pool = set(), list(weights)
    for e in instance.edges:
        if e.weight in pool:
            pool.remove(e.weight)
            out.add(e.id)
    if pool:
        raise KeyError(f"no edges with weights {pool}")
    return frozenset(out)
