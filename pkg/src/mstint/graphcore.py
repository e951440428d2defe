"""Multigraph instances, connectivity, minimum spanning trees and minimum cuts.

Edge sets are plain ``frozenset`` objects of edge ids.  Edge ids are dense
and 0-based, so parallel edges stay distinct.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

EdgeSet = frozenset


class Connectivity(enum.Enum):
    DISCONNECTED = "disconnected"

    def __repr__(self) -> str:
        return "DISCONNECTED"


DISCONNECTED = Connectivity.DISCONNECTED


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    weight: int
    cost: int
    interdictable: bool = True

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"edge {self.id} is a loop at vertex {self.u}")
        if self.weight < 0:
            raise ValueError(f"edge {self.id} has negative weight {self.weight}")
        if self.interdictable and self.cost < 1:
            raise ValueError(f"edge {self.id} has nonpositive cost {self.cost}")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Instance:
    """Loopless multigraph with weights, interdiction costs and a budget."""

    n: int
    edges: tuple[Edge, ...]
    budget: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("instance needs at least one vertex")
        if self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")
        for k, e in enumerate(self.edges):
            if e.id != k:
                raise ValueError(f"edge ids must be dense, found {e.id} at position {k}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ValueError(f"edge {e.id} has an endpoint outside [0, {self.n})")

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple], budget: int) -> "Instance":
        """Create an instance from ``(u, v, weight, cost)`` tuples.

        A cost of ``None`` marks the edge as non-interdictable.
        """
        out = []
        for k, (u, v, w, c) in enumerate(edges):
            if c is None:
                out.append(Edge(k, u, v, w, 0, interdictable=False))
            else:
                out.append(Edge(k, u, v, w, c))
        return cls(n, tuple(out), budget)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def all_edges(self) -> EdgeSet:
        return frozenset(range(len(self.edges)))

    @property
    def interdictable(self) -> EdgeSet:
        return frozenset(e.id for e in self.edges if e.interdictable)

    def cost(self, ids: Iterable[int]) -> int:
        return sum(self.edges[i].cost for i in ids)

    def weight(self, ids: Iterable[int]) -> int:
        return sum(self.edges[i].weight for i in ids)

    def replace(self, *, edges=None, budget=None, n=None) -> "Instance":
        return Instance(
            self.n if n is None else n,
            self.edges if edges is None else tuple(edges),
            self.budget if budget is None else budget,
        )


class UnionFind:
    __slots__ = ("parent", "rank", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.count -= 1
        return True


@dataclass(frozen=True)
class Partition:
    """Vertex partition given as a block label per vertex (labels are 0..count-1)."""

    labels: tuple[int, ...]
    count: int

    def blocks(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.count)]
        for v, b in enumerate(self.labels):
            out[b].add(v)
        return [frozenset(b) for b in out]


def components(instance: Instance, active: Iterable[int]) -> Partition:
    """Connected components of ``(V, active)``; blocks are numbered by smallest vertex."""
    uf = UnionFind(instance.n)
    for i in active:
        e = instance.edges[i]
        uf.union(e.u, e.v)
    labels, seen = [], {}
    for v in range(instance.n):
        r = uf.find(v)
        if r not in seen:
            seen[r] = len(seen)
        labels.append(seen[r])
    return Partition(tuple(labels), len(seen))


def sigma(instance: Instance, active: Iterable[int]) -> int:
    uf = UnionFind(instance.n)
    for i in active:
        e = instance.edges[i]
        uf.union(e.u, e.v)
    return uf.count


def kruskal(instance: Instance, active: Iterable[int]) -> list[int] | Connectivity:
    """Edge ids of a minimum spanning tree of ``(V, active)``; ties broken by id."""
    uf = UnionFind(instance.n)
    tree = []
    for i in sorted(active, key=lambda i: (instance.edges[i].weight, i)):
        e = instance.edges[i]
        if uf.union(e.u, e.v):
            tree.append(i)
    if uf.count != 1:
        return DISCONNECTED
    return tree


def mst_weight(instance: Instance, active: Iterable[int]) -> int | Connectivity:
    tree = kruskal(instance, active)
    if tree is DISCONNECTED:
        return DISCONNECTED
    return instance.weight(tree)


def level_of_weight(w: int) -> int:
    """Level of a rounded weight: -1 for zero, ``i`` for ``2**i``."""
    if w == 0:
        return -1
    if w & (w - 1):
        raise ValueError(f"weight {w} is neither zero nor a power of two")
    return w.bit_length() - 1


def top_level(instance: Instance) -> int:
    return max((level_of_weight(e.weight) for e in instance.edges), default=-1)


def val(instance: Instance, removal: Iterable[int]) -> int:
    """MST weight of ``(V, E \\ removal)`` through per-level component counts.

    The instance must have rounded weights and a connected top level; the
    removal may only contain interdictable edges below the top level.
    """
    removal = frozenset(removal)
    p = top_level(instance)
    levels = [level_of_weight(e.weight) for e in instance.edges]
    for i in removal:
        if levels[i] >= p:
            raise ValueError(f"edge {i} lies on the top level {p}")
        if not instance.edges[i].interdictable:
            raise ValueError(f"edge {i} is not interdictable")
    order = sorted(
        (i for i in range(instance.m) if i not in removal), key=lambda i: levels[i]
    )
    uf = UnionFind(instance.n)
    total, k = 0, 0
    for lvl in range(-1, p):
        while k < len(order) and levels[order[k]] <= lvl:
            e = instance.edges[order[k]]
            uf.union(e.u, e.v)
            k += 1
        total += (1 if lvl < 0 else 1 << lvl) * (uf.count - 1)
    return total


def supermodularity_check(instance: Instance, a: Iterable[int], b: Iterable[int]) -> bool:
    a, b = frozenset(a), frozenset(b)
    return val(instance, a) + val(instance, b) <= val(instance, a | b) + val(instance, a & b)


def global_min_cut(
    instance: Instance,
    active: Iterable[int],
    cost_fn: Callable[[Edge], int] | None = None,
    vertices: Sequence[int] | None = None,
) -> tuple[EdgeSet, int]:
    """Stoer-Wagner minimum cut of ``(vertices, active)``.

    Parallel edges are aggregated by summing ``cost_fn``; by default
    non-interdictable edges cost ``budget + 1``.  Restricting to ``vertices``
    ignores edges that leave the vertex set.  A disconnected graph yields the
    empty cut with cost 0.
    """
    if cost_fn is None:
        cost_fn = lambda e: e.cost if e.interdictable else instance.budget + 1  # noqa: E731
    verts = list(range(instance.n)) if vertices is None else sorted(vertices)
    if len(verts) < 2:
        raise ValueError("a cut needs at least two vertices")
    index = {v: k for k, v in enumerate(verts)}
    used = [
        i for i in active
        if instance.edges[i].u in index and instance.edges[i].v in index
    ]
    k = len(verts)
    w = np.zeros((k, k), dtype=object)
    for i in used:
        e = instance.edges[i]
        a, b = index[e.u], index[e.v]
        c = cost_fn(e)
        w[a, b] += c
        w[b, a] += c

    groups = [[v] for v in range(k)]
    alive = list(range(k))
    best_cost, best_side = None, None
    while len(alive) > 1:
        added = [alive[0]]
        weights = {v: w[alive[0], v] for v in alive[1:]}
        prev = alive[0]
        while weights:
            nxt = max(weights, key=lambda v: (weights[v], -v))
            cut_of_phase = weights.pop(nxt)
            for v in weights:
                weights[v] += w[nxt, v]
            prev, last = added[-1], nxt
            added.append(nxt)
        if best_cost is None or cut_of_phase < best_cost:
            best_cost, best_side = cut_of_phase, list(groups[last])
        groups[prev].extend(groups[last])
        for v in alive:
            w[prev, v] += w[last, v]
            w[v, prev] = w[prev, v]
        w[prev, prev] = 0
        alive.remove(last)

    side = {verts[v] for v in best_side}
    cut = frozenset(
        i for i in used if (instance.edges[i].u in side) != (instance.edges[i].v in side)
    )
    return cut, int(best_cost)


# Batched evaluation over many removal sets at once.  Rows are removal sets,
# columns are edges; used by exhaustive oracles and the exhaustive SFM backend.

def sigma_batch(n: int, endpoints: np.ndarray, present: np.ndarray) -> np.ndarray:
    """Component count of ``(V, edges where present[r])`` for every row ``r``."""
    rows = present.shape[0]
    labels = np.tile(np.arange(n, dtype=np.int32), (rows, 1))
    if len(endpoints):
        changed = True
        while changed:
            changed = False
            for j, (u, v) in enumerate(endpoints):
                mask = present[:, j]
                lu, lv = labels[:, u], labels[:, v]
                low = np.where(mask, np.minimum(lu, lv), lu)
                if np.any(low != lu):
                    labels[:, u] = low
                    changed = True
                low = np.where(mask, np.minimum(lu, lv), lv)
                if np.any(low != lv):
                    labels[:, v] = low
                    changed = True
            if changed:
                # pointer jumping keeps the sweep count logarithmic on long paths
                labels = np.take_along_axis(labels, labels, axis=1)
    return (labels == np.arange(n, dtype=np.int32)).sum(axis=1)


def mst_weight_batch(instance: Instance, removed: np.ndarray) -> np.ndarray:
    """Kruskal run in lockstep over rows of ``removed`` (rows x m booleans).

    Returns the MST weight per row, or -1 where the remaining graph is
    disconnected.
    """
    rows = removed.shape[0]
    comp = np.tile(np.arange(instance.n, dtype=np.int32), (rows, 1))
    total = np.zeros(rows, dtype=np.int64)
    picked = np.zeros(rows, dtype=np.int32)
    ridx = np.arange(rows)
    for e in sorted(instance.edges, key=lambda e: (e.weight, e.id)):
        cu, cv = comp[ridx, e.u], comp[ridx, e.v]
        join = ~removed[:, e.id] & (cu != cv)
        if not join.any():
            continue
        total[join] += e.weight
        picked[join] += 1
        relabel = join[:, None] & (comp == cv[:, None])
        comp = np.where(relabel, cu[:, None], comp)
    return np.where(picked == instance.n - 1, total, -1)


def masks_to_rows(masks: np.ndarray, ground: Sequence[int], m: int) -> np.ndarray:
    """Expand bitmasks over ``ground`` into rows x m removal booleans."""
    out = np.zeros((len(masks), m), dtype=bool)
    for j, eid in enumerate(ground):
        out[:, eid] = (masks >> j) & 1
    return out


def mask_costs(masks: np.ndarray, costs: Sequence[int]) -> np.ndarray:
    total = np.zeros(len(masks), dtype=np.int64)
    for j, c in enumerate(costs):
        total += ((masks >> j) & 1) * c
    return total
