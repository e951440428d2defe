"""Weight rounding, level decomposition and instance preprocessing."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .graphcore import (
    Edge,
    EdgeSet,
    Instance,
    UnionFind,
    components,
    global_min_cut,
    level_of_weight,
    sigma,
    val,
)


def round_down_pow2(w: int) -> int:
    return 0 if w == 0 else 1 << (w.bit_length() - 1)


@dataclass(frozen=True)
class RoundingCertificate:
    """Original weights of a rounded instance, indexed by edge id."""

    original_weights: tuple[int, ...]

    def within_factor_two(self, rounded: Instance) -> bool:
        return all(
            r.weight <= w < 2 * r.weight or (w == 0 and r.weight == 0)
            for r, w in zip(rounded.edges, self.original_weights)
        )


def round_weights(instance: Instance) -> tuple[Instance, RoundingCertificate]:
    edges = [
        Edge(e.id, e.u, e.v, round_down_pow2(e.weight), e.cost, e.interdictable)
        for e in instance.edges
    ]
    cert = RoundingCertificate(tuple(e.weight for e in instance.edges))
    return instance.replace(edges=edges), cert


class Reject(Exception):
    """Some interdiction set disconnects the graph."""

    def __init__(self, cut: EdgeSet, cost: int):
        self.cut = frozenset(cut)
        self.cost = cost
        super().__init__(f"cut {sorted(self.cut)} of cost {cost} fits the budget")


@dataclass(frozen=True)
class LevelDecomposition:
    """A preprocessed instance split into weight levels -1..p.

    ``instance`` is the working instance: rounded, with a connected top level
    (connector edges are appended as non-interdictable edges).  ``scale`` is 2
    when all positive weights were doubled to lift a single-level instance to
    ``p = 1``; working MST weights are then exactly twice the input's.
    ``split_cut`` is a cheapest edge set whose removal increases the number of
    components of the graph below the top level.
    """

    instance: Instance
    p: int
    scale: int = 1
    split_cut: EdgeSet = field(default_factory=frozenset)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"need p >= 1, got {self.p}")
        if any(lvl > self.p for lvl in self.level_of):
            raise ValueError("edge above the top level")
        if sigma(self.instance, self.level_set(self.p)) != 1:
            raise ValueError("top level does not span the vertex set")

    @cached_property
    def level_of(self) -> tuple[int, ...]:
        return tuple(level_of_weight(e.weight) for e in self.instance.edges)

    @cached_property
    def _level_sets(self) -> tuple[EdgeSet, ...]:
        sets: list[set[int]] = [set() for _ in range(self.p + 2)]
        for i, lvl in enumerate(self.level_of):
            sets[lvl + 1].add(i)
        return tuple(frozenset(s) for s in sets)

    def level_set(self, i: int) -> EdgeSet:
        return self._level_sets[i + 1]

    def prefix(self, i: int) -> EdgeSet:
        """All edges on levels ``<= i``."""
        out: set[int] = set()
        for j in range(-1, i + 1):
            out |= self._level_sets[j + 1]
        return frozenset(out)

    @cached_property
    def ground(self) -> tuple[int, ...]:
        """Interdictable edges below the top level, in id order."""
        return tuple(
            i for i in sorted(self.prefix(self.p - 1))
            if self.instance.edges[i].interdictable
        )

    @property
    def budget(self) -> int:
        return self.instance.budget

    def cost(self, ids) -> int:
        return self.instance.cost(ids)

    def val(self, removal) -> int:
        return val(self.instance, removal)


@dataclass(frozen=True)
class Reduction:
    """Contraction of an instance in which no interdiction set splits the lower levels.

    Every interdiction set has the same number of top-level MST edges, so the
    top level contributes a constant ``offset``.  For interdiction sets ``R``
    of ``reduced`` (ids translated by ``edge_map``), the MST weight in the
    source instance equals the MST weight in ``reduced`` plus ``offset``.
    """

    source: Instance
    reduced: Instance
    offset: int
    edge_map: tuple[int, ...]
    vertex_map: tuple[int, ...]


def _blocked_cost(instance: Instance):
    return lambda e: e.cost if e.interdictable else instance.budget + 1


def cheapest_split(instance: Instance, active: EdgeSet) -> tuple[EdgeSet, int] | None:
    """Cheapest edge set increasing the component count of ``(V, active)``.

    This is the minimum over components of the minimum cut inside the
    component.  Returns None when every component is a single vertex.
    """
    best = None
    for block in components(instance, active).blocks():
        if len(block) < 2:
            continue
        cut, cost = global_min_cut(
            instance, active, _blocked_cost(instance), vertices=sorted(block)
        )
        if best is None or cost < best[1]:
            best = (cut, cost)
    return best


def is_rounded(instance: Instance) -> bool:
    return all(round_down_pow2(e.weight) == e.weight for e in instance.edges)


def preprocess(rounded: Instance) -> LevelDecomposition | Reduction:
    """Enforce the standing assumptions on a rounded instance.

    Raises :class:`Reject` if a cut fits the budget.  Returns a
    :class:`Reduction` when no interdiction set splits a component of the
    graph below the top level; otherwise a :class:`LevelDecomposition`.
    """
    if not is_rounded(rounded):
        raise ValueError("preprocess expects rounded weights")
    inst = rounded
    if inst.n >= 2:
        cut, cost = global_min_cut(inst, inst.all_edges, _blocked_cost(inst))
        if cost <= inst.budget:
            raise Reject(cut, cost)

    levels = [level_of_weight(e.weight) for e in inst.edges]
    top = max(levels, default=-1)
    scale = 1
    if top == 0:
        # A single positive level: doubling keeps ratios and gives p = 1.
        scale = 2
        inst = inst.replace(edges=[
            Edge(e.id, e.u, e.v, 2 * e.weight, e.cost, e.interdictable)
            for e in inst.edges
        ])
        p = 1
    else:
        p = max(top, 1)

    work = _add_connector(inst, p)
    below = frozenset(
        e.id for e in work.edges if level_of_weight(e.weight) <= p - 1
    )
    split = cheapest_split(work, below)
    if split is not None and split[1] <= work.budget:
        return LevelDecomposition(work, p, scale, split[0])
    return _reduce(rounded, work, p, scale, below)


def _add_connector(inst: Instance, p: int) -> Instance:
    top = [e.id for e in inst.edges if e.weight == 1 << p]
    part = components(inst, top)
    if part.count == 1:
        return inst
    reps = [min(b) for b in part.blocks()]
    edges = list(inst.edges)
    for a, b in zip(reps, reps[1:]):
        edges.append(Edge(len(edges), a, b, 1 << p, 0, interdictable=False))
    return inst.replace(edges=edges)


def _reduce(source: Instance, work: Instance, p: int, scale: int, below: EdgeSet) -> Reduction:
    part = components(work, below)
    # contract a spanning forest of top-level edges over the lower components
    merge = UnionFind(work.n)
    blocks = UnionFind(part.count)
    for e in sorted(work.edges, key=lambda e: e.id):
        if e.id in below:
            continue
        if blocks.union(part.labels[e.u], part.labels[e.v]):
            merge.union(e.u, e.v)
    roots: dict[int, int] = {}
    vertex_map = []
    for v in range(work.n):
        r = merge.find(v)
        if r not in roots:
            roots[r] = len(roots)
        vertex_map.append(roots[r])

    edges, edge_map = [], []
    for e in source.edges:
        if e.id not in below:
            continue
        edges.append(Edge(len(edges), vertex_map[e.u], vertex_map[e.v],
                          e.weight, e.cost, e.interdictable))
        edge_map.append(e.id)
    reduced = Instance(len(roots), tuple(edges), source.budget)
    offset = (part.count - 1) * ((1 << p) // scale)
    return Reduction(source, reduced, offset, tuple(edge_map), tuple(vertex_map))
