"""Constant-factor MST interdiction and an exhaustive oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graphcore import (
    DISCONNECTED,
    Instance,
    mask_costs,
    masks_to_rows,
    mst_weight,
    mst_weight_batch,
)
from .levels import LevelDecomposition, Reduction, preprocess, round_weights
from .pareto import Case1, Case2, Case3, FrontPoint, extreme_supported_tuples, locate_budget, nu_star
from .patterns import algorithm2

ROUNDED_FACTOR = 7
ORIGINAL_FACTOR = 14


@dataclass(frozen=True)
class Prepared:
    """A rounded instance reduced to a level decomposition.

    Working values relate to rounded values by ``value / decomp.scale + offset``;
    ``edge_map`` translates working edge ids back to rounded ids.  ``decomp``
    is None when every interdiction set yields the same MST weight.
    """

    decomp: LevelDecomposition | None
    offset: int
    edge_map: tuple[int, ...]
    reductions: int

    def to_rounded_ids(self, ids: Iterable[int]) -> frozenset[int]:
        return frozenset(self.edge_map[i] for i in ids)

    def to_rounded_value(self, value) -> Fraction:
        scale = self.decomp.scale if self.decomp else 1
        return Fraction(value) / scale + self.offset


def prepare(rounded: Instance) -> Prepared:
    """Preprocess, following reductions until a decomposition remains (or nothing to gain)."""
    offset, reductions = 0, 0
    edge_map = tuple(range(rounded.m))
    inst = rounded
    while True:
        if all(e.weight == 0 for e in inst.edges) or inst.n == 1:
            if inst.n >= 2:
                preprocess(inst)  # still surfaces a Reject
            return Prepared(None, offset, edge_map, reductions)
        out = preprocess(inst)
        if isinstance(out, LevelDecomposition):
            return Prepared(out, offset, edge_map, reductions)
        assert isinstance(out, Reduction)
        offset += out.offset
        edge_map = tuple(edge_map[i] for i in out.edge_map)
        inst = out.reduced
        reductions += 1


@dataclass(frozen=True)
class SolveReport:
    removal: frozenset[int]
    cost: int
    budget: int
    rounded_value: int
    original_value: int
    nu_star: Fraction | None
    case: str
    witness_low: frozenset[int] | None = None
    witness_high: frozenset[int] | None = None
    reductions: int = 0
    guarantee_rounded: int = ROUNDED_FACTOR
    guarantee_original: int = ORIGINAL_FACTOR


def best_of_two(decomp: LevelDecomposition, removal) -> frozenset[int]:
    """Better of the greedy pattern set and a cheapest split of the lower levels."""
    _, first = algorithm2(decomp, removal)
    second = decomp.split_cut
    return first if decomp.val(first) >= decomp.val(second) else second


def algorithm1(
    decomp: LevelDecomposition, low: FrontPoint, high: FrontPoint, bound: Fraction
) -> frozenset[int]:
    """Bracketed case: keep the cheaper witness if it is within 7 of the hull bound."""
    if low.value >= bound / ROUNDED_FACTOR:
        return low.witness
    return best_of_two(decomp, high.witness)


def solve_decomposition(decomp: LevelDecomposition, backend: str = "auto"):
    """Returns ``(removal, case, nu_star, low witness, high witness)`` in working ids."""
    front = extreme_supported_tuples(decomp, backend=backend)
    where = locate_budget(front, decomp.budget)
    if isinstance(where, Case1):
        return where.point.witness, "1", None, where.point.witness, None
    if isinstance(where, Case2):
        full = frozenset(decomp.ground)
        if decomp.cost(full) <= decomp.budget:
            return full, "2", None, None, None
        return front[-1].witness, "2", None, front[-1].witness, None
    assert isinstance(where, Case3)
    bound = nu_star(where.low, where.high, decomp.budget)
    chosen = algorithm1(decomp, where.low, where.high, bound)
    return chosen, "3", bound, where.low.witness, where.high.witness


def solve(raw: Instance, backend: str = "auto") -> SolveReport:
    """Round, preprocess, and dispatch on where the budget falls on the hull.

    Raises :class:`~mstint.levels.Reject` when a cut fits the budget.
    """
    rounded, _ = round_weights(raw)
    prep = prepare(rounded)
    nu = None
    low = high = None
    if prep.decomp is None:
        removal, case = frozenset(), "trivial"
    else:
        work, case, bound, w_low, w_high = solve_decomposition(prep.decomp, backend)
        removal = prep.to_rounded_ids(work)
        if bound is not None:
            nu = prep.to_rounded_value(bound)
        low = None if w_low is None else prep.to_rounded_ids(w_low)
        high = None if w_high is None else prep.to_rounded_ids(w_high)

    rest = raw.all_edges - removal
    rounded_value = mst_weight(rounded, rest)
    original_value = mst_weight(raw, rest)
    if rounded_value is DISCONNECTED or original_value is DISCONNECTED:
        raise AssertionError("solver removal disconnected the graph")
    if raw.cost(removal) > raw.budget or any(not raw.edges[i].interdictable for i in removal):
        raise AssertionError("solver produced an infeasible removal")
    return SolveReport(
        removal=removal,
        cost=raw.cost(removal),
        budget=raw.budget,
        rounded_value=rounded_value,
        original_value=original_value,
        nu_star=nu,
        case=case,
        witness_low=low,
        witness_high=high,
        reductions=prep.reductions,
    )


class TooLarge(ValueError):
    pass


def exact_opt(
    instance: Instance, limit: int = 22, candidates: Iterable[int] | None = None
) -> tuple[frozenset[int], int]:
    """Best interdiction set by enumeration; ties go to the lexicographically smallest id tuple.

    ``candidates`` restricts which interdictable edges may be removed.
    Raises ``ValueError`` if a feasible removal disconnects the graph.
    """
    pool = instance.interdictable if candidates is None else instance.interdictable & frozenset(candidates)
    ground = sorted(pool)
    if len(ground) > limit:
        raise TooLarge(f"{len(ground)} interdictable edges exceed the limit {limit}")
    costs = [instance.edges[i].cost for i in ground]
    best_val, best_sets = -1, []
    chunk = 1 << 15
    for start in range(0, 1 << len(ground), chunk):
        masks = np.arange(start, min(1 << len(ground), start + chunk), dtype=np.int64)
        masks = masks[mask_costs(masks, costs) <= instance.budget]
        if not len(masks):
            continue
        values = mst_weight_batch(instance, masks_to_rows(masks, ground, instance.m))
        if (values < 0).any():
            bad = int(masks[np.argmax(values < 0)])
            raise ValueError(
                f"removing {[ground[j] for j in range(len(ground)) if bad >> j & 1]} disconnects the graph"
            )
        top = int(values.max())
        if top > best_val:
            best_val, best_sets = top, []
        if top == best_val:
            best_sets.extend(int(x) for x in masks[values == top])
    winner = min(
        tuple(ground[j] for j in range(len(ground)) if mask >> j & 1) for mask in best_sets
    )
    return frozenset(winner), best_val
