"""Partition towers, removal patterns and the greedy over-budget rounding.

Given a removal set ``U`` below the top level with ``c(U) > B``, the tower
holds the components of ``(V, E_{<=i} \\ U)`` for every level ``i``.  Each
block carries an auxiliary cost ``kappa`` (cost of ``U`` edges at or below
its level touching it, inner edges counted twice), an auxiliary impact ``g``
(its descendant blocks weighted by level) and their ratio ``rho``.  The
greedy construction walks down from the top, taking the most efficient
children whose touching edges still fit the budget and descending into the
first child that does not fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .graphcore import components
from .levels import LevelDecomposition

Block = frozenset  # set of vertices
INF = math.inf


def level_weight(i: int) -> int:
    return 1 if i < 0 else 1 << i


class PartitionTower:
    """Components of ``(V, E_{<=i} \\ U)`` for ``i = -1..p`` with child links."""

    def __init__(self, decomp: LevelDecomposition, removal: Iterable[int]):
        removal = frozenset(removal)
        bad = removal - set(decomp.ground)
        if bad:
            raise ValueError(f"edges {sorted(bad)} are not interdictable below the top level")
        self.decomp = decomp
        self.removal = removal
        self.p = p = decomp.p
        inst = decomp.instance

        self.blocks: dict[int, list[Block]] = {}
        self._label: dict[int, tuple[int, ...]] = {}
        for i in range(-1, p + 1):
            part = components(inst, decomp.prefix(i) - removal)
            self.blocks[i] = part.blocks()
            self._label[i] = part.labels

        self.children: dict[int, list[list[int]]] = {-1: [[] for _ in self.blocks[-1]]}
        for i in range(0, p + 1):
            kids: list[list[int]] = [[] for _ in self.blocks[i]]
            for c, block in enumerate(self.blocks[i - 1]):
                kids[self.index(i, min(block))].append(c)
            self.children[i] = kids

        self._kappa: dict[int, list[int]] = {}
        for i in range(-1, p + 1):
            k = [0] * len(self.blocks[i])
            for eid in self.removal_at(i):
                e = inst.edges[eid]
                a, b = self._label[i][e.u], self._label[i][e.v]
                if a == b:
                    k[a] += 2 * e.cost
                else:
                    k[a] += e.cost
                    k[b] += e.cost
            self._kappa[i] = k

        self._g: dict[int, list[int]] = {}
        for i in range(-1, p + 1):
            g = [0] * len(self.blocks[i])
            for lvl in range(-1, i + 1):
                for block in self.blocks[lvl]:
                    g[self.index(i, min(block))] += level_weight(lvl)
            self._g[i] = g

    # --- lookups -----------------------------------------------------------

    def index(self, i: int, vertex: int) -> int:
        """Index of the level-``i`` block containing ``vertex``."""
        return self._label[i][vertex]

    def block_id(self, i: int, block: Block) -> int:
        k = self.index(i, min(block))
        if self.blocks[i][k] != block:
            raise KeyError(f"{sorted(block)} is not a block on level {i}")
        return k

    def removal_at(self, i: int) -> frozenset[int]:
        return self.removal & self.decomp.prefix(i)

    def child_blocks(self, i: int, block: Block) -> list[Block]:
        return [self.blocks[i - 1][c] for c in self.children[i][self.block_id(i, block)]]

    def kappa(self, i: int, block: Block) -> int:
        return self._kappa[i][self.block_id(i, block)]

    def g(self, i: int, block: Block) -> int:
        return self._g[i][self.block_id(i, block)]

    def rho(self, i: int, block: Block) -> Fraction | float:
        k = self.kappa(i, block)
        return INF if k == 0 else Fraction(self.g(i, block), k)

    def efficiency_order(self, i: int, blocks: Sequence[Block]) -> list[Block]:
        """Sort level-``i`` blocks by nonincreasing ``rho``; ties: larger ``g``, then smaller vertex."""

        def key(block):
            k, g = self.kappa(i, block), self.g(i, block)
            ratio = (0, 0) if k == 0 else (1, -Fraction(g, k))
            return (*ratio, -g, min(block))

        return sorted(blocks, key=key)

    def touching(self, i: int, block: Block) -> frozenset[int]:
        """Edges of ``U`` on levels ``<= i`` with at least one endpoint in ``block``.

        Internal edges count too: ``kappa`` charges them twice, and without
        them the sub-blocks of ``block`` would not be components after removal.
        """
        edges = self.decomp.instance.edges
        return frozenset(
            eid for eid in self.removal_at(i)
            if edges[eid].u in block or edges[eid].v in block
        )


@dataclass(frozen=True)
class RemovalPattern:
    members: tuple[tuple[Block, int], ...] = ()

    def __iter__(self) -> Iterator[tuple[Block, int]]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item) -> bool:
        return item in self.members

    def plus(self, extra: Iterable[tuple[Block, int]]) -> "RemovalPattern":
        return RemovalPattern(self.members + tuple(extra))


def removal_edges(tower: PartitionTower, pattern: RemovalPattern) -> frozenset[int]:
    out: set[int] = set()
    for block, i in pattern:
        out |= tower.touching(i, block)
    return frozenset(out)


@dataclass(frozen=True)
class Step:
    level: int
    parent: Block
    ordered: tuple[Block, ...]
    s: int
    before: RemovalPattern


@dataclass(frozen=True)
class GreedyRun:
    pattern: RemovalPattern
    removal: frozenset[int]
    steps: tuple[Step, ...] = field(repr=False)


def greedy_pattern(tower: PartitionTower) -> GreedyRun:
    """Build the budget-feasible efficient pattern, keeping the per-level trace."""
    decomp = tower.decomp
    budget = decomp.budget
    if decomp.cost(tower.removal) <= budget:
        raise ValueError("removal set already fits the budget; use it directly")
    cost_of = decomp.instance.edges

    pattern = RemovalPattern()
    chosen: set[int] = set()
    spent = 0
    steps = []
    level, parent = tower.p - 1, frozenset(range(decomp.instance.n))
    while level != -2:
        ordered = tower.efficiency_order(level, tower.child_blocks(level + 1, parent))
        before = pattern
        s = 0
        for block in ordered:
            extra = tower.touching(level, block) - chosen
            add = sum(cost_of[e].cost for e in extra)
            if spent + add > budget:
                break
            chosen |= extra
            spent += add
            s += 1
        pattern = pattern.plus((b, level) for b in ordered[:s])
        steps.append(Step(level, parent, tuple(ordered), s, before))
        if s < len(ordered):
            parent = ordered[s]
            level -= 1
        else:
            level = -2
    return GreedyRun(pattern, frozenset(chosen), tuple(steps))


def algorithm2(decomp: LevelDecomposition, removal) -> tuple[RemovalPattern, frozenset[int]]:
    run = greedy_pattern(PartitionTower(decomp, removal))
    return run.pattern, run.removal


def overbudget_pattern(
    decomp: LevelDecomposition, removal, tower: PartitionTower | None = None
) -> tuple[RemovalPattern, frozenset[int], Step]:
    """Greedy pattern plus the first child that did not fit at the last short step.

    Returns the pattern, its edge set (over budget) and that step.
    """
    tower = tower or PartitionTower(decomp, removal)
    run = greedy_pattern(tower)
    short = [st for st in run.steps if st.s != len(st.ordered)]
    if not short:
        raise AssertionError("greedy took every child although the removal set is over budget")
    step = short[-1]
    pattern = step.before.plus((b, step.level) for b in step.ordered[: step.s + 1])
    return pattern, removal_edges(tower, pattern), step


# --- pattern structure and functions ---------------------------------------

def is_removal_pattern(tower: PartitionTower, pattern: RemovalPattern) -> bool:
    seen: set[int] = set()
    for block, i in pattern:
        if not -1 <= i <= tower.p - 1:
            return False
        try:
            tower.block_id(i, block)
        except (KeyError, ValueError):
            return False
        if seen & block:
            return False
        seen |= block
    return True


def validate_efficient(tower: PartitionTower, pattern: RemovalPattern) -> bool:
    """Whether some nonincreasing-``rho`` child ordering explains the pattern at every block.

    At every block either no strict descendant is in the pattern, or all
    pattern members below its level lie inside it, the children in the
    pattern form a ``rho``-prefix, and everything deeper lies inside the
    first child not taken.
    """
    if not is_removal_pattern(tower, pattern):
        return False
    members = set(pattern)
    for i in range(0, tower.p + 1):
        for block in tower.blocks[i]:
            lower = [(w, j) for w, j in members if j <= i - 1]
            if not any(w <= block for w, _ in lower):
                continue
            if not all(w <= block for w, _ in lower):
                return False
            kids = tower.child_blocks(i, block)
            taken = [q for q in kids if (q, i - 1) in members]
            rest = [q for q in kids if (q, i - 1) not in members]
            if taken and rest:
                if min(tower.rho(i - 1, q) for q in taken) < max(tower.rho(i - 1, q) for q in rest):
                    return False
            deeper = [w for w, j in lower if j <= i - 2]
            if deeper:
                if not rest:
                    return False
                holder = next((q for q in rest if deeper[0] <= q), None)
                if holder is None or not all(w <= holder for w in deeper):
                    return False
                if tower.rho(i - 1, holder) < max(tower.rho(i - 1, q) for q in rest):
                    return False
    return True


@dataclass(frozen=True)
class PatternFunctions:
    """Pattern-restricted cost and impact per (level, block index)."""

    kappa: dict[int, list[int]]
    g: dict[int, list[int]]

    @property
    def top_kappa(self) -> int:
        return self.kappa[max(self.kappa)][0]

    @property
    def top_g(self) -> int:
        return self.g[max(self.g)][0]


def pattern_functions(tower: PartitionTower, pattern: RemovalPattern) -> PatternFunctions:
    kappa = {i: [0] * len(tower.blocks[i]) for i in tower.blocks}
    g = {i: [0] * len(tower.blocks[i]) for i in tower.blocks}
    for block, j in pattern:
        kj, gj = tower.kappa(j, block), tower.g(j, block)
        for i in range(j, tower.p + 1):
            k = tower.index(i, min(block))
            kappa[i][k] += kj
            g[i][k] += gj
    return PatternFunctions(kappa, g)


# --- executable inequalities -----------------------------------------------

def block_recursions_hold(tower: PartitionTower) -> bool:
    """``kappa`` dominates its children's sum; ``g`` is ``2^i`` plus its children's sum."""
    for i in range(0, tower.p + 1):
        for b, kids in enumerate(tower.children[i]):
            if tower._kappa[i][b] < sum(tower._kappa[i - 1][c] for c in kids):
                return False
            if tower._g[i][b] != (1 << i) + sum(tower._g[i - 1][c] for c in kids):
                return False
    return True


def top_identities_hold(tower: PartitionTower) -> bool:
    """Impact at the root minus ``2^{p+1}`` is ``val(U)``; root cost is ``2 c(U)``."""
    p, d = tower.p, tower.decomp
    return (
        tower._g[p][0] - (1 << (p + 1)) == d.val(tower.removal)
        and tower._kappa[p][0] == 2 * d.cost(tower.removal)
    )


def pattern_recursions_hold(tower: PartitionTower, pattern: RemovalPattern, funcs: PatternFunctions) -> bool:
    members = set(pattern)
    for i in range(0, tower.p + 1):
        for b, kids in enumerate(tower.children[i]):
            if (tower.blocks[i][b], i) in members:
                if funcs.kappa[i][b] != tower._kappa[i][b] or funcs.g[i][b] != tower._g[i][b]:
                    return False
                continue
            if funcs.kappa[i][b] != sum(funcs.kappa[i - 1][c] for c in kids):
                return False
            if funcs.g[i][b] != sum(funcs.g[i - 1][c] for c in kids):
                return False
    return True


def block_ratio_bound_holds(tower: PartitionTower, funcs: PatternFunctions) -> bool:
    """``(kappaW/kappa) (g - 2^i) <= gW + 2^i`` at every block with positive ``kappa``."""
    for i in range(-1, tower.p + 1):
        two_i = Fraction(2) ** i
        for b, k in enumerate(tower._kappa[i]):
            if k == 0:
                continue
            lhs = Fraction(funcs.kappa[i][b], k) * (tower._g[i][b] - two_i)
            if lhs > funcs.g[i][b] + two_i:
                return False
    return True


@dataclass(frozen=True)
class Analysis:
    """Every inequality of the rounding argument, evaluated on one removal set."""

    removal: frozenset[int]
    pattern: RemovalPattern
    interdiction: frozenset[int]
    boosted: RemovalPattern
    boosted_edges: frozenset[int]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def analyze(decomp: LevelDecomposition, removal) -> Analysis:
    """Run the greedy construction on an over-budget ``removal`` and check every bound."""
    removal = frozenset(removal)
    tower = PartitionTower(decomp, removal)
    run = greedy_pattern(tower)
    pattern, r = run.pattern, run.removal
    boosted, r_boost, step = overbudget_pattern(decomp, removal, tower)
    f = pattern_functions(tower, pattern)
    fb = pattern_functions(tower, boosted)

    p, budget = tower.p, decomp.budget
    val_u, cost_u = decomp.val(removal), decomp.cost(removal)
    val_r, cost_r = decomp.val(r), decomp.cost(r)
    half = Fraction(1, 2)
    checks = {
        "fits_budget": cost_r <= budget and r == removal_edges(tower, pattern),
        "block_recursions": block_recursions_hold(tower),
        "top_identities": top_identities_hold(tower),
        "efficient": validate_efficient(tower, pattern),
        "boosted_efficient": validate_efficient(tower, boosted),
        "pattern_recursions": pattern_recursions_hold(tower, pattern, f)
        and pattern_recursions_hold(tower, boosted, fb),
        "pattern_cost_covers": f.top_kappa >= cost_r,
        "block_ratio_bound": block_ratio_bound_holds(tower, f)
        and block_ratio_bound_holds(tower, fb),
        "pattern_value_bound": val_r >= f.top_g - Fraction(2) ** (p - 1),
        "pattern_impact_bound": f.top_g >= half * Fraction(cost_r, cost_u) * val_u - (1 << p),
        "pattern_value_guarantee": val_r
        >= half * Fraction(cost_r, cost_u) * val_u - 3 * Fraction(2) ** (p - 1),
        "boost_over_budget": decomp.cost(r_boost) > budget,
        "boost_impact_step": fb.top_g == f.top_g + max(1, level_weight(step.level)),
        "boost_impact_gap": f.top_g >= fb.top_g - Fraction(2) ** (p - 1),
        "budget_guarantee": val_r >= half * budget * Fraction(val_u, cost_u) - (1 << (p + 1)),
    }
    return Analysis(removal, pattern, r, boosted, r_boost, checks)


def prefix_dominance(a: Sequence, b: Sequence, q: int, lam) -> bool:
    """Whether the full ratio ``sum(a)/sum(b)`` is at most the fractional prefix ratio.

    ``q`` is 1-based; the prefix takes ``a_1..a_{q-1}`` fully and ``a_q``
    with weight ``lam``.  Ratios ``a_j/b_j`` (``b_j = 0`` meaning infinity)
    must be nonincreasing.
    """
    k = len(a)
    if len(b) != k or k == 0:
        raise PrefixDominanceError("a and b must be nonempty and of equal length")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise PrefixDominanceError("entries must be nonnegative")
    for j in range(k - 1):
        if b[j + 1] == 0:
            ok = b[j] == 0
        elif b[j] == 0:
            ok = True
        else:
            ok = Fraction(a[j]) * b[j + 1] >= Fraction(a[j + 1]) * b[j]
        if not ok:
            raise UnsortedRatios(f"ratio at position {j + 2} exceeds its predecessor")
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise LambdaOutOfRange(f"lambda {lam} outside [0, 1]")
    if not 1 <= q <= k:
        raise PrefixDominanceError(f"q={q} outside 1..{k}")
    num = sum(Fraction(x) for x in a[: q - 1]) + lam * a[q - 1]
    den = sum(Fraction(x) for x in b[: q - 1]) + lam * b[q - 1]
    if den <= 0:
        raise EmptyPrefix("prefix denominator must be positive")
    total_b = sum(Fraction(x) for x in b)
    # total_b >= den > 0, so cross-multiplication is safe
    return sum(Fraction(x) for x in a) * den <= num * total_b


class PrefixDominanceError(ValueError):
    pass


class UnsortedRatios(PrefixDominanceError):
    pass


class LambdaOutOfRange(PrefixDominanceError):
    pass


class EmptyPrefix(PrefixDominanceError):
    pass
