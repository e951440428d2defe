"""Extreme supported (cost, value) tuples and budget bracketing."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .levels import LevelDecomposition
from .sfm import ParametricObjective, sfm_min


@dataclass(frozen=True)
class FrontPoint:
    cost: int
    value: int
    witness: frozenset[int]

    @property
    def pair(self) -> tuple[int, int]:
        return (self.cost, self.value)


@dataclass(frozen=True)
class ParetoFront:
    """Vertices of the dominance hull, by strictly increasing cost."""

    points: tuple[FrontPoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, k):
        return self.points[k]

    def pairs(self) -> list[tuple[int, int]]:
        return [pt.pair for pt in self.points]


def extreme_supported_tuples(
    decomp: LevelDecomposition, backend: str = "auto"
) -> ParetoFront:
    """Breakpoint search over ``lam``.

    Two known hull vertices P, Q with ``c(P) < c(Q)`` are consecutive iff the
    minimum at the slope ``lam`` joining them still lies on their line;
    otherwise the minimal minimiser at that ``lam`` is a new vertex between
    them.  Minimal minimisers are nested as ``lam`` decreases.
    """
    obj = ParametricObjective(decomp)

    def point(lam) -> FrontPoint:
        witness, _ = sfm_min(obj, lam, backend=backend)
        return FrontPoint(decomp.cost(witness), decomp.val(witness), witness)

    lam_max = Fraction(decomp.val(decomp.ground) + 1)
    first, last = point(lam_max), point(0)
    if first.pair == last.pair:
        return ParetoFront((first,))

    found = [first, last]
    stack = [(first, last)]
    while stack:
        left, right = stack.pop()
        lam = Fraction(right.value - left.value, right.cost - left.cost)
        witness, best = sfm_min(obj, lam, backend=backend)
        if best == lam * left.cost - left.value:
            continue
        mid = FrontPoint(decomp.cost(witness), decomp.val(witness), witness)
        if not left.cost < mid.cost < right.cost:
            raise AssertionError("breakpoint search left its bracket")
        found.append(mid)
        stack.append((left, mid))
        stack.append((mid, right))
    return ParetoFront(tuple(sorted(found, key=lambda pt: pt.cost)))


@dataclass(frozen=True)
class Case1:
    point: FrontPoint


@dataclass(frozen=True)
class Case2:
    pass


@dataclass(frozen=True)
class Case3:
    low: FrontPoint
    high: FrontPoint


def locate_budget(front: ParetoFront, budget: int) -> Case1 | Case2 | Case3:
    if not len(front):
        raise ValueError("empty front")
    for pt in front:
        if pt.cost == budget:
            return Case1(pt)
    if budget > front[-1].cost:
        return Case2()
    for low, high in zip(front.points, front.points[1:]):
        if low.cost < budget < high.cost:
            return Case3(low, high)
    raise AssertionError("budget below the cost-zero tuple")


def nu_star(low: FrontPoint, high: FrontPoint, budget: int) -> Fraction:
    """Value of the hull segment between ``low`` and ``high`` at ``budget``."""
    if not low.cost < budget < high.cost:
        raise ValueError("budget is not strictly bracketed")
    slope = Fraction(high.value - low.value, high.cost - low.cost)
    return low.value + (budget - low.cost) * slope
