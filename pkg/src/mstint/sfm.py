"""Minimisation of ``lam * c(U) - val(U)`` over removal sets ``U``.

Two backends share one contract and return the minimal minimiser (the
intersection of all minimisers), or the maximal one on request:

* ``exhaustive`` tabulates ``c`` and ``val`` for every subset of the ground
  set once (vectorised, ground sets of at most 22 edges) and answers each
  ``lam`` by a scan in exact integer arithmetic.
* ``mnp`` runs the Fujishige-Wolfe minimum-norm-point method on the base
  polytope in floating point, then certifies the rounded set integrally:
  with ``lam = a/b`` the scaled objective ``a*c(U) - b*val(U)`` is an integer,
  so a candidate whose value is within 1 of the dual bound ``x^-(E)`` is
  optimal.  Minimal and maximal minimisers are then fixed by probing single
  elements on restricted problems.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .graphcore import UnionFind, sigma_batch
from .levels import LevelDecomposition

EXHAUSTIVE_LIMIT = 22
AUTO_EXHAUSTIVE_LIMIT = 16
_CHUNK = 1 << 15


class ParametricObjective:
    """The family ``U -> lam * c(U) - val(U)`` for ``U`` in the ground set."""

    def __init__(self, decomp: LevelDecomposition):
        self.decomp = decomp
        self.ground = decomp.ground
        self.costs = [decomp.instance.edges[i].cost for i in self.ground]

    @property
    def size(self) -> int:
        return len(self.ground)

    def value(self, removal, lam) -> Fraction:
        removal = frozenset(removal)
        return Fraction(lam) * self.decomp.cost(removal) - self.decomp.val(removal)

    def chain_vals(self, order: Sequence[int]) -> list[int]:
        """``val`` of every prefix of ``order`` (positions into the ground set)."""
        d = self.decomp
        inst, p, levels = d.instance, d.p, d.level_of
        gone = {self.ground[j] for j in order}
        finds = [UnionFind(inst.n) for _ in range(p + 1)]  # levels -1..p-1
        for e in inst.edges:
            if e.id in gone or levels[e.id] >= p:
                continue
            for k in range(levels[e.id] + 1, p + 1):
                finds[k].union(e.u, e.v)
        weights = [1] + [1 << i for i in range(p)]

        def current() -> int:
            return sum(w * (uf.count - 1) for w, uf in zip(weights, finds))

        out = [current()]
        for j in reversed(order):
            e = inst.edges[self.ground[j]]
            for k in range(levels[e.id] + 1, p + 1):
                finds[k].union(e.u, e.v)
            out.append(current())
        out.reverse()
        return out

    @cached_property
    def table(self) -> tuple[np.ndarray, np.ndarray]:
        """Cost and ``val`` of every subset, indexed by bitmask over the ground set."""
        m = self.size
        if m > EXHAUSTIVE_LIMIT:
            raise ValueError(f"ground set of {m} edges exceeds the exhaustive limit")
        d = self.decomp
        inst = d.instance
        position = {eid: j for j, eid in enumerate(self.ground)}
        total = 1 << m
        costs = np.zeros(total, dtype=np.int64)
        vals = np.zeros(total, dtype=np.int64)
        for start in range(0, total, _CHUNK):
            masks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            for j, c in enumerate(self.costs):
                costs[start:start + len(masks)] += ((masks >> j) & 1) * c
            acc = np.zeros(len(masks), dtype=np.int64)
            for lvl in range(-1, d.p):
                ids = sorted(d.prefix(lvl))
                ends = np.array([inst.edges[i].endpoints for i in ids], dtype=np.int64).reshape(-1, 2)
                present = np.ones((len(masks), len(ids)), dtype=bool)
                for col, eid in enumerate(ids):
                    if eid in position:
                        present[:, col] = ((masks >> position[eid]) & 1) == 0
                weight = 1 if lvl < 0 else 1 << lvl
                acc += weight * (sigma_batch(inst.n, ends, present) - 1)
            vals[start:start + len(masks)] = acc
        return costs, vals

    def ids(self, positions) -> frozenset[int]:
        return frozenset(self.ground[j] for j in positions)


def _split(lam) -> tuple[int, int]:
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return lam.numerator, lam.denominator


def sfm_min(
    objective: ParametricObjective,
    lam,
    backend: str = "auto",
    maximal: bool = False,
) -> tuple[frozenset[int], Fraction]:
    """Minimal (or maximal) minimiser of ``lam * c(U) - val(U)`` and the minimum."""
    if backend == "auto":
        backend = "exhaustive" if objective.size <= AUTO_EXHAUSTIVE_LIMIT else "mnp"
    if backend == "exhaustive":
        return _exhaustive(objective, lam, maximal)
    if backend == "mnp":
        return _mnp_minimiser(objective, lam, maximal)
    raise ValueError(f"unknown backend {backend!r}")


def _exhaustive(objective, lam, maximal):
    a, b = _split(lam)
    costs, vals = objective.table
    scaled = a * costs - b * vals
    best = scaled.min()
    hits = np.flatnonzero(scaled == best)
    mask = np.bitwise_or.reduce(hits) if maximal else np.bitwise_and.reduce(hits)
    positions = [j for j in range(objective.size) if (int(mask) >> j) & 1]
    return objective.ids(positions), Fraction(int(best), b)


# --- minimum-norm-point backend -------------------------------------------

class NoCertificate(RuntimeError):
    pass


def min_norm_point(
    k: int,
    chain: Callable[[list[int]], list[int]],
    max_iter: int = 5000,
) -> tuple[list[int], int]:
    """Minimise a submodular ``f`` on subsets of ``range(k)`` with ``f(empty) = 0``.

    ``chain(order)`` returns integer ``f`` values of all prefixes of ``order``.
    Returns a certified minimiser and the minimum value.
    """
    if k == 0:
        return [], 0

    def greedy(x):
        order = [int(i) for i in np.argsort(x, kind="stable")]
        vals = chain(order)
        q = np.empty(k)
        for pos, i in enumerate(order):
            q[i] = vals[pos + 1] - vals[pos]
        return q, order, vals

    x, order, vals = greedy(np.zeros(k))
    points = [x]
    weights = np.array([1.0])
    for _ in range(max_iter):
        q, order, vals = greedy(x)
        best_len = int(np.argmin(vals))
        lower = float(np.minimum(x, 0.0).sum())
        on_base = abs(float(x.sum()) - vals[-1]) <= 1e-9 * max(1.0, abs(vals[-1]))
        if on_base and vals[best_len] - lower < 1 - 1e-7:
            return order[:best_len], int(vals[best_len])
        scale = max(float(q @ q), max(float(p @ p) for p in points), 1.0)
        if float(x @ x) - float(x @ q) <= 1e-12 * scale:
            break
        points.append(q)
        weights = np.append(weights, 0.0)
        while True:
            mat = np.array(points)
            alpha = _affine_minimiser(mat)
            if np.all(alpha > 1e-12):
                weights = alpha
                x = alpha @ mat
                break
            drop = alpha <= 1e-12
            ratios = weights[drop] / (weights[drop] - alpha[drop])
            theta = float(ratios.min()) if len(ratios) else 1.0
            weights = theta * alpha + (1 - theta) * weights
            keep = weights > 1e-12
            points = [p for p, kept in zip(points, keep) if kept]
            weights = weights[keep] / weights[keep].sum()
            x = weights @ np.array(points)
    raise NoCertificate("minimum-norm-point iteration ended without an integral certificate")


def _affine_minimiser(points: np.ndarray) -> np.ndarray:
    """Coefficients (summing to one) of the min-norm point of the affine hull of ``points``.

    Parametrised around the first point so the sum constraint holds exactly
    even when the points are affinely dependent.
    """
    base, rest = points[0], points[1:] - points[0]
    if not len(rest):
        return np.ones(1)
    beta = np.linalg.lstsq(rest.T, -base, rcond=None)[0]
    return np.concatenate([[1.0 - beta.sum()], beta])


def _mnp_minimiser(objective: ParametricObjective, lam, maximal: bool):
    a, b = _split(lam)
    costs = objective.costs

    def scaled_chain(order: list[int]) -> list[int]:
        vals = objective.chain_vals(order)
        out, c = [], 0
        for pos in range(len(order) + 1):
            if pos:
                c += costs[order[pos - 1]]
            out.append(a * c - b * vals[pos])
        return out

    def restricted(fixed: list[int], free: list[int]):
        """Minimise over ``fixed + X`` for ``X`` a subset of ``free``."""
        base = scaled_chain(fixed)[-1]

        def chain(order):
            vals = scaled_chain(fixed + [free[i] for i in order])
            return [v - base for v in vals[len(fixed):]]

        sub, value = min_norm_point(len(free), chain)
        return [free[i] for i in sub], value + base

    everything = list(range(objective.size))
    found, best = restricted([], everything)
    current = set(found)
    if maximal:
        for e in everything:
            if e in current:
                continue
            fixed = sorted(current | {e})
            free = [j for j in everything if j not in current and j != e]
            extra, value = restricted(fixed, free)
            if value == best:
                current |= {e, *extra}
    else:
        for e in sorted(found):
            if e not in current:
                continue
            free = sorted(current - {e})
            sub, value = restricted([], free)
            if value == best:
                current = set(sub)
    return objective.ids(sorted(current)), Fraction(best, b)
