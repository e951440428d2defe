"""Instance text format, random instances and solve reports.

Instance files::

    # comment
    mstint <n> <m> <B>
    e <u> <v> <weight> <cost>      (m lines; cost '*' = non-interdictable)

Reports are ``key=value`` lines; ``nu_star`` is an exact fraction ``num/den``.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .graphcore import Edge, Instance, global_min_cut
from .solver import SolveReport


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _int(tok: str, line: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line, f"{what} {tok!r} is not an integer") from None


def parse_text(text: str) -> Instance:
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "mstint" or len(tok) != 4:
                raise ParseError(lineno, "expected header 'mstint <n> <m> <B>'")
            n, m, budget = (_int(t, lineno, "header field") for t in tok[1:])
            if n < 1:
                raise ParseError(lineno, "vertex count must be positive")
            if m < 0:
                raise ParseError(lineno, "edge count must be nonnegative")
            if budget < 1:
                raise ParseError(lineno, "budget must be positive")
            header = (n, m, budget)
            continue
        if tok[0] != "e" or len(tok) != 5:
            raise ParseError(lineno, "expected edge line 'e <u> <v> <weight> <cost>'")
        n = header[0]
        u, v = _int(tok[1], lineno, "endpoint"), _int(tok[2], lineno, "endpoint")
        w = _int(tok[3], lineno, "weight")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"vertex out of range [0, {n})")
        if u == v:
            raise ParseError(lineno, f"loop at vertex {u}")
        if w < 0:
            raise ParseError(lineno, "negative weight")
        if tok[4] == "*":
            edges.append(Edge(len(edges), u, v, w, 0, interdictable=False))
        else:
            c = _int(tok[4], lineno, "cost")
            if c < 1:
                raise ParseError(lineno, "nonpositive cost")
            edges.append(Edge(len(edges), u, v, w, c))
        if len(edges) > header[1]:
            raise ParseError(lineno, f"more than the declared {header[1]} edges")
    if header is None:
        raise ParseError(0, "missing header")
    if len(edges) != header[1]:
        raise ParseError(0, f"declared {header[1]} edges, found {len(edges)}")
    return Instance(header[0], tuple(edges), header[2])


def parse(path) -> Instance:
    """Read an instance file; ``"-"`` reads standard input."""
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    return parse_text(text)


def serialize(instance: Instance) -> str:
    lines = [f"mstint {instance.n} {instance.m} {instance.budget}"]
    for e in instance.edges:
        cost = str(e.cost) if e.interdictable else "*"
        lines.append(f"e {e.u} {e.v} {e.weight} {cost}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BudgetPolicy:
    """How ``generate`` picks the budget.

    ``fixed``: the given value.  ``fraction``: that share of the total cost
    (at least 1).  ``below_cut``: uniform in ``[1, min(mincut - 1, share of
    total cost)]`` so that no interdiction set disconnects the graph.
    """

    kind: str
    value: float = 0.5

    @classmethod
    def fixed(cls, budget: int) -> "BudgetPolicy":
        return cls("fixed", budget)

    @classmethod
    def fraction(cls, share: float) -> "BudgetPolicy":
        return cls("fraction", share)

    @classmethod
    def below_cut(cls, cap: float = 0.5) -> "BudgetPolicy":
        return cls("below_cut", cap)


def generate(
    seed: int,
    n: int,
    m: int,
    max_weight: int,
    max_cost: int,
    policy: BudgetPolicy = BudgetPolicy.fraction(0.5),
    spanning_tree: bool = False,
) -> Instance:
    """Seeded random multigraph; with ``spanning_tree`` the first ``n-1`` edges form a tree."""
    if n < 2 or m < n - 1:
        raise ValueError("need n >= 2 and m >= n - 1")
    rng = random.Random(seed)
    pairs = []
    if spanning_tree:
        order = list(range(n))
        rng.shuffle(order)
        for k in range(1, n):
            pairs.append((order[rng.randrange(k)], order[k]))
    while len(pairs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            pairs.append((u, v))
    spec = [(u, v, rng.randint(0, max_weight), rng.randint(1, max_cost)) for u, v in pairs]
    total = sum(c for *_, c in spec)
    if policy.kind == "fixed":
        budget = int(policy.value)
    elif policy.kind == "fraction":
        budget = max(1, int(total * policy.value))
    elif policy.kind == "below_cut":
        probe = Instance.build(n, spec, total + 1)
        _, cut = global_min_cut(probe, probe.all_edges)
        budget = rng.randint(1, max(1, min(cut - 1, int(total * policy.value))))
    else:
        raise ValueError(f"unknown budget policy {policy.kind!r}")
    return Instance.build(n, spec, budget)


def _ids(ids) -> str:
    return ",".join(str(i) for i in sorted(ids)) if ids else "-"


def format_report(report: SolveReport) -> str:
    nu = "-" if report.nu_star is None else f"{report.nu_star.numerator}/{report.nu_star.denominator}"
    fields = [
        ("case", report.case),
        ("removal", _ids(report.removal)),
        ("removal_cost", report.cost),
        ("budget", report.budget),
        ("rounded_value", report.rounded_value),
        ("original_value", report.original_value),
        ("nu_star", nu),
        ("guarantee_rounded", report.guarantee_rounded),
        ("guarantee_original", report.guarantee_original),
        ("witness_low", "-" if report.witness_low is None else _ids(report.witness_low)),
        ("witness_high", "-" if report.witness_high is None else _ids(report.witness_high)),
        ("reductions", report.reductions),
    ]
    return "".join(f"{k}={v}\n" for k, v in fields)


def parse_ids(text: str) -> frozenset[int]:
    text = text.strip()
    if text in ("", "-"):
        return frozenset()
    return frozenset(int(t) for t in text.split(","))


def parse_report(text: str) -> dict:
    """Inverse of :func:`format_report` (ids as frozensets, fractions exact)."""
    out: dict = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        out[key] = value
    for key in ("removal",):
        out[key] = parse_ids(out[key])
    for key in ("witness_low", "witness_high"):
        out[key] = None if out[key] == "-" else parse_ids(out[key])
    for key in ("removal_cost", "budget", "rounded_value", "original_value",
                "guarantee_rounded", "guarantee_original", "reductions"):
        out[key] = int(out[key])
    out["nu_star"] = None if out["nu_star"] == "-" else Fraction(out["nu_star"])
    return out
