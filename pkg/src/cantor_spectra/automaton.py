"""Membership in K(q, A) via the finite orbit graph of ``x -> q x - a``.

A rational ``x = v/u`` lies in ``K(q, A)`` iff the recursion
``x_n = q x_{n-1} - a_n`` can be continued forever inside the convex hull.
All orbit points live on the grid ``Z / lcm(u, N)`` (``N`` the digit scale),
so the reachable part of the hull is finite and an infinite continuation
exists iff some cycle is reachable from the root.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exact import CantorSystem, RationalLike, as_rational, format_rational

_INT64_SAFE = 2**62


def state_bound(sys: CantorSystem, u: int) -> int:
    """Upper bound on the number of orbit states for a root with denominator ``u``.

    States are ``1/(u N)``-separated points of the hull, hence at most
    ``floor(u N diam) + 1`` of them.
    """
    if u < 1:
        raise ValueError("u must be a positive integer")
    return math.floor(u * sys.scale * sys.diam) + 1


def _grid_bounds(sys: CantorSystem, grid: int) -> tuple[int, int]:
    lo = sys.hull_lo * grid
    hi = sys.hull_hi * grid
    return math.ceil(lo), math.floor(hi)


def _digit_steps(sys: CantorSystem, grid: int) -> list[int]:
    return [int(a * grid) for a in sys.digits]


def _alive_nodes(edges: dict[int, list[tuple[int, int]]]) -> set[int]:
    """Nodes from which an infinite path starts, i.e. that reach a cycle.

    Repeatedly strips nodes whose successors are all stripped; what survives
    is exactly the set of nodes with an infinite forward path.
    """
    outdeg = {k: len(v) for k, v in edges.items()}
    preds: dict[int, list[int]] = {k: [] for k in edges}
    for k, succs in edges.items():
        for _, s in succs:
            preds[s].append(k)
    queue = deque(k for k, d in outdeg.items() if d == 0)
    dead: set[int] = set()
    while queue:
        k = queue.popleft()
        dead.add(k)
        for pk in preds[k]:
            outdeg[pk] -= 1
            if outdeg[pk] == 0:
                queue.append(pk)
    return set(edges) - dead


@dataclass(frozen=True)
class OrbitGraph:
    """Reachable orbit states of ``root`` inside the hull.

    Internally states are integers ``k`` standing for ``k / grid``; the public
    ``states`` / ``edges`` views convert back to Fractions.
    """

    system: CantorSystem
    root: Fraction
    grid: int
    nodes: dict[int, list[tuple[int, int]]] = field(repr=False)

    @cached_property
    def states(self) -> frozenset[Fraction]:
        return frozenset(Fraction(k, self.grid) for k in self.nodes)

    @cached_property
    def edges(self) -> dict[Fraction, list[tuple[Fraction, Fraction]]]:
        digits = self.system.digits
        return {
            Fraction(k, self.grid): [(digits[i], Fraction(s, self.grid)) for i, s in succ]
            for k, succ in self.nodes.items()
        }

    @property
    def root_in_hull(self) -> bool:
        return bool(self.nodes)


def build_orbit_graph(sys: CantorSystem, x0: RationalLike) -> OrbitGraph:
    x0 = as_rational(x0)
    grid = math.lcm(x0.denominator, sys.scale)
    lo, hi = _grid_bounds(sys, grid)
    steps = _digit_steps(sys, grid)
    q = sys.q
    root = int(x0 * grid)
    nodes: dict[int, list[tuple[int, int]]] = {}
    if lo <= root <= hi:
        nodes[root] = []
        queue = deque([root])
        while queue:
            k = queue.popleft()
            succ = nodes[k]
            base = q * k
            for i, step in enumerate(steps):
                s = base - step
                if lo <= s <= hi:
                    succ.append((i, s))
                    if s not in nodes:
                        nodes[s] = []
                        queue.append(s)
    return OrbitGraph(system=sys, root=x0, grid=grid, nodes=nodes)


def coding_value(q: int, preperiod, period) -> Fraction:
    """Exact value of the coding ``preperiod (period)^inf`` in base ``q``."""
    value = Fraction(0)
    for i, a in enumerate(preperiod, start=1):
        value += Fraction(a) / q**i
    if period:
        n = len(period)
        block = sum(Fraction(a) / q**i for i, a in enumerate(period, start=1))
        value += block * Fraction(q**n, q**n - 1) / q ** len(preperiod)
    return value


@dataclass(frozen=True)
class MembershipCertificate:
    member: bool
    preperiod: tuple[Fraction, ...]
    period: tuple[Fraction, ...]
    state_bound: int
    states_visited: int

    def value(self, q: int) -> Fraction | None:
        if not self.member:
            return None
        return coding_value(q, self.preperiod, self.period)

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "preperiod": format_word(self.preperiod),
            "period": format_word(self.period),
            "states_visited": self.states_visited,
            "state_bound": str(self.state_bound),
        }


def format_word(word) -> str:
    """Concatenate single decimal digits (``"02"``); otherwise comma-separate."""
    if all(Fraction(a).denominator == 1 and 0 <= a <= 9 for a in word):
        return "".join(str(int(a)) for a in word)
    return ",".join(format_rational(a) for a in word)


def is_member(sys: CantorSystem, x: RationalLike) -> MembershipCertificate:
    """Decide ``x in K(q, A)`` and return an eventually periodic coding if so.

    The coding takes the smallest digit at every step that keeps the orbit
    able to continue forever, so it is the lexicographically least coding.
    """
    x = as_rational(x)
    bound = state_bound(sys, x.denominator)
    graph = build_orbit_graph(sys, x)
    if not graph.nodes:
        return MembershipCertificate(False, (), (), bound, 0)
    alive = _alive_nodes(graph.nodes)
    root = int(x * graph.grid)
    if root not in alive:
        return MembershipCertificate(False, (), (), bound, len(graph.nodes))

    seen: dict[int, int] = {}
    word: list[Fraction] = []
    k = root
    while k not in seen:
        seen[k] = len(word)
        for i, s in graph.nodes[k]:
            if s in alive:
                word.append(sys.digits[i])
                k = s
                break
    start = seen[k]
    return MembershipCertificate(
        member=True,
        preperiod=tuple(word[:start]),
        period=tuple(word[start:]),
        state_bound=bound,
        states_visited=len(graph.nodes),
    )


def grid_members(sys: CantorSystem, denominator: int) -> list[Fraction]:
    """All points of ``K(q, A) ∩ (Z / denominator)``, sorted.

    Runs the orbit graph over the whole hull grid ``Z / lcm(denominator, N)``
    at once; the recursion maps this grid into itself, so the members are
    exactly the grid nodes that admit an infinite path.
    """
    if denominator < 1:
        raise ValueError("denominator must be positive")
    grid = math.lcm(denominator, sys.scale)
    lo, hi = _grid_bounds(sys, grid)
    if hi < lo:
        return []
    steps = _digit_steps(sys, grid)
    extent = max(abs(lo), abs(hi)) * sys.q + max(abs(s) for s in steps)
    if extent < _INT64_SAFE:
        alive = _alive_grid_numpy(sys.q, steps, lo, hi)
    else:
        alive = _alive_grid_python(sys.q, steps, lo, hi)
    stride = grid // denominator
    return [Fraction(k, grid) for k in alive if k % stride == 0]


def _alive_grid_numpy(q: int, steps: list[int], lo: int, hi: int) -> list[int]:
    ks = np.arange(lo, hi + 1, dtype=np.int64)
    size = ks.size
    targets = []
    for step in steps:
        pos = q * ks - step - lo
        ok = (pos >= 0) & (pos < size)
        targets.append((np.where(ok, pos, 0), ok))
    alive = np.ones(size, dtype=bool)
    # Each pass drops nodes with no surviving successor; converges within
    # about log_q(grid * diam) passes because escaping orbits expand by q.
    while True:
        nxt = np.zeros(size, dtype=bool)
        for pos, ok in targets:
            nxt |= ok & alive[pos]
        if np.array_equal(nxt, alive):
            break
        alive = nxt
    return [int(k) for k in ks[alive]]


def _alive_grid_python(q: int, steps: list[int], lo: int, hi: int) -> list[int]:
    edges = {}
    for k in range(lo, hi + 1):
        edges[k] = [(i, q * k - s) for i, s in enumerate(steps) if lo <= q * k - s <= hi]
    return sorted(_alive_nodes(edges))
