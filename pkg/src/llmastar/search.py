"""Instrumented lattice searches: A*, dynamic weighted A*, and the guided core.

All variants run the same engine so counters, tie-breaking, and stale-entry
handling are defined once:

* an "operation" is a state popped fresh from OPEN (``expansions``),
* "storage" is the peak of ``|OPEN| + |CLOSED|`` with each lattice state
  counted once (``peak_storage``),
* de-prioritized duplicates are skipped by lazy deletion and never counted,
* ties on f prefer larger g, then lexicographic (x, y).

Priorities are tuples ``(f, -g, x, y)``, so identical inputs always produce
identical expansion sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from heapq import heapify, heappop, heappush
from typing import TYPE_CHECKING, Callable, Mapping, Optional

from .env import DIRECTIONS, Environment, Point, PointLike, point_blocked

if TYPE_CHECKING:
    from .llm_astar import TargetList


class NoPathError(RuntimeError):
    """Raised by callers that require a path when the search found none."""


class MalformedParentChainError(RuntimeError):
    """Parent chain does not terminate at a root (cycle or missing link)."""


class HeuristicKind(str, Enum):
    EUCLIDEAN = "euclidean"
    CHEBYSHEV = "chebyshev"


def heuristic_fn(kind: HeuristicKind, goal: PointLike) -> Callable[[PointLike], float]:
    gx, gy = goal
    if kind is HeuristicKind.EUCLIDEAN:
        return lambda s: math.hypot(s[0] - gx, s[1] - gy)
    if kind is HeuristicKind.CHEBYSHEV:
        return lambda s: float(max(abs(s[0] - gx), abs(s[1] - gy)))
    raise ValueError(f"unknown heuristic kind: {kind!r}")


@dataclass
class SearchStats:
    """Counters for one search run."""

    expansions: int = 0
    peak_storage: int = 0
    recomputes: int = 0
    pushes: int = 0

    def as_dict(self) -> dict:
        return {
            "expansions": self.expansions,
            "peak_storage": self.peak_storage,
            "recomputes": self.recomputes,
            "pushes": self.pushes,
        }


@dataclass
class SearchResult:
    """Path (if any), its cost, counters, and the expansion sequence."""

    path: Optional[list[Point]]
    cost: Optional[float]
    stats: SearchStats
    expanded: list[Point]

    @property
    def found(self) -> bool:
        return self.path is not None

    @property
    def closed_states(self) -> list[Point]:
        """States moved to CLOSED; excludes the goal, which returns from OPEN."""
        if self.found:
            return self.expanded[:-1]
        return self.expanded


def reconstruct_path(parents: Mapping[Point, Point], end: PointLike) -> list[Point]:
    """Forward start-to-end path from a child-to-parent map.

    The root is the first node absent from ``parents``.  A chain longer than
    the map itself means a cycle.
    """
    limit = len(parents) + 1
    node = Point(*end)
    back = [node]
    while node in parents:
        node = parents[node]
        back.append(node)
        if len(back) > limit:
            raise MalformedParentChainError(f"parent chain from {end} does not reach a root")
    back.reverse()
    return back


def _guided_search(
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    h_kind: HeuristicKind,
    *,
    w0: float = 1.0,
    decay: float = 1.0,
    targets: "Optional[TargetList]" = None,
    debug_checks: bool = False,
) -> SearchResult:
    """Shared engine.

    Without targets the priority is ``g + w*h`` with ``w`` decayed
    multiplicatively (floor 1) after each expansion.  With targets the
    priority is ``g + (h + dist(t, s))`` where t is the current waypoint;
    when a generated neighbor equals t (checked before the CLOSED/obstacle
    skip, and regardless of move validity), t advances and every OPEN
    entry's priority is recomputed against the new waypoint.
    """
    start = Point(*s0)
    goal = Point(*sg)
    if point_blocked(env, start):
        raise ValueError(f"start {tuple(start)} is blocked")
    if point_blocked(env, goal):
        raise ValueError(f"goal {tuple(goal)} is blocked")

    x_min, x_max = env.x_range
    y_min, y_max = env.y_range
    mask = env.blocked_mask()
    h = heuristic_fn(h_kind, goal)

    if targets is not None:
        waypoints = targets.waypoints
        cursor = min(targets.cursor, len(waypoints) - 1)
        t = waypoints[cursor]

        def dist_to_target(s: PointLike) -> float:
            return math.hypot(s[0] - t[0], s[1] - t[1])

        def priority(g_val: float, s: PointLike) -> float:
            # Grouped as g + (h + dist): the waypoint term is part of the
            # heuristic, so with t == goal and Euclidean h this is bitwise
            # g + 2*h, matching weighted A* at w=2.
            return g_val + (h(s) + dist_to_target(s))

    else:
        w = w0

        def priority(g_val: float, s: PointLike) -> float:
            return g_val + w * h(s)

    stats = SearchStats()
    g: dict[Point, float] = {start: 0.0}
    parents: dict[Point, Point] = {}
    open_set: set[Point] = {start}
    closed: set[Point] = set()
    expanded: list[Point] = []
    heap: list[tuple[float, float, int, int]] = [(priority(0.0, start), -0.0, start.x, start.y)]
    stats.pushes = 1
    stats.peak_storage = 1

    while heap:
        _, neg_g, x, y = heappop(heap)
        s = Point(x, y)
        if s in closed:
            continue
        if -neg_g != g[s]:
            continue  # superseded by a cheaper push
        stats.expansions += 1
        expanded.append(s)
        if s == goal:
            path = reconstruct_path(parents, goal)
            return SearchResult(path=path, cost=g[goal], stats=stats, expanded=expanded)
        open_set.remove(s)
        closed.add(s)
        g_s = g[s]

        for dx, dy, step in DIRECTIONS:
            n = Point(x + dx, y + dy)
            if targets is not None and n == t and t != goal:
                cursor += 1
                t = waypoints[cursor]
                stats.recomputes += len(open_set)
                heap = [(priority(g[o], o), -g[o], o.x, o.y) for o in open_set]
                heapify(heap)
                if debug_checks:
                    for f_val, ng, ox, oy in heap:
                        assert f_val == priority(-ng, (ox, oy))
            if n in closed:
                continue
            nx = n.x - x_min
            ny = n.y - y_min
            if nx < 0 or ny < 0 or n.x > x_max or n.y > y_max or mask[nx, ny]:
                continue
            g_tent = g_s + step
            g_old = g.get(n)
            if g_old is None or g_tent < g_old:
                parents[n] = s
                g[n] = g_tent
                heappush(heap, (priority(g_tent, n), -g_tent, n.x, n.y))
                if g_old is None:
                    open_set.add(n)
                    stats.pushes += 1
                    size = len(open_set) + len(closed)
                    if size > stats.peak_storage:
                        stats.peak_storage = size

        if targets is None:
            w = max(1.0, w * decay)

    return SearchResult(path=None, cost=None, stats=stats, expanded=expanded)


def astar(
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    h: HeuristicKind = HeuristicKind.EUCLIDEAN,
) -> SearchResult:
    """Classical A* with f = g + h; optimal under an admissible heuristic."""
    return _guided_search(env, s0, sg, h, w0=1.0, decay=1.0)


def weighted_astar(
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    h: HeuristicKind = HeuristicKind.EUCLIDEAN,
    w0: float = 2.0,
    decay: float = 0.99,
) -> SearchResult:
    """Dynamic weighted A*: f = g + w*h, w <- max(1, w * decay) per expansion."""
    if w0 < 1:
        raise ValueError(f"w0 must be >= 1, got {w0}")
    if not (0 < decay <= 1):
        raise ValueError(f"decay must be in (0, 1], got {decay}")
    return _guided_search(env, s0, sg, h, w0=w0, decay=decay)


def optimal_cost(env: Environment, s0: PointLike, sg: PointLike) -> float:
    """Minimum lattice path cost, raising NoPathError when unreachable."""
    result = astar(env, s0, sg)
    if not result.found:
        raise NoPathError(f"no path from {tuple(s0)} to {tuple(sg)}")
    assert result.cost is not None
    return result.cost
