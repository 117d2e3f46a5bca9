"""Waypoint-guided A*.

A search over the same lattice as :func:`llmastar.search.astar`, but with the
priority ``f(s) = g(s) + h(s) + dist(t, s)`` where ``t`` is the waypoint
currently being pursued from an externally supplied target list.  Whenever a
generated neighbor equals ``t``, the list advances and the priority of every
OPEN state is recomputed against the new waypoint, steering the frontier leg
by leg.  The combined heuristic can overestimate, so returned paths are valid
but not necessarily optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .env import Environment, Point, PointLike, point_blocked
from .search import HeuristicKind, SearchResult, _guided_search


@dataclass(frozen=True)
class TargetList:
    """Sanitized ordered waypoints; ``cursor`` indexes the current target.

    Invariants: starts at the query start and ends at the goal, contains no
    blocked point, and no two consecutive waypoints are equal.
    """

    waypoints: tuple[Point, ...]
    cursor: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "waypoints", tuple(Point(*p) for p in self.waypoints))
        if not self.waypoints:
            raise ValueError("TargetList requires at least one waypoint")
        if not 0 <= self.cursor < len(self.waypoints):
            raise ValueError(f"cursor {self.cursor} out of range")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError(f"consecutive duplicate waypoint {tuple(a)}")

    @property
    def current(self) -> Point:
        return self.waypoints[self.cursor]


def _clamp(v: int, lo: int, hi: int) -> int:
    return lo if v < lo else hi if v > hi else v


def sanitize_targets(
    env: Environment, raw: Sequence[PointLike], s0: PointLike, sg: PointLike
) -> TargetList:
    """Repair a raw waypoint sequence into a valid TargetList.

    Points are clamped into the bounding box, dropped if they land on a
    barrier, bracketed by start/goal when missing, and de-duplicated
    consecutively.  The cursor starts past the leading start waypoint, so
    guidance begins with the first real intermediate target.  Worst case the
    result is just [start, goal].
    """
    start = Point(*s0)
    goal = Point(*sg)
    if point_blocked(env, start):
        raise ValueError(f"start {tuple(start)} is blocked")
    if point_blocked(env, goal):
        raise ValueError(f"goal {tuple(goal)} is blocked")

    x_min, x_max = env.x_range
    y_min, y_max = env.y_range
    kept: list[Point] = []
    for p in raw:
        q = Point(_clamp(int(p[0]), x_min, x_max), _clamp(int(p[1]), y_min, y_max))
        if not point_blocked(env, q):
            kept.append(q)

    if not kept or kept[0] != start:
        kept.insert(0, start)
    if kept[-1] != goal:
        kept.append(goal)

    deduped: list[Point] = [kept[0]]
    for p in kept[1:]:
        if p != deduped[-1]:
            deduped.append(p)

    cursor = 0
    while cursor < len(deduped) - 1 and deduped[cursor] == start:
        cursor += 1
    return TargetList(waypoints=tuple(deduped), cursor=cursor)


def current_f(g_cost: float, h_value: float, dist_to_target: float) -> float:
    """Guided priority: path cost plus heuristic plus distance to the target.

    The heuristic and target terms are summed first; they jointly form the
    (non-admissible) guided heuristic added onto g.
    """
    for name, v in (("g_cost", g_cost), ("h_value", h_value), ("dist_to_target", dist_to_target)):
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
        if v < 0:
            raise ValueError(f"{name} must be >= 0, got {v!r}")
    return g_cost + (h_value + dist_to_target)


def llm_astar_search(
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    targets: TargetList,
    h: HeuristicKind = HeuristicKind.EUCLIDEAN,
    *,
    debug_checks: bool = False,
) -> SearchResult:
    """Run the guided search along ``targets``.

    Target advancement is tested on every generated neighbor before the
    CLOSED/obstacle skip, so a neighbor that is already expanded (or not
    directly reachable) still advances the list.  ``stats.recomputes``
    accumulates the OPEN entries rebuilt on each advance.  With
    ``debug_checks`` every rebuild is verified entry by entry.
    """
    start = Point(*s0)
    goal = Point(*sg)
    if targets.waypoints[0] != start:
        raise ValueError("target list must start at the query start")
    if targets.waypoints[-1] != goal:
        raise ValueError("target list must end at the query goal")
    for p in targets.waypoints:
        if point_blocked(env, p):
            raise ValueError(f"target list contains blocked waypoint {tuple(p)}")
    return _guided_search(env, start, goal, h, targets=targets, debug_checks=debug_checks)
