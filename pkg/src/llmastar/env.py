"""Continuous 2D environments with axis-aligned segment barriers.

Maps live in a continuous plane but searches run on the integer lattice
inside the bounding box, 8-connected with step costs 1 and sqrt(2).
Barriers are closed 1D segments of zero thickness; a point "inside an
obstacle" means exactly on a barrier segment.  All collision predicates
use exact integer orientation tests, never floating point or epsilons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SQRT2 = math.sqrt(2.0)

# 8-connected moves, counterclockwise from East: E, NE, N, NW, W, SW, S, SE.
DIRECTIONS: tuple[tuple[int, int, float], ...] = (
    (1, 0, 1.0),
    (1, 1, SQRT2),
    (0, 1, 1.0),
    (-1, 1, SQRT2),
    (-1, 0, 1.0),
    (-1, -1, SQRT2),
    (0, -1, 1.0),
    (1, -1, SQRT2),
)


class Point(NamedTuple):
    """Integer lattice point."""

    x: int
    y: int


PointLike = tuple[int, int]


@dataclass(frozen=True)
class Barrier:
    """Axis-aligned closed barrier segment.

    ``fixed`` is the shared coordinate (y for horizontal, x for vertical);
    the segment spans ``[span_lo, span_hi]`` on the other axis.
    """

    orientation: str  # "horizontal" | "vertical"
    fixed: int
    span_lo: int
    span_hi: int

    def __post_init__(self) -> None:
        if self.orientation not in ("horizontal", "vertical"):
            raise ValueError(f"unknown barrier orientation: {self.orientation!r}")
        if self.span_lo > self.span_hi:
            lo, hi = self.span_hi, self.span_lo
            object.__setattr__(self, "span_lo", lo)
            object.__setattr__(self, "span_hi", hi)

    @classmethod
    def horizontal(cls, y: int, x_start: int, x_end: int) -> "Barrier":
        return cls("horizontal", y, x_start, x_end)

    @classmethod
    def vertical(cls, x: int, y_start: int, y_end: int) -> "Barrier":
        return cls("vertical", x, y_start, y_end)

    def endpoints(self) -> tuple[Point, Point]:
        if self.orientation == "horizontal":
            return Point(self.span_lo, self.fixed), Point(self.span_hi, self.fixed)
        return Point(self.fixed, self.span_lo), Point(self.fixed, self.span_hi)

    def as_list(self) -> list[int]:
        """[y, x_start, x_end] for horizontal, [x, y_start, y_end] for vertical."""
        return [self.fixed, self.span_lo, self.span_hi]


@dataclass(frozen=True)
class Environment:
    """Immutable map: bounding box plus horizontal and vertical barriers."""

    x_range: tuple[int, int]
    y_range: tuple[int, int]
    h_barriers: tuple[Barrier, ...] = field(default_factory=tuple)
    v_barriers: tuple[Barrier, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_range", tuple(self.x_range))
        object.__setattr__(self, "y_range", tuple(self.y_range))
        object.__setattr__(self, "h_barriers", tuple(self.h_barriers))
        object.__setattr__(self, "v_barriers", tuple(self.v_barriers))
        x_min, x_max = self.x_range
        y_min, y_max = self.y_range
        if x_min >= x_max:
            raise ValueError(f"x_range must satisfy x_min < x_max, got {self.x_range}")
        if y_min >= y_max:
            raise ValueError(f"y_range must satisfy y_min < y_max, got {self.y_range}")
        for b in self.h_barriers:
            if b.orientation != "horizontal":
                raise ValueError("h_barriers must be horizontal")
            if not (y_min <= b.fixed <= y_max and x_min <= b.span_lo and b.span_hi <= x_max):
                raise ValueError(f"horizontal barrier {b.as_list()} outside ranges")
        for b in self.v_barriers:
            if b.orientation != "vertical":
                raise ValueError("v_barriers must be vertical")
            if not (x_min <= b.fixed <= x_max and y_min <= b.span_lo and b.span_hi <= y_max):
                raise ValueError(f"vertical barrier {b.as_list()} outside ranges")

    @classmethod
    def create(
        cls,
        x_range: Sequence[int],
        y_range: Sequence[int],
        horizontal_barriers: Iterable[Sequence[int]] = (),
        vertical_barriers: Iterable[Sequence[int]] = (),
    ) -> "Environment":
        """Build from the plain-list form used in map files."""
        return cls(
            (int(x_range[0]), int(x_range[1])),
            (int(y_range[0]), int(y_range[1])),
            tuple(Barrier.horizontal(int(y), int(a), int(b)) for y, a, b in horizontal_barriers),
            tuple(Barrier.vertical(int(x), int(a), int(b)) for x, a, b in vertical_barriers),
        )

    def to_json_dict(self) -> dict:
        return {
            "x_range": list(self.x_range),
            "y_range": list(self.y_range),
            "horizontal_barriers": [b.as_list() for b in self.h_barriers],
            "vertical_barriers": [b.as_list() for b in self.v_barriers],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Environment":
        return cls.create(
            data["x_range"],
            data["y_range"],
            data["horizontal_barriers"],
            data["vertical_barriers"],
        )

    def barrier_segments(self) -> list[tuple[Point, Point]]:
        return [b.endpoints() for b in self.h_barriers + self.v_barriers]

    def blocked_mask(self) -> np.ndarray:
        """Boolean grid over the lattice, indexed [x - x_min, y - y_min].

        True marks blocked points.  Unit-move validity on the lattice reduces
        to both endpoints being unblocked (integer barriers cannot cross a
        unit move without touching one of its endpoints), so searches can use
        this mask instead of per-move segment tests.
        """
        x_min, x_max = self.x_range
        y_min, y_max = self.y_range
        mask = np.zeros((x_max - x_min + 1, y_max - y_min + 1), dtype=bool)
        for b in self.h_barriers:
            mask[b.span_lo - x_min : b.span_hi - x_min + 1, b.fixed - y_min] = True
        for b in self.v_barriers:
            mask[b.fixed - x_min, b.span_lo - y_min : b.span_hi - y_min + 1] = True
        return mask


def _orientation(a: PointLike, b: PointLike, c: PointLike) -> int:
    """Sign of the cross product (b - a) x (c - a): +1 ccw, -1 cw, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def _on_segment(p: PointLike, q: PointLike, r: PointLike) -> bool:
    """Whether q lies on closed segment pr, assuming p, q, r collinear."""
    return (
        min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
        and min(p[1], r[1]) <= q[1] <= max(p[1], r[1])
    )


def segments_intersect(p1: PointLike, p2: PointLike, q1: PointLike, q2: PointLike) -> bool:
    """Whether closed segments p1p2 and q1q2 share at least one point.

    Exact for integer coordinates; degenerate (zero-length) segments allowed.
    """
    o1 = _orientation(p1, p2, q1)
    o2 = _orientation(p1, p2, q2)
    o3 = _orientation(q1, q2, p1)
    o4 = _orientation(q1, q2, p2)
    if o1 != o2 and o3 != o4 and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    if o1 == 0 and _on_segment(p1, q1, p2):
        return True
    if o2 == 0 and _on_segment(p1, q2, p2):
        return True
    if o3 == 0 and _on_segment(q1, p1, q2):
        return True
    if o4 == 0 and _on_segment(q1, p2, q2):
        return True
    return False


def point_blocked(env: Environment, p: PointLike) -> bool:
    """True if p falls outside the bounding box or exactly on a barrier."""
    x, y = p
    x_min, x_max = env.x_range
    y_min, y_max = env.y_range
    if not (x_min <= x <= x_max and y_min <= y <= y_max):
        return True
    for b in env.h_barriers:
        if y == b.fixed and b.span_lo <= x <= b.span_hi:
            return True
    for b in env.v_barriers:
        if x == b.fixed and b.span_lo <= y <= b.span_hi:
            return True
    return False


def move_valid(env: Environment, a: PointLike, b: PointLike) -> bool:
    """True if both endpoints are unblocked and segment ab crosses no barrier."""
    if point_blocked(env, a) or point_blocked(env, b):
        return False
    for e1, e2 in env.barrier_segments():
        if segments_intersect(a, b, e1, e2):
            return False
    return True


def neighbors(env: Environment, p: PointLike) -> list[tuple[Point, float]]:
    """8-connected neighbors of p with step costs, filtered by move_valid.

    Order is fixed counterclockwise from East for deterministic expansion.
    """
    x, y = p
    out = []
    for dx, dy, cost in DIRECTIONS:
        n = Point(x + dx, y + dy)
        if move_valid(env, p, n):
            out.append((n, cost))
    return out


def path_valid(
    env: Environment, path: Sequence[PointLike], s0: PointLike, sg: PointLike
) -> bool:
    """Whether path runs from s0 to sg with every segment collision-free."""
    if not path:
        return False
    if tuple(path[0]) != tuple(s0) or tuple(path[-1]) != tuple(sg):
        return False
    return all(move_valid(env, path[i], path[i + 1]) for i in range(len(path) - 1))


def path_length(path: Sequence[PointLike]) -> float:
    """Sum of Euclidean segment lengths of a nonempty point sequence."""
    if not path:
        raise ValueError("path_length requires a nonempty path")
    total = 0.0
    for (x1, y1), (x2, y2) in zip(path, path[1:]):
        total += math.hypot(x2 - x1, y2 - y1)
    return total


def scale_environment(env: Environment, k: int) -> Environment:
    """Multiply bounds and barrier coordinates by k >= 1."""
    if k < 1:
        raise ValueError(f"scale factor must be >= 1, got {k}")
    return Environment(
        (env.x_range[0] * k, env.x_range[1] * k),
        (env.y_range[0] * k, env.y_range[1] * k),
        tuple(Barrier(b.orientation, b.fixed * k, b.span_lo * k, b.span_hi * k) for b in env.h_barriers),
        tuple(Barrier(b.orientation, b.fixed * k, b.span_lo * k, b.span_hi * k) for b in env.v_barriers),
    )
