"""Random map and benchmark-dataset generation with JSON persistence.

Maps are drawn from a seeded PCG64 stream (split per map, so generation is
reproducible and parallelizable), then screened: every start/goal pair must
be unblocked, separated, distinct, and provably solvable on the lattice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .env import Environment, Point, point_blocked
from .search import astar


class GenerationExhaustedError(RuntimeError):
    """No valid map/pair configuration found within the attempt bound."""


class DatasetSchemaError(ValueError):
    """Dataset JSON missing or mistyping a required field."""

    def __init__(self, field_path: str, detail: str = ""):
        self.field_path = field_path
        super().__init__(f"dataset schema violation at {field_path!r}" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class GenParams:
    """Knobs for random map generation; the seed fixes the whole dataset."""

    x_range: tuple[int, int] = (0, 50)
    y_range: tuple[int, int] = (0, 30)
    n_h_barriers: tuple[int, int] = (3, 6)
    n_v_barriers: tuple[int, int] = (2, 4)
    span_fraction: tuple[float, float] = (0.2, 0.6)
    n_pairs: int = 10
    min_separation: float = 10.0
    seed: int = 0
    max_attempts: int = 500

    def __post_init__(self) -> None:
        for name in ("n_h_barriers", "n_v_barriers"):
            lo, hi = getattr(self, name)
            if not (0 <= lo <= hi):
                raise ValueError(f"{name} range must satisfy 0 <= lo <= hi")
        lo, hi = self.span_fraction
        if not (0 < lo <= hi <= 1):
            raise ValueError("span_fraction must satisfy 0 < lo <= hi <= 1")
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")


@dataclass(frozen=True)
class MapRecord:
    """One environment plus its start/goal pairs."""

    id: str
    environment: Environment
    start_goal: tuple[tuple[Point, Point], ...]

    def to_json_dict(self) -> dict:
        d = {"id": self.id}
        d.update(self.environment.to_json_dict())
        d["start_goal"] = [[[s.x, s.y], [g.x, g.y]] for s, g in self.start_goal]
        return d

    @classmethod
    def from_json_dict(cls, data: dict, where: str = "map") -> "MapRecord":
        for key in ("id", "x_range", "y_range", "horizontal_barriers", "vertical_barriers", "start_goal"):
            if key not in data:
                raise DatasetSchemaError(f"{where}.{key}", "missing")
        try:
            env = Environment.from_json_dict(data)
        except (TypeError, ValueError, IndexError) as exc:
            raise DatasetSchemaError(where, str(exc)) from exc
        pairs = []
        for i, pair in enumerate(data["start_goal"]):
            try:
                (sx, sy), (gx, gy) = pair
                pairs.append((Point(int(sx), int(sy)), Point(int(gx), int(gy))))
            except (TypeError, ValueError) as exc:
                raise DatasetSchemaError(f"{where}.start_goal[{i}]", str(exc)) from exc
        return cls(id=str(data["id"]), environment=env, start_goal=tuple(pairs))


def _draw_barriers(params: GenParams, rng: np.random.Generator) -> tuple[list, list]:
    x_min, x_max = params.x_range
    y_min, y_max = params.y_range
    width = x_max - x_min
    height = y_max - y_min
    f_lo, f_hi = params.span_fraction

    def spans(n: int, axis_len: int, lo_bound: int, hi_bound: int, fixed_lo: int, fixed_hi: int):
        out = []
        for _ in range(n):
            span = int(rng.integers(max(1, int(f_lo * axis_len)), max(2, int(f_hi * axis_len)) + 1))
            span = min(span, hi_bound - lo_bound)
            start = int(rng.integers(lo_bound, hi_bound - span + 1))
            fixed = int(rng.integers(fixed_lo, fixed_hi + 1))
            out.append((fixed, start, start + span))
        return out

    n_h = int(rng.integers(params.n_h_barriers[0], params.n_h_barriers[1] + 1))
    n_v = int(rng.integers(params.n_v_barriers[0], params.n_v_barriers[1] + 1))
    # Barriers sit strictly inside the box so edge rows stay traversable.
    h = spans(n_h, width, x_min, x_max, y_min + 1, y_max - 1)
    v = spans(n_v, height, y_min, y_max, x_min + 1, x_max - 1)
    return h, v


def generate_map(params: GenParams, rng: np.random.Generator, map_id: str = "map-000") -> MapRecord:
    """Draw one map and its solvable start/goal pairs.

    Barriers are drawn uniformly within the configured ranges; pairs are
    rejection-sampled until unblocked, separated, distinct, and solvable by
    A*.  Raises :class:`GenerationExhaustedError` when the attempt budget
    runs out, which signals over-constrained parameters.
    """
    x_min, x_max = params.x_range
    y_min, y_max = params.y_range

    for _ in range(params.max_attempts):
        h, v = _draw_barriers(params, rng)
        env = Environment.create(params.x_range, params.y_range, h, v)
        pairs: list[tuple[Point, Point]] = []
        seen: set[tuple[Point, Point]] = set()
        failed = False
        for _ in range(params.n_pairs):
            for _ in range(params.max_attempts):
                s = Point(int(rng.integers(x_min, x_max + 1)), int(rng.integers(y_min, y_max + 1)))
                g = Point(int(rng.integers(x_min, x_max + 1)), int(rng.integers(y_min, y_max + 1)))
                if point_blocked(env, s) or point_blocked(env, g):
                    continue
                if math.hypot(g.x - s.x, g.y - s.y) < params.min_separation:
                    continue
                if (s, g) in seen:
                    continue
                if not astar(env, s, g).found:
                    continue
                pairs.append((s, g))
                seen.add((s, g))
                break
            else:
                failed = True
                break
        if not failed:
            return MapRecord(id=map_id, environment=env, start_goal=tuple(pairs))
    raise GenerationExhaustedError(
        f"could not generate a valid map within {params.max_attempts} attempts; relax parameters"
    )


def generate_dataset(params: GenParams, n_maps: int) -> list[MapRecord]:
    """Generate n_maps independent maps from split seed streams."""
    if n_maps < 1:
        raise ValueError("n_maps must be >= 1")
    seeds = np.random.SeedSequence(params.seed).spawn(n_maps)
    records = []
    for i, ss in enumerate(seeds):
        rng = np.random.Generator(np.random.PCG64(ss))
        try:
            records.append(generate_map(params, rng, map_id=f"map-{i:03d}"))
        except GenerationExhaustedError as exc:
            raise GenerationExhaustedError(f"map {i}: {exc}") from exc
    return records


def dataset_to_json(records: Sequence[MapRecord]) -> str:
    return json.dumps([r.to_json_dict() for r in records], indent=2)


def save_dataset(records: Sequence[MapRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dataset_to_json(records))


def load_dataset(path: str) -> list[MapRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise DatasetSchemaError("$", "top level must be a list of maps")
    return [MapRecord.from_json_dict(m, where=f"maps[{i}]") for i, m in enumerate(data)]
