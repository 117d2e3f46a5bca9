"""Benchmark metrics: geometric-mean ratios and report assembly.

Aggregates per-sample resource ratios (guided or weighted search over the A*
baseline) with a log-domain geometric mean, plus relative path length, valid
path ratio, and growth factors for the scalability sweep.  Invalid runs
carry no meaningful counters, so they are excluded from the ratio metrics
and surface only through the valid-path ratio.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .search import SearchStats


@dataclass(frozen=True)
class RunRecord:
    """One algorithm run on one sample, paired with the sample's optimum."""

    sample_id: str
    algorithm: str
    stats: Optional[SearchStats]
    path_length: Optional[float]
    valid: bool
    optimal_length: float

    def __post_init__(self) -> None:
        if self.valid and self.path_length is None:
            raise ValueError(f"{self.sample_id}: valid run must have a path length")
        # Lattice searches can never beat the lattice optimum; LLM-only paths
        # (stats is None) may cut corners off-lattice, so they are exempt.
        if self.valid and self.stats is not None and self.path_length < self.optimal_length - 1e-9:
            raise ValueError(
                f"{self.sample_id}: path length {self.path_length} below optimum {self.optimal_length}"
            )


def geometric_mean(ratios: Sequence[float]) -> float:
    """exp(mean(log r)); log-domain so 1000-sample products cannot overflow."""
    if not ratios:
        raise ValueError("geometric_mean of an empty list")
    logs = []
    for r in ratios:
        if r <= 0:
            raise ValueError(f"geometric_mean requires positive ratios, got {r}")
        logs.append(math.log(r))
    return math.exp(math.fsum(logs) / len(logs))


def efficiency_ratios(
    runs: Sequence[RunRecord], baseline: Sequence[RunRecord]
) -> tuple[float, float]:
    """Geometric-mean percentage of operations and storage versus baseline."""
    if len(runs) != len(baseline):
        raise ValueError(f"misaligned samples: {len(runs)} runs vs {len(baseline)} baseline")
    op_ratios = []
    st_ratios = []
    for run, base in zip(runs, baseline):
        if run.sample_id != base.sample_id:
            raise ValueError(f"misaligned samples: {run.sample_id} vs {base.sample_id}")
        if base.stats is None:
            raise ValueError(f"{base.sample_id}: baseline run has no counters")
        if not run.valid or run.stats is None:
            continue
        if base.stats.expansions == 0 or base.stats.peak_storage == 0:
            raise ValueError(f"{base.sample_id}: baseline counters are zero")
        op_ratios.append(run.stats.expansions / base.stats.expansions)
        st_ratios.append(run.stats.peak_storage / base.stats.peak_storage)
    if not op_ratios:
        raise ValueError("no valid runs with counters to compare")
    return 100.0 * geometric_mean(op_ratios), 100.0 * geometric_mean(st_ratios)


def relative_path_length(runs: Sequence[RunRecord]) -> float:
    """Geometric-mean percentage of path length versus the per-sample optimum."""
    ratios = []
    for run in runs:
        if not run.valid:
            continue
        if run.optimal_length <= 0:
            raise ValueError(f"{run.sample_id}: optimal length must be positive")
        assert run.path_length is not None
        ratios.append(run.path_length / run.optimal_length)
    if not ratios:
        raise ValueError("no valid runs to compare")
    return 100.0 * geometric_mean(ratios)


def valid_path_ratio(runs: Sequence[RunRecord]) -> float:
    """Arithmetic percentage of runs that produced a valid path."""
    if not runs:
        raise ValueError("valid_path_ratio of an empty list")
    return 100.0 * sum(1 for r in runs if r.valid) / len(runs)


def growth_factor(
    series: Sequence[tuple[int, float, float]]
) -> list[tuple[int, float, float, float]]:
    """Per-scale growth relative to scale 1.

    Input rows are (scale, mean_ops, mean_storage) sorted by scale with scale
    1 present; output rows append the combined (arithmetic mean) growth.
    """
    if not series or series[0][0] != 1:
        raise ValueError("growth series must start at scale 1")
    base_ops, base_storage = series[0][1], series[0][2]
    if base_ops <= 0 or base_storage <= 0:
        raise ValueError("scale-1 means must be positive")
    out = []
    for scale, mean_ops, mean_storage in series:
        og = mean_ops / base_ops
        sg = mean_storage / base_storage
        out.append((scale, og, sg, (og + sg) / 2.0))
    return out


@dataclass(frozen=True)
class BenchReport:
    """Table-row aggregate for one algorithm against the A* baseline."""

    algorithm: str
    samples: int
    scale: int
    operation_ratio: Optional[float]
    storage_ratio: Optional[float]
    relative_path_length: Optional[float]
    valid_path_ratio: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "algorithm": self.algorithm,
                "samples": self.samples,
                "scale": self.scale,
                "operation_ratio": self.operation_ratio,
                "storage_ratio": self.storage_ratio,
                "relative_path_length": self.relative_path_length,
                "valid_path_ratio": self.valid_path_ratio,
            },
            indent=2,
            sort_keys=True,
        )

    def to_table(self) -> str:
        headers = (
            "Algorithm",
            "Operation Ratio (%)",
            "Storage Ratio (%)",
            "Relative Path Length (%)",
            "Valid Path Ratio (%)",
        )
        def cell(v: Optional[float]) -> str:
            return "-" if v is None else f"{v:.2f}"
        row = (
            self.algorithm,
            cell(self.operation_ratio),
            cell(self.storage_ratio),
            cell(self.relative_path_length),
            cell(self.valid_path_ratio),
        )
        widths = [max(len(h), len(r)) for h, r in zip(headers, row)]
        line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
        vals = "  ".join(r.ljust(w) for r, w in zip(row, widths))
        return line + "\n" + vals


def build_report(
    algorithm: str,
    runs: Sequence[RunRecord],
    baseline: Sequence[RunRecord],
    scale: int = 1,
) -> BenchReport:
    """Assemble the Table-1-shaped row for one algorithm."""
    has_counters = any(r.stats is not None for r in runs)
    op = st = None
    if has_counters:
        op, st = efficiency_ratios(runs, baseline)
    rpl = None
    if any(r.valid for r in runs):
        rpl = relative_path_length(runs)
    return BenchReport(
        algorithm=algorithm,
        samples=len(runs),
        scale=scale,
        operation_ratio=op,
        storage_ratio=st,
        relative_path_length=rpl,
        valid_path_ratio=valid_path_ratio(list(runs)),
    )
