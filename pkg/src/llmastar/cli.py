"""Command-line benchmark harness.

Subcommands: ``gen`` (dataset generation), ``bench`` (one algorithm against
the per-sample A* baseline), ``scale`` (growth-factor sweep), and ``replay``
(re-run a cached benchmark with zero network calls).  Also the static SVG
renderer for search snapshots.

Exit codes: 0 success, 2 configuration error, 3 provider/cache error,
4 I/O or dataset-schema error, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .dataset import DatasetSchemaError, GenParams, MapRecord, generate_dataset, load_dataset, save_dataset
from .env import Environment, Point, PointLike, path_length, path_valid, scale_environment
from .llm_astar import TargetList, llm_astar_search, sanitize_targets
from .metrics import BenchReport, RunRecord, build_report, growth_factor
from .search import HeuristicKind, SearchResult, astar, weighted_astar
from .waypoints import (
    CacheMissError,
    PromptParseError,
    PromptStyle,
    ProviderConfig,
    ProviderError,
    ResponseCache,
    oracle_waypoints,
    query_waypoints,
    sample_path_waypoints,
)

ALGORITHMS = ("astar", "wastar", "llm_astar", "llm_only")


class ConfigError(ValueError):
    """Bad flag combination, rejected before any work starts."""


@dataclass
class RunConfig:
    """Everything a bench or scale invocation needs."""

    dataset_path: str
    algorithm: str = "astar"
    provider: str = "oracle:3"  # live | cache-only | oracle:<n>
    style: PromptStyle = PromptStyle.FEW_SHOT
    heuristic: HeuristicKind = HeuristicKind.EUCLIDEAN
    scale: int = 1
    w0: float = 2.0
    decay: float = 0.99
    workers: int = 1
    report_json: Optional[str] = None
    report_table: Optional[str] = None
    cache_path: Optional[str] = None
    svg_dir: Optional[str] = None
    svg_count: int = 0
    provider_cfg: Optional[ProviderConfig] = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        kind, _ = parse_provider(self.provider)
        if self.algorithm in ("llm_astar", "llm_only") and kind in ("live", "cache-only"):
            if self.provider_cfg is None:
                raise ConfigError(f"provider {self.provider!r} requires a ProviderConfig")


def parse_provider(selector: str) -> tuple[str, int]:
    """'live' | 'cache-only' | 'oracle:<n>' -> (kind, oracle_n)."""
    if selector == "live":
        return "live", 0
    if selector == "cache-only":
        return "cache-only", 0
    if selector.startswith("oracle:"):
        try:
            n = int(selector.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad oracle waypoint count in {selector!r}")
        if n < 0:
            raise ConfigError("oracle waypoint count must be >= 0")
        return "oracle", n
    raise ConfigError(f"unknown provider {selector!r}")


def iter_samples(records: Sequence[MapRecord]) -> list[tuple[str, Environment, Point, Point]]:
    out = []
    for rec in records:
        for i, (s, g) in enumerate(rec.start_goal):
            out.append((f"{rec.id}#{i}", rec.environment, s, g))
    return out


# ---------------------------------------------------------------------------
# Bench
# ---------------------------------------------------------------------------

def _run_sample(task: tuple) -> tuple:
    """Worker: run the baseline and the selected algorithm on one sample.

    Returns only small values (stats, lengths, flags) so results stay cheap
    to ship back from a process pool.
    """
    (sample_id, env, s, g, algorithm, heuristic, w0, decay, oracle_n, raw_points) = task
    base = astar(env, s, g, heuristic)
    base_len = path_length(base.path) if base.found else None

    if raw_points is None and base.found:
        # Oracle provider: the baseline already computed the optimal path.
        raw_points = sample_path_waypoints(base.path, s, g, oracle_n)

    if algorithm == "astar":
        algo_stats, algo_len, algo_valid = base.stats, base_len, base.found
    elif algorithm == "wastar":
        res = weighted_astar(env, s, g, heuristic, w0=w0, decay=decay)
        algo_stats = res.stats
        algo_valid = res.found and path_valid(env, res.path, s, g)
        algo_len = path_length(res.path) if res.found else None
    elif algorithm == "llm_astar":
        targets = sanitize_targets(env, raw_points or [], s, g)
        res = llm_astar_search(env, s, g, targets, heuristic)
        algo_stats = res.stats
        algo_valid = res.found and path_valid(env, res.path, s, g)
        algo_len = path_length(res.path) if res.found else None
    elif algorithm == "llm_only":
        pts = raw_points or []
        algo_stats = None
        algo_valid = path_valid(env, pts, s, g)
        algo_len = path_length(pts) if algo_valid else None
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")

    return sample_id, base.stats, base_len, base.found, algo_stats, algo_len, algo_valid


def _resolve_raw_points(
    cfg: RunConfig,
    cache: Optional[ResponseCache],
    samples: Sequence[tuple[str, Environment, Point, Point]],
    client=None,
) -> list[Optional[list[Point]]]:
    """Fetch/parse provider waypoints per sample in the parent process.

    Oracle providers return None per sample; workers derive the waypoints
    from the baseline optimal path.  A provider or parse failure yields an
    empty raw list, which downstream degrades to the [start, goal] fallback
    (or an invalid LLM-only path).  Cache misses in cache-only mode abort
    with the offending sample named.
    """
    kind, _ = parse_provider(cfg.provider)
    if kind == "oracle":
        return [None] * len(samples)
    assert cfg.provider_cfg is not None and cache is not None
    out: list[Optional[list[Point]]] = []
    for sample_id, env, s, g in samples:
        try:
            out.append(
                query_waypoints(
                    cfg.provider_cfg, cache, cfg.style, env, s, g,
                    client=client, cache_only=(kind == "cache-only"),
                )
            )
        except CacheMissError as exc:
            raise CacheMissError(f"sample {sample_id}: {exc}") from exc
        except (ProviderError, PromptParseError) as exc:
            print(f"provider failure on {sample_id}: {exc}; falling back", file=sys.stderr)
            out.append([])
    return out


def run_bench(
    records: Sequence[MapRecord],
    cfg: RunConfig,
    cache: Optional[ResponseCache] = None,
    client=None,
) -> tuple[BenchReport, list[RunRecord], list[RunRecord]]:
    """Run the configured algorithm over a dataset; returns (report, runs, baseline)."""
    kind, oracle_n = parse_provider(cfg.provider)
    if kind == "cache-only" and (cache is None or len(cache) == 0):
        raise ConfigError("cache-only provider with a cold cache")

    samples = iter_samples(records)
    if cfg.scale != 1:
        samples = [
            (sid, scale_environment(env, cfg.scale), Point(s.x * cfg.scale, s.y * cfg.scale),
             Point(g.x * cfg.scale, g.y * cfg.scale))
            for sid, env, s, g in samples
        ]
    raw_points = _resolve_raw_points(cfg, cache, samples, client=client)

    tasks = [
        (sid, env, s, g, cfg.algorithm, cfg.heuristic, cfg.w0, cfg.decay, oracle_n, raw)
        for (sid, env, s, g), raw in zip(samples, raw_points)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_run_sample, tasks, chunksize=8))
    else:
        outcomes = [_run_sample(t) for t in tasks]

    baseline: list[RunRecord] = []
    runs: list[RunRecord] = []
    for sample_id, base_stats, base_len, base_found, algo_stats, algo_len, algo_valid in outcomes:
        optimal = base_len if base_found else float("inf")
        baseline.append(
            RunRecord(sample_id, "astar", base_stats, base_len, base_found, optimal)
        )
        runs.append(
            RunRecord(sample_id, cfg.algorithm, algo_stats, algo_len, algo_valid, optimal)
        )
    report = build_report(cfg.algorithm, runs, baseline, scale=cfg.scale)
    return report, runs, baseline


def _emit_svgs(records: Sequence[MapRecord], cfg: RunConfig, cache, client) -> None:
    kind, oracle_n = parse_provider(cfg.provider)
    samples = iter_samples(records)[: cfg.svg_count]
    os.makedirs(cfg.svg_dir, exist_ok=True)
    for sample_id, env, s, g in samples:
        targets = None
        if cfg.algorithm == "llm_astar":
            if kind == "oracle":
                raw = oracle_waypoints(env, s, g, oracle_n)
            else:
                try:
                    raw = query_waypoints(
                        cfg.provider_cfg, cache, cfg.style, env, s, g,
                        client=client, cache_only=(kind == "cache-only"),
                    )
                except (ProviderError, PromptParseError):
                    raw = []
            targets = sanitize_targets(env, raw, s, g)
            result = llm_astar_search(env, s, g, targets, cfg.heuristic)
        elif cfg.algorithm == "wastar":
            result = weighted_astar(env, s, g, cfg.heuristic, w0=cfg.w0, decay=cfg.decay)
        else:
            result = astar(env, s, g, cfg.heuristic)
        name = sample_id.replace("#", "_") + ".svg"
        with open(os.path.join(cfg.svg_dir, name), "w", encoding="utf-8") as fh:
            fh.write(render_svg(env, result, s, g, targets))


def cmd_bench(cfg: RunConfig, client=None) -> BenchReport:
    records = load_dataset(cfg.dataset_path)
    kind, _ = parse_provider(cfg.provider)
    cache = None
    if kind in ("live", "cache-only"):
        cache = ResponseCache.load(cfg.cache_path) if cfg.cache_path else ResponseCache()
        if kind == "cache-only" and len(cache) == 0:
            raise ConfigError("cache-only provider with a cold cache")
    report, _, _ = run_bench(records, cfg, cache=cache, client=client)
    if kind == "live" and cfg.cache_path:
        cache.save()
    if cfg.report_json:
        with open(cfg.report_json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if cfg.report_table:
        with open(cfg.report_table, "w", encoding="utf-8") as fh:
            fh.write(report.to_table() + "\n")
    if cfg.svg_dir and cfg.svg_count > 0:
        _emit_svgs(records, cfg, cache, client)
    print(report.to_table())
    return report


def cmd_replay(cache_path: str, cfg: RunConfig, client=None) -> BenchReport:
    """Re-run a cached benchmark; identical report, zero network calls."""
    kind, _ = parse_provider(cfg.provider)
    if kind != "oracle":
        cfg = replace(cfg, provider="cache-only", cache_path=cache_path)
    return cmd_bench(cfg, client=client)


# ---------------------------------------------------------------------------
# Scalability sweep
# ---------------------------------------------------------------------------

def _scale_query(task: tuple) -> tuple:
    (k, env, s, g, heuristic, oracle_n) = task
    env_k = scale_environment(env, k)
    s_k = Point(s.x * k, s.y * k)
    g_k = Point(g.x * k, g.y * k)
    base = astar(env_k, s_k, g_k, heuristic)
    # Waypoint count grows with the scale so guidance density per unit of
    # path length stays constant across the sweep.
    raw = sample_path_waypoints(base.path, s_k, g_k, oracle_n * k) if base.found else []
    targets = sanitize_targets(env_k, raw, s_k, g_k)
    guided = llm_astar_search(env_k, s_k, g_k, targets, heuristic)
    return (
        k,
        base.stats.expansions, base.stats.peak_storage,
        guided.stats.expansions, guided.stats.peak_storage,
    )


def run_scale(
    records: Sequence[MapRecord],
    scales: Sequence[int],
    *,
    queries_per_scale: int = 10,
    oracle_n: int = 3,
    seed: int = 0,
    heuristic: HeuristicKind = HeuristicKind.EUCLIDEAN,
    workers: int = 1,
) -> dict[str, list[tuple[int, float, float, float]]]:
    """Growth factors for A* and the guided search across scales.

    A fixed seeded set of queries is drawn once from the dataset and rescaled
    per scale, so every scale measures the same underlying problems.  The
    oracle supplies ``oracle_n * scale`` waypoints per query, keeping the
    spacing between consecutive waypoints roughly constant as maps grow.
    """
    scales = sorted(set(int(k) for k in scales))
    if not scales or scales[0] != 1:
        raise ConfigError("scales must include 1")
    samples = iter_samples(records)
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.choice(len(samples), size=min(queries_per_scale, len(samples)), replace=False)
    chosen = [samples[i] for i in idx]

    tasks = [(k, env, s, g, heuristic, oracle_n) for k in scales for (_, env, s, g) in chosen]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_scale_query, tasks))
    else:
        outcomes = [_scale_query(t) for t in tasks]

    per_scale: dict[int, list[tuple]] = {k: [] for k in scales}
    for row in outcomes:
        per_scale[row[0]].append(row[1:])
    astar_series = []
    guided_series = []
    for k in scales:
        rows = per_scale[k]
        astar_series.append((k, float(np.mean([r[0] for r in rows])), float(np.mean([r[1] for r in rows]))))
        guided_series.append((k, float(np.mean([r[2] for r in rows])), float(np.mean([r[3] for r in rows]))))
    return {
        "astar": growth_factor(astar_series),
        "llm_astar": growth_factor(guided_series),
    }


def cmd_scale(cfg: RunConfig, scales: Sequence[int], *, queries_per_scale: int = 10, seed: int = 0) -> dict:
    records = load_dataset(cfg.dataset_path)
    kind, oracle_n = parse_provider(cfg.provider)
    if kind != "oracle":
        raise ConfigError("the scale sweep runs offline and requires an oracle provider")
    result = run_scale(
        records, scales,
        queries_per_scale=queries_per_scale,
        oracle_n=oracle_n,
        seed=seed,
        heuristic=cfg.heuristic,
        workers=cfg.workers,
    )
    if cfg.report_json:
        payload = {
            algo: [
                {"scale": k, "ops_growth": og, "storage_growth": sg, "combined": c}
                for k, og, sg, c in rows
            ]
            for algo, rows in result.items()
        }
        with open(cfg.report_json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    for algo, rows in result.items():
        print(f"{algo}:")
        for k, og, sg, c in rows:
            print(f"  scale {k:2d}  ops x{og:8.2f}  storage x{sg:8.2f}  combined x{c:8.2f}")
    return result


# ---------------------------------------------------------------------------
# Dataset generation
# ---------------------------------------------------------------------------

def cmd_gen(params: GenParams, n_maps: int, out_path: str) -> list[MapRecord]:
    records = generate_dataset(params, n_maps)
    save_dataset(records, out_path)
    n_samples = sum(len(r.start_goal) for r in records)
    print(f"wrote {len(records)} maps / {n_samples} samples to {out_path}")
    return records


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

_SVG_UNIT = 10
_SVG_MARGIN = 10


def render_svg(
    env: Environment,
    result: SearchResult,
    s0: PointLike,
    sg: PointLike,
    targets: Optional[TargetList] = None,
) -> str:
    """One SVG snapshot: barriers, visited states, path, endpoints, waypoints.

    Gray squares mark CLOSED states, black lines barriers, the red polyline
    the path, blue/green dots start/goal, and stars any guidance waypoints.
    Coordinates are y-up with one lattice unit = 10 SVG units.
    """
    x_min, x_max = env.x_range
    y_min, y_max = env.y_range

    def sx(x: float) -> float:
        return _SVG_MARGIN + (x - x_min) * _SVG_UNIT

    def sy(y: float) -> float:
        return _SVG_MARGIN + (y_max - y) * _SVG_UNIT

    width = (x_max - x_min) * _SVG_UNIT + 2 * _SVG_MARGIN
    height = (y_max - y_min) * _SVG_UNIT + 2 * _SVG_MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    half = _SVG_UNIT / 2
    for p in result.closed_states:
        parts.append(
            f'<rect x="{sx(p[0]) - half}" y="{sy(p[1]) - half}" '
            f'width="{_SVG_UNIT}" height="{_SVG_UNIT}" fill="#cccccc"/>'
        )
    for e1, e2 in env.barrier_segments():
        parts.append(
            f'<line x1="{sx(e1.x)}" y1="{sy(e1.y)}" x2="{sx(e2.x)}" y2="{sy(e2.y)}" '
            'stroke="black" stroke-width="3"/>'
        )
    if result.path:
        pts = " ".join(f"{sx(p[0])},{sy(p[1])}" for p in result.path)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="red" stroke-width="2"/>')
    if targets is not None:
        for p in targets.waypoints[1:-1]:
            parts.append(_star(sx(p[0]), sy(p[1])))
    parts.append(f'<circle cx="{sx(s0[0])}" cy="{sy(s0[1])}" r="5" fill="blue"/>')
    parts.append(f'<circle cx="{sx(sg[0])}" cy="{sy(sg[1])}" r="5" fill="green"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def _star(cx: float, cy: float, r_out: float = 7.0, r_in: float = 3.0) -> str:
    import math

    pts = []
    for i in range(10):
        r = r_out if i % 2 == 0 else r_in
        a = math.pi / 2 + i * math.pi / 5
        pts.append(f"{cx + r * math.cos(a):.2f},{cy - r * math.sin(a):.2f}")
    return f'<polygon points="{" ".join(pts)}" fill="gold" stroke="black" stroke-width="0.5"/>'


# ---------------------------------------------------------------------------
# Argument parsing / entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llmastar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random benchmark dataset")
    p_gen.add_argument("--maps", type=int, default=100)
    p_gen.add_argument("--pairs", type=int, default=10)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--width", type=int, default=50)
    p_gen.add_argument("--height", type=int, default=30)
    p_gen.add_argument("--out", default="dataset.json")

    def add_run_flags(p):
        p.add_argument("--dataset", required=True)
        p.add_argument("--heuristic", choices=[k.value for k in HeuristicKind], default="euclidean")
        p.add_argument("--provider", default="oracle:3", help="live | cache-only | oracle:<n>")
        p.add_argument("--style", choices=[s.value for s in PromptStyle], default="few_shot")
        p.add_argument("--base-url", default="https://api.openai.com/v1")
        p.add_argument("--model", default="gpt-3.5-turbo")
        p.add_argument("--api-key-env", default="LLM_API_KEY")
        p.add_argument("--temperature", type=float, default=0.0)
        p.add_argument("--max-tokens", type=int, default=512)
        p.add_argument("--cache", default=None, help="response cache JSON path")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--report-json", default=None)
        p.add_argument("--report-table", default=None)

    p_bench = sub.add_parser("bench", help="benchmark one algorithm against the A* baseline")
    add_run_flags(p_bench)
    p_bench.add_argument("--algo", choices=ALGORITHMS, default="astar")
    p_bench.add_argument("--w0", type=float, default=2.0)
    p_bench.add_argument("--decay", type=float, default=0.99)
    p_bench.add_argument("--scale", type=int, default=1)
    p_bench.add_argument("--svg-dir", default=None)
    p_bench.add_argument("--svg-count", type=int, default=0)

    p_scale = sub.add_parser("scale", help="growth-factor sweep across environment scales")
    add_run_flags(p_scale)
    p_scale.add_argument("--scales", type=int, nargs="+", default=list(range(1, 11)))
    p_scale.add_argument("--queries", type=int, default=10)
    p_scale.add_argument("--seed", type=int, default=0)

    p_replay = sub.add_parser("replay", help="replay a cached benchmark offline")
    add_run_flags(p_replay)
    p_replay.add_argument("--algo", choices=ALGORITHMS, default="llm_astar")
    p_replay.add_argument("--w0", type=float, default=2.0)
    p_replay.add_argument("--decay", type=float, default=0.99)
    p_replay.add_argument("--scale", type=int, default=1)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    provider_cfg = ProviderConfig(
        base_url=args.base_url,
        model_name=args.model,
        api_key_env=args.api_key_env,
        temperature=args.temperature,
        max_tokens=args.max_tokens,
    )
    return RunConfig(
        dataset_path=args.dataset,
        algorithm=getattr(args, "algo", "astar"),
        provider=args.provider,
        style=PromptStyle(args.style),
        heuristic=HeuristicKind(args.heuristic),
        scale=getattr(args, "scale", 1),
        w0=getattr(args, "w0", 2.0),
        decay=getattr(args, "decay", 0.99),
        workers=args.workers,
        report_json=args.report_json,
        report_table=args.report_table,
        cache_path=args.cache,
        svg_dir=getattr(args, "svg_dir", None),
        svg_count=getattr(args, "svg_count", 0),
        provider_cfg=provider_cfg,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            params = GenParams(
                x_range=(0, args.width),
                y_range=(0, args.height),
                n_pairs=args.pairs,
                seed=args.seed,
            )
            cmd_gen(params, args.maps, args.out)
        elif args.command == "bench":
            cmd_bench(_config_from_args(args))
        elif args.command == "scale":
            cfg = _config_from_args(args)
            cmd_scale(cfg, args.scales, queries_per_scale=args.queries, seed=args.seed)
        elif args.command == "replay":
            cfg = _config_from_args(args)
            if parse_provider(args.provider)[0] != "oracle" and not args.cache:
                raise ConfigError("replay requires --cache")
            cmd_replay(args.cache, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ProviderError, CacheMissError) as exc:
        print(f"provider error: {exc}", file=sys.stderr)
        return 3
    except (DatasetSchemaError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
