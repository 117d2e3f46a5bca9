"""Generate a small dataset and benchmark the guided search against A*.

The report mirrors the efficiency table: geometric-mean operation and
storage ratios versus the per-sample A* baseline, relative path length
versus the optimum, and the valid-path ratio.
"""

from llmastar import GenParams, generate_dataset
from llmastar.cli import RunConfig, run_bench

params = GenParams(n_pairs=5, seed=314)
records = generate_dataset(params, 20)
print(f"dataset: {len(records)} maps x {len(records[0].start_goal)} pairs "
      f"on {params.x_range[1]}x{params.y_range[1]} maps")

for algorithm, provider in [("astar", "oracle:0"), ("wastar", "oracle:0"), ("llm_astar", "oracle:3")]:
    cfg = RunConfig(dataset_path="<in-memory>", algorithm=algorithm, provider=provider)
    report, _, _ = run_bench(records, cfg)
    print()
    print(report.to_table())
