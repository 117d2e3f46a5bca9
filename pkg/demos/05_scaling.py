"""Growth factors as the environment scales 1x to 6x.

The same seeded queries are rescaled per step; the oracle keeps waypoint
spacing constant.  A* grows super-linearly with scale while the guided
search stays near-linear, which is the whole point of external guidance.
"""

from llmastar import GenParams, generate_dataset
from llmastar.cli import run_scale

params = GenParams(
    n_h_barriers=(2, 4), n_v_barriers=(1, 3),
    span_fraction=(0.15, 0.4), n_pairs=5, seed=10,
)
records = generate_dataset(params, 20)
result = run_scale(records, [1, 2, 3, 4, 5, 6], queries_per_scale=8, oracle_n=3, seed=0)

print(f"{'scale':>5}  {'A* ops':>10}  {'guided ops':>10}  {'A* storage':>10}  {'guided storage':>14}")
for (k, a_ops, a_st, _), (_, g_ops, g_st, _) in zip(result["astar"], result["llm_astar"]):
    print(f"{k:>5}  {a_ops:>9.1f}x  {g_ops:>9.1f}x  {a_st:>9.1f}x  {g_st:>13.1f}x")
