"""Compare A*, dynamic weighted A*, and waypoint-guided search on one query.

Counters follow the benchmark's definitions: operations are states popped
from OPEN, storage is the peak of |OPEN| + |CLOSED|.  Writes one SVG per
algorithm next to this script.
"""

from pathlib import Path

from llmastar import Environment, astar, llm_astar_search, sanitize_targets, weighted_astar
from llmastar.cli import render_svg

env = Environment.create(
    [0, 50], [0, 30],
    horizontal_barriers=[[10, 0, 25], [15, 30, 50]],
    vertical_barriers=[[25, 10, 22]],
)
s0, sg = (5, 5), (20, 20)
out_dir = Path(__file__).parent

plain = astar(env, s0, sg)
weighted = weighted_astar(env, s0, sg, w0=2.0, decay=0.99)
targets = sanitize_targets(env, [(5, 5), (26, 9), (25, 23), (20, 20)], s0, sg)
guided = llm_astar_search(env, s0, sg, targets)

print(f"{'algorithm':<18}{'operations':>12}{'storage':>10}{'recomputes':>12}{'cost':>10}")
for name, result in [("astar", plain), ("weighted_astar", weighted), ("llm_astar", guided)]:
    st = result.stats
    print(f"{name:<18}{st.expansions:>12}{st.peak_storage:>10}{st.recomputes:>12}{result.cost:>10.3f}")

print("\nguided vs plain operations:", f"{guided.stats.expansions / plain.stats.expansions:.1%}")

for name, result, tl in [("astar", plain, None), ("guided", guided, targets)]:
    path = out_dir / f"demo_{name}.svg"
    path.write_text(render_svg(env, result, s0, sg, tl), encoding="utf-8")
    print("wrote", path)
