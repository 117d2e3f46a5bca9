"""The waypoint pipeline end to end, without a network.

Render a prompt, parse a canned model response, sanitize it into a target
list, and run the guided search.  Swapping the canned text for a live
chat-completion call is what query_waypoints does.
"""

from llmastar import (
    Environment,
    PromptStyle,
    astar,
    llm_astar_search,
    oracle_waypoints,
    parse_path,
    render_prompt,
    sanitize_targets,
)

env = Environment.create(
    [0, 50], [0, 30],
    horizontal_barriers=[[10, 0, 25], [15, 30, 50]],
    vertical_barriers=[[25, 10, 22]],
)
s0, sg = (5, 5), (20, 20)

prompt = render_prompt(PromptStyle.COT, env, s0, sg)
print("=== chain-of-thought prompt (tail) ===")
print("\n".join(prompt.splitlines()[-6:]))

response = "The route hugs the barrier corners.\nGenerated Path: [[5, 5], [26.2, 8.7], [25, 23], [20, 20]]"
raw = parse_path(response)
print("\nparsed waypoints (real values round half away from zero):", [tuple(p) for p in raw])

targets = sanitize_targets(env, raw, s0, sg)
print("sanitized target list:", [tuple(p) for p in targets.waypoints], "cursor:", targets.cursor)

guided = llm_astar_search(env, s0, sg, targets)
plain = astar(env, s0, sg)
print(f"\nguided: {guided.stats.expansions} operations, cost {guided.cost:.3f}")
print(f"astar:  {plain.stats.expansions} operations, cost {plain.cost:.3f}")

print("\nno model handy? the oracle provider samples the optimal path:")
print([tuple(p) for p in oracle_waypoints(env, s0, sg, 3)])
