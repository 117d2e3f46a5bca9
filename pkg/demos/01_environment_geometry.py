"""Build a map and poke at its exact collision geometry.

The worked-example map used throughout the demos: a 50x30 box with two
horizontal barriers and one vertical barrier.
"""

from llmastar import Environment, move_valid, neighbors, path_length, path_valid, point_blocked

env = Environment.create(
    [0, 50], [0, 30],
    horizontal_barriers=[[10, 0, 25], [15, 30, 50]],
    vertical_barriers=[[25, 10, 22]],
)
print("map:", env.to_json_dict())

print("\npoint checks:")
for p in [(5, 5), (5, 10), (26, 10), (51, 5)]:
    print(f"  point_blocked{p} = {point_blocked(env, p)}")

print("\nmove checks (exact segment tests, no epsilons):")
for a, b in [((5, 9), (5, 11)), ((30, 9), (30, 11)), ((5, 5), (26, 9))]:
    print(f"  move_valid{a}->{b} = {move_valid(env, a, b)}")

print("\n8-connected neighbors of (5, 9) with a barrier overhead at y=10:")
for n, cost in neighbors(env, (5, 9)):
    print(f"  {tuple(n)} step={cost:.4f}")

demo_path = [(5, 5), (26, 9), (25, 23), (20, 20)]
print("\nthe demonstration path snakes around both barriers:")
print("  path_valid =", path_valid(env, demo_path, (5, 5), (20, 20)))
print(f"  path_length = {path_length(demo_path):.4f}")
print("the straight shot does not:")
print("  path_valid =", path_valid(env, [(5, 5), (20, 20)], (5, 5), (20, 20)))
