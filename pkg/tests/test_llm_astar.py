import pytest

from llmastar.dataset import GenParams, generate_dataset
from llmastar.env import Environment, Point, path_valid
from llmastar.llm_astar import TargetList, current_f, llm_astar_search, sanitize_targets
from llmastar.search import astar, weighted_astar
from llmastar.waypoints import oracle_waypoints


@pytest.fixture(scope="module")
def random_maps():
    params = GenParams(
        x_range=(0, 30), y_range=(0, 20),
        n_h_barriers=(2, 3), n_v_barriers=(1, 2),
        n_pairs=2, min_separation=8.0, seed=77,
    )
    return generate_dataset(params, 15)


# ---------------------------------------------------------------------------
# TargetList / sanitize_targets
# ---------------------------------------------------------------------------

def test_sanitize_empty_raw_repairs_endpoints(demo_env, demo_query):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, [], s0, sg)
    assert tl.waypoints == (s0, sg)
    assert tl.cursor == 1


def test_sanitize_drops_blocked_point(demo_env, demo_query):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, [(5, 10)], s0, sg)  # on the y=10 barrier
    assert tl.waypoints == (s0, sg)


def test_sanitize_keeps_demo_waypoints(demo_env, demo_query, demo_path):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, demo_path, s0, sg)
    assert tl.waypoints == tuple(Point(*p) for p in demo_path)
    assert tl.current == (26, 9)


def test_sanitize_clamps_out_of_bounds(demo_env, demo_query):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, [(60, 5)], s0, sg)
    assert tl.waypoints == (s0, (50, 5), sg)


def test_sanitize_collapses_consecutive_duplicates(demo_env, demo_query):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, [(7, 7), (7, 7), (8, 8)], s0, sg)
    assert tl.waypoints == (s0, (7, 7), (8, 8), sg)


def test_sanitize_prepends_and_appends_endpoints(demo_env, demo_query):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, [(7, 7)], s0, sg)
    assert tl.waypoints[0] == s0 and tl.waypoints[-1] == sg


def test_sanitize_degenerate_start_equals_goal(demo_env):
    tl = sanitize_targets(demo_env, [], (5, 5), (5, 5))
    assert tl.waypoints == ((5, 5),)
    assert tl.cursor == 0


def test_target_list_invariants():
    with pytest.raises(ValueError):
        TargetList(waypoints=())
    with pytest.raises(ValueError):
        TargetList(waypoints=(Point(0, 0), Point(0, 0)))
    with pytest.raises(ValueError):
        TargetList(waypoints=(Point(0, 0), Point(1, 1)), cursor=5)


def test_search_validates_target_list(demo_env, demo_query):
    s0, sg = demo_query
    with pytest.raises(ValueError):
        llm_astar_search(demo_env, s0, sg, TargetList(waypoints=(Point(1, 1), Point(*sg))))
    with pytest.raises(ValueError):
        llm_astar_search(demo_env, s0, sg, TargetList(waypoints=(Point(*s0), Point(1, 1))))


# ---------------------------------------------------------------------------
# current_f
# ---------------------------------------------------------------------------

def test_current_f_values():
    assert current_f(0.0, 0.0, 0.0) == 0.0
    assert current_f(3.0, 4.0, 5.0) == 12.0


def test_current_f_at_goal_target_doubles_h():
    g, h = 7.25, 3.5
    assert current_f(g, h, h) == g + 2.0 * h


def test_current_f_rejects_bad_inputs():
    with pytest.raises(ValueError):
        current_f(float("inf"), 0.0, 0.0)
    with pytest.raises(ValueError):
        current_f(0.0, float("nan"), 0.0)
    with pytest.raises(ValueError):
        current_f(0.0, 0.0, -1.0)


# ---------------------------------------------------------------------------
# llm_astar_search
# ---------------------------------------------------------------------------

def test_degenerate_equivalence_with_weighted(random_maps):
    # With targets [s0, sg] the priority is g + 2h bitwise, so the expansion
    # sequence must match weighted A* at w0=2, decay=1 exactly.
    for rec in random_maps:
        for s, g in rec.start_goal:
            tl = sanitize_targets(rec.environment, [], s, g)
            guided = llm_astar_search(rec.environment, s, g, tl)
            weighted = weighted_astar(rec.environment, s, g, w0=2.0, decay=1.0)
            assert guided.expanded == weighted.expanded
            assert guided.stats == weighted.stats
            assert guided.path == weighted.path


def test_degenerate_start_equals_goal(demo_env):
    tl = sanitize_targets(demo_env, [], (5, 5), (5, 5))
    result = llm_astar_search(demo_env, (5, 5), (5, 5), tl)
    assert result.path == [(5, 5)]
    assert result.stats.expansions == 1
    assert result.stats.recomputes == 0


def test_guided_beats_astar_on_demo_query(demo_env, demo_query, demo_path):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, demo_path, s0, sg)
    guided = llm_astar_search(demo_env, s0, sg, tl)
    plain = astar(demo_env, s0, sg)
    assert guided.found
    assert path_valid(demo_env, guided.path, s0, sg)
    assert guided.stats.expansions < plain.stats.expansions


def test_completeness_equivalence(random_maps):
    for rec in random_maps:
        for s, g in rec.start_goal:
            tl = sanitize_targets(rec.environment, oracle_waypoints(rec.environment, s, g, 2), s, g)
            guided = llm_astar_search(rec.environment, s, g, tl)
            assert guided.found == astar(rec.environment, s, g).found


def test_completeness_equivalence_no_path():
    env = Environment.create(
        [0, 10], [0, 10],
        horizontal_barriers=[[2, 0, 4]],
        vertical_barriers=[[4, 0, 2]],
    )
    tl = sanitize_targets(env, [(6, 6)], (0, 0), (8, 8))
    guided = llm_astar_search(env, (0, 0), (8, 8), tl)
    assert not guided.found
    assert not astar(env, (0, 0), (8, 8)).found


def test_recompute_consistency_debug_mode(demo_env, demo_query, demo_path):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, demo_path, s0, sg)
    result = llm_astar_search(demo_env, s0, sg, tl, debug_checks=True)
    assert result.found
    assert result.stats.recomputes > 0


def test_recompute_bound(random_maps):
    for rec in random_maps:
        for s, g in rec.start_goal:
            raw = oracle_waypoints(rec.environment, s, g, 4)
            tl = sanitize_targets(rec.environment, raw, s, g)
            result = llm_astar_search(rec.environment, s, g, tl)
            bound = (len(tl.waypoints) - 1) * result.stats.peak_storage
            assert result.stats.recomputes <= bound


def test_guided_cost_never_below_optimal(random_maps):
    for rec in random_maps:
        for s, g in rec.start_goal:
            tl = sanitize_targets(rec.environment, oracle_waypoints(rec.environment, s, g, 3), s, g)
            guided = llm_astar_search(rec.environment, s, g, tl)
            optimal = astar(rec.environment, s, g)
            assert guided.cost >= optimal.cost - 1e-9
            assert path_valid(rec.environment, guided.path, s, g)


def test_waypoint_reached_after_expansion_still_advances():
    # The second waypoint sits right next to the start, so it is expanded
    # (closed) long before the first waypoint is matched; the advance check
    # runs before the CLOSED skip, so the cursor still walks the whole list
    # and triggers a rebuild for each advance.
    env = Environment.create([0, 12], [0, 12])
    s0, sg = Point(5, 5), Point(11, 11)
    tl = sanitize_targets(env, [(9, 5), (6, 5), (11, 11)], s0, sg)
    assert tl.waypoints == (s0, (9, 5), (6, 5), sg)
    result = llm_astar_search(env, s0, sg, tl, debug_checks=True)
    assert result.found
    assert result.stats.recomputes > 0
    closed = {tuple(p) for p in result.closed_states}
    assert (6, 5) in closed


def test_determinism(demo_env, demo_query, demo_path):
    s0, sg = demo_query
    tl = sanitize_targets(demo_env, demo_path, s0, sg)
    a = llm_astar_search(demo_env, s0, sg, tl)
    b = llm_astar_search(demo_env, s0, sg, tl)
    assert a.expanded == b.expanded
    assert a.stats == b.stats
