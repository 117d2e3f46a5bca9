import http.server
import json
import threading

import httpx
import numpy as np
import pytest

from llmastar.env import Environment, path_valid, point_blocked
from llmastar.llm_astar import sanitize_targets
from llmastar.waypoints import (
    DEMONSTRATIONS,
    CacheMissError,
    MalformedPathError,
    MarkerNotFoundError,
    PromptStyle,
    ProviderConfig,
    ProviderError,
    ResponseCache,
    llm_only_path,
    oracle_waypoints,
    parse_path,
    query_waypoints,
    render_prompt,
    sample_path_waypoints,
)
from conftest import GOLDEN_DIR

DEMO_RESPONSE = "Generated Path: [[5, 5], [26, 9], [25, 23], [20, 20]]"


def completion_json(text: str) -> dict:
    return {"choices": [{"message": {"role": "assistant", "content": text}}]}


@pytest.fixture
def provider_cfg():
    return ProviderConfig(base_url="http://llm.test/v1", model_name="test-model", max_retries=0)


class CountingTransport(httpx.MockTransport):
    """Mock transport that records every request it serves."""

    def __init__(self, handler):
        self.calls = 0
        self.requests = []

        def wrapped(request):
            self.calls += 1
            self.requests.append(request)
            return handler(request)

        super().__init__(wrapped)


def make_client(text: str = DEMO_RESPONSE, status: int = 200):
    transport = CountingTransport(
        lambda request: httpx.Response(status, json=completion_json(text))
    )
    return httpx.Client(transport=transport), transport


# ---------------------------------------------------------------------------
# Prompt rendering
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("style", list(PromptStyle))
def test_render_prompt_matches_golden(style, demo_env, demo_query):
    s0, sg = demo_query
    rendered = render_prompt(style, demo_env, s0, sg)
    golden = (GOLDEN_DIR / f"{style.value}.txt").read_text(encoding="utf-8")
    assert rendered == golden


@pytest.mark.parametrize("style", list(PromptStyle))
def test_render_prompt_contains_demo_line(style, demo_env, demo_query):
    rendered = render_prompt(style, demo_env, *demo_query)
    assert "Generated Path: [[5, 5], [26, 9], [25, 23], [20, 20]]" in rendered


def test_cot_prompt_contains_thought(demo_env, demo_query):
    rendered = render_prompt(PromptStyle.COT, demo_env, *demo_query)
    assert "Thought: Identify a path from [5, 5] to [20, 20]" in rendered


def test_repe_prompt_contains_iterations(demo_env, demo_query):
    rendered = render_prompt(PromptStyle.REPE, demo_env, *demo_query)
    assert "- First Iteration on [5, 5]" in rendered
    assert "Evaluation:" in rendered


def test_render_prompt_deterministic(demo_env, demo_query):
    a = render_prompt(PromptStyle.FEW_SHOT, demo_env, *demo_query)
    b = render_prompt(PromptStyle.FEW_SHOT, demo_env, *demo_query)
    assert a == b


def test_prompt_shot_counts(demo_env, demo_query):
    for style, shots in ((PromptStyle.FEW_SHOT, 5), (PromptStyle.COT, 3), (PromptStyle.REPE, 3)):
        assert style.shots == shots
        rendered = render_prompt(style, demo_env, *demo_query)
        # Every demonstration plus the final query block states a start point.
        assert rendered.count("Start Point:") == shots + 1


def test_demonstration_bank_paths_are_valid():
    for demo in DEMONSTRATIONS:
        env = demo.environment()
        assert not point_blocked(env, demo.start)
        assert not point_blocked(env, demo.goal)
        assert path_valid(env, demo.path, demo.start, demo.goal)


def test_demonstration_bank_reasoning_present_for_cot_and_repe():
    for demo in DEMONSTRATIONS[:3]:
        assert demo.thought
        assert demo.iterations


# ---------------------------------------------------------------------------
# parse_path
# ---------------------------------------------------------------------------

def test_parse_demo_response():
    assert parse_path(f"some preamble...\n{DEMO_RESPONSE}") == [
        (5, 5), (26, 9), (25, 23), (20, 20),
    ]


def test_parse_uses_last_marker():
    text = "Generated Path: [[1, 1]]\nrethinking...\nGenerated Path: [[2, 2], [3, 3]]"
    assert parse_path(text) == [(2, 2), (3, 3)]


def test_parse_missing_marker():
    with pytest.raises(MarkerNotFoundError):
        parse_path("no path here")


def test_parse_malformed_lists():
    with pytest.raises(MalformedPathError):
        parse_path("Generated Path: [[1, 2], [3, 4]")  # unbalanced
    with pytest.raises(MalformedPathError):
        parse_path("Generated Path: [[a, b]]")  # non-numeric
    with pytest.raises(MalformedPathError):
        parse_path("Generated Path: [[1, 2, 3]]")  # not pairs
    with pytest.raises(MalformedPathError):
        parse_path("Generated Path: nothing")


def test_parse_rounding_half_away_from_zero():
    assert parse_path("Generated Path: [[1.4, 2.6]]") == [(1, 3)]
    assert parse_path("Generated Path: [[2.5, -2.5]]") == [(3, -3)]
    assert parse_path("Generated Path: [[-1.4, -2.6]]") == [(-1, -3)]


def test_parse_whitespace_tolerance():
    text = "Generated Path:   [ [5 ,5],\n  [7, 9] ]"
    assert parse_path(text) == [(5, 5), (7, 9)]


def test_parse_empty_list():
    assert parse_path("Generated Path: []") == []


def test_parse_inverts_rendered_format():
    rng = np.random.default_rng(13)
    for _ in range(200):
        pts = [(int(x), int(y)) for x, y in rng.integers(-100, 101, size=(rng.integers(1, 12), 2))]
        rendered = "Generated Path: " + repr([[x, y] for x, y in pts])
        assert parse_path(rendered) == pts


# ---------------------------------------------------------------------------
# ResponseCache
# ---------------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    cache = ResponseCache()
    key = ResponseCache.key("prompt", "model", 0.0)
    cache.put(key, "hello")
    assert cache.get(key) == "hello"
    path = tmp_path / "cache.json"
    cache.save(str(path))
    loaded = ResponseCache.load(str(path))
    assert loaded.entries == cache.entries


def test_cache_key_depends_on_all_parts():
    k = ResponseCache.key("p", "m", 0.0)
    assert k != ResponseCache.key("q", "m", 0.0)
    assert k != ResponseCache.key("p", "n", 0.0)
    assert k != ResponseCache.key("p", "m", 0.5)
    assert k == ResponseCache.key("p", "m", 0.0)


def test_cache_load_missing_file(tmp_path):
    cache = ResponseCache.load(str(tmp_path / "absent.json"))
    assert len(cache) == 0


# ---------------------------------------------------------------------------
# query_waypoints / llm_only_path
# ---------------------------------------------------------------------------

def test_query_fetches_and_caches(provider_cfg, demo_env, demo_query):
    client, transport = make_client()
    cache = ResponseCache()
    points = query_waypoints(provider_cfg, cache, PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert points == [(5, 5), (26, 9), (25, 23), (20, 20)]
    assert transport.calls == 1
    assert len(cache) == 1
    # Second call is served from the cache: zero new traffic.
    again = query_waypoints(provider_cfg, cache, PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert again == points
    assert transport.calls == 1


def test_query_request_shape(provider_cfg, demo_env, demo_query, monkeypatch):
    monkeypatch.setenv(provider_cfg.api_key_env, "sekrit")
    client, transport = make_client()
    query_waypoints(provider_cfg, ResponseCache(), PromptStyle.COT, demo_env, *demo_query, client=client)
    request = transport.requests[0]
    assert request.url.path.endswith("/chat/completions")
    assert request.headers["authorization"] == "Bearer sekrit"
    body = json.loads(request.content)
    assert body["model"] == "test-model"
    assert body["temperature"] == 0.0
    assert body["messages"][0]["role"] == "user"
    assert "Generated Path:" in body["messages"][0]["content"]


def test_query_cache_only_miss(provider_cfg, demo_env, demo_query):
    with pytest.raises(CacheMissError):
        query_waypoints(
            provider_cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query,
            cache_only=True,
        )


def test_query_http_failure_raises_provider_error(provider_cfg, demo_env, demo_query):
    client, transport = make_client(status=500)
    with pytest.raises(ProviderError):
        query_waypoints(provider_cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert transport.calls == 1  # max_retries=0


def test_query_retries_then_succeeds(demo_env, demo_query):
    cfg = ProviderConfig(base_url="http://llm.test/v1", model_name="m", max_retries=2)
    state = {"n": 0}

    def flaky(request):
        state["n"] += 1
        if state["n"] < 3:
            return httpx.Response(503, text="busy")
        return httpx.Response(200, json=completion_json(DEMO_RESPONSE))

    client = httpx.Client(transport=httpx.MockTransport(flaky))
    points = query_waypoints(cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert points[0] == (5, 5)
    assert state["n"] == 3


def test_query_unparseable_response_propagates(provider_cfg, demo_env, demo_query):
    client, _ = make_client(text="I cannot find a path, sorry.")
    cache = ResponseCache()
    with pytest.raises(MarkerNotFoundError):
        query_waypoints(provider_cfg, cache, PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    # The raw response was cached anyway, so a replay reproduces the failure.
    assert len(cache) == 1
    tl = sanitize_targets(demo_env, [], *demo_query)
    assert tl.waypoints == (demo_query[0], demo_query[1])


def test_live_call_against_fixture_server(demo_env, demo_query):
    class Handler(http.server.BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.dumps(completion_json(DEMO_RESPONSE)).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    server = http.server.HTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        cfg = ProviderConfig(
            base_url=f"http://127.0.0.1:{server.server_port}/v1",
            model_name="fixture",
            max_retries=0,
        )
        points = query_waypoints(cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query)
        assert points == [(5, 5), (26, 9), (25, 23), (20, 20)]
    finally:
        server.shutdown()
        thread.join()


def test_llm_only_valid_demo_response(provider_cfg, demo_env, demo_query):
    client, _ = make_client()
    path, valid = llm_only_path(provider_cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert valid
    assert path == [(5, 5), (26, 9), (25, 23), (20, 20)]


def test_llm_only_straight_shot_invalid(provider_cfg, demo_env, demo_query):
    client, _ = make_client(text="Generated Path: [[5, 5], [20, 20]]")
    path, valid = llm_only_path(provider_cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert not valid
    assert path == [(5, 5), (20, 20)]


def test_llm_only_provider_failure_yields_invalid(provider_cfg, demo_env, demo_query):
    client, _ = make_client(status=500)
    path, valid = llm_only_path(provider_cfg, ResponseCache(), PromptStyle.FEW_SHOT, demo_env, *demo_query, client=client)
    assert path == [] and not valid


# ---------------------------------------------------------------------------
# oracle_waypoints
# ---------------------------------------------------------------------------

def test_oracle_n_zero(demo_env, demo_query):
    s0, sg = demo_query
    assert oracle_waypoints(demo_env, s0, sg, 0) == [s0, sg]


def test_oracle_midpoint_on_empty_diagonal():
    env = Environment.create([0, 10], [0, 10])
    assert oracle_waypoints(env, (0, 0), (8, 8), 1) == [(0, 0), (4, 4), (8, 8)]


def test_oracle_demo_env_properties(demo_env, demo_query):
    s0, sg = demo_query
    pts = oracle_waypoints(demo_env, s0, sg, 3)
    assert len(pts) == 5
    assert pts[0] == s0 and pts[-1] == sg
    assert not any(point_blocked(demo_env, p) for p in pts)
    tl = sanitize_targets(demo_env, pts, s0, sg)
    assert tl.waypoints == tuple(pts)  # nothing dropped, nothing repaired


def test_oracle_no_path_error():
    env = Environment.create(
        [0, 10], [0, 10],
        horizontal_barriers=[[2, 0, 4]],
        vertical_barriers=[[4, 0, 2]],
    )
    from llmastar.search import NoPathError

    with pytest.raises(NoPathError):
        oracle_waypoints(env, (0, 0), (8, 8), 2)


def test_sample_path_waypoints_rejects_negative():
    with pytest.raises(ValueError):
        sample_path_waypoints([(0, 0), (1, 1)], (0, 0), (1, 1), -1)


def test_in_flight_bound_configuration():
    from llmastar.waypoints import set_max_in_flight

    set_max_in_flight(8)
    with pytest.raises(ValueError):
        set_max_in_flight(0)
    set_max_in_flight(4)  # restore the default
