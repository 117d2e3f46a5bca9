"""Waypoint providers.

Three prompt styles (plain few-shot demonstrations, chain-of-thought, and
recursive path evaluation), a chat-completion HTTP client with retries and
response caching, the response parser, and a deterministic oracle provider
that samples the optimal path for offline benchmarking.  Also the LLM-only
baseline, which treats the model's answer as the whole path instead of as
guidance.
"""

from __future__ import annotations

import ast
import hashlib
import json
import math
import os
import threading
import time
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import httpx

from .env import Environment, Point, PointLike, path_valid
from .search import NoPathError, astar


class PromptParseError(ValueError):
    """Model response could not be turned into a point list."""


class MarkerNotFoundError(PromptParseError):
    """Response contains no "Generated Path:" marker."""


class MalformedPathError(PromptParseError):
    """Marker present but the following list is unparseable."""


class ProviderError(RuntimeError):
    """Transport or protocol failure after exhausting retries."""


class CacheMissError(LookupError):
    """Cache-only provider was asked for a prompt it has never seen."""


class PromptStyle(str, Enum):
    FEW_SHOT = "few_shot"
    COT = "cot"
    REPE = "repe"

    @property
    def shots(self) -> int:
        """In-context demonstrations per style: 5 plain, 3 for CoT and RePE."""
        return 5 if self is PromptStyle.FEW_SHOT else 3


@dataclass(frozen=True)
class ProviderConfig:
    """How to reach a chat-completion endpoint.

    Only the *name* of the API-key environment variable is stored, so configs
    can be logged or serialized without leaking credentials.
    """

    base_url: str
    model_name: str
    api_key_env: str = "LLM_API_KEY"
    temperature: float = 0.0
    max_tokens: int = 512
    max_retries: int = 3
    timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")


class ResponseCache:
    """Content-addressed store of raw model responses.

    Keys hash the rendered prompt together with the model name and
    temperature; a populated cache replays a benchmark with zero network
    calls.  Reads are lock-free, writes are serialized.
    """

    def __init__(self, entries: Optional[dict[str, str]] = None, path: Optional[str] = None):
        self.entries: dict[str, str] = dict(entries or {})
        self.path = path
        self._lock = threading.Lock()

    @staticmethod
    def key(prompt: str, model_name: str, temperature: float) -> str:
        payload = json.dumps([prompt, model_name, temperature], ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def get(self, key: str) -> Optional[str]:
        return self.entries.get(key)

    def put(self, key: str, response_text: str) -> None:
        with self._lock:
            self.entries[key] = response_text

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: str) -> "ResponseCache":
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                entries = json.load(fh)
        else:
            entries = {}
        return cls(entries=entries, path=path)

    def save(self, path: Optional[str] = None) -> None:
        target = path or self.path
        if target is None:
            raise ValueError("no path bound to this cache")
        with self._lock:
            with open(target, "w", encoding="utf-8") as fh:
                json.dump(self.entries, fh, sort_keys=True, indent=2)


_INSTRUCTION = (
    "Identify a path between the start and goal points to navigate around obstacles "
    "and find the shortest path to the goal.\n"
    "Horizontal barriers are represented as [y, x_start, x_end], and vertical barriers "
    "are represented as [x, y_start, y_end].\n"
    'Conclude your response with the generated path in the format '
    '"Generated Path: [[x1, y1], [x2, y2], ...]".'
)


@dataclass(frozen=True)
class Demonstration:
    """One worked example: its map, endpoints, answer path, and reasoning text."""

    start: tuple[int, int]
    goal: tuple[int, int]
    h_barriers: tuple[tuple[int, int, int], ...]
    v_barriers: tuple[tuple[int, int, int], ...]
    path: tuple[tuple[int, int], ...]
    thought: str = ""
    iterations: str = ""

    def environment(self, x_range=(0, 50), y_range=(0, 30)) -> Environment:
        return Environment.create(x_range, y_range, self.h_barriers, self.v_barriers)


DEMONSTRATIONS: tuple[Demonstration, ...] = (
    Demonstration(
        start=(5, 5),
        goal=(20, 20),
        h_barriers=((10, 0, 25), (15, 30, 50)),
        v_barriers=((25, 10, 22),),
        path=((5, 5), (26, 9), (25, 23), (20, 20)),
        thought=(
            "Identify a path from [5, 5] to [20, 20] while avoiding the horizontal "
            "barrier at y=10 spanning x=0 to x=25 by moving upwards and right, then "
            "bypass the vertical barrier at x=25 spanning y=10 to y=22, and finally "
            "move directly to [20, 20]."
        ),
        iterations=(
            "- First Iteration on [5, 5]\n"
            "Thought: The horizontal barrier at y=10 spanning x=0 to x=25 blocks the "
            "direct path to the goal. To navigate around it, we should move to the "
            "upper-right corner of the barrier.\n"
            "Selected Point: [26, 9]\n"
            "Evaluation: The selected point [26, 9] effectively bypasses the horizontal "
            "barrier, positioning us at its corner and maintaining progress toward the "
            "goal without encountering additional obstacles.\n"
            "- Second Iteration on [26, 9]\n"
            "Thought: Now that we have bypassed the horizontal barrier, the path to the "
            "goal seems clear.\n"
            "Selected Point: [20, 20]\n"
            "Evaluation: The path is obstructed by the vertical barrier, leading to a "
            "collision. A more effective route involves moving around this vertical "
            "barrier.\n"
            "Thought: To bypass the vertical barrier at x=25, we should move along its "
            "length and then turn around it to continue toward the goal.\n"
            "Selected Point: [25, 23]\n"
            "Evaluation: The selected point [25, 23] successfully avoids the vertical "
            "barrier and brings us closer to the goal without encountering further "
            "obstacles.\n"
            "- Third Iteration on [25, 23]\n"
            "Thought: From this position, there are no barriers directly obstructing "
            "the path to the goal.\n"
            "Selected Point: [20, 20]\n"
            "Evaluation: The path to the goal is clear from here, allowing a direct "
            "move to the goal."
        ),
    ),
    Demonstration(
        start=(2, 3),
        goal=(40, 25),
        h_barriers=((20, 10, 40),),
        v_barriers=((15, 0, 10),),
        path=((2, 3), (16, 12), (41, 19), (40, 25)),
        thought=(
            "Identify a path from [2, 3] to [40, 25] while avoiding the vertical "
            "barrier at x=15 spanning y=0 to y=10 by crossing above its top end, then "
            "stay below the horizontal barrier at y=20 spanning x=10 to x=40 until "
            "past its right end, and finally move up to [40, 25]."
        ),
        iterations=(
            "- First Iteration on [2, 3]\n"
            "Thought: The vertical barrier at x=15 spanning y=0 to y=10 blocks the low "
            "route toward the goal, so we should cross above its top end.\n"
            "Selected Point: [16, 12]\n"
            "Evaluation: The selected point [16, 12] passes above the vertical barrier "
            "and keeps us clear of the horizontal barrier at y=20.\n"
            "- Second Iteration on [16, 12]\n"
            "Thought: The horizontal barrier at y=20 spanning x=10 to x=40 lies between "
            "us and the goal, so we should slip past its right end before climbing.\n"
            "Selected Point: [41, 19]\n"
            "Evaluation: The selected point [41, 19] stays below the horizontal barrier "
            "and clears its right end, leaving an open route upward.\n"
            "- Third Iteration on [41, 19]\n"
            "Thought: From this position, nothing obstructs the short move up to the "
            "goal.\n"
            "Selected Point: [40, 25]\n"
            "Evaluation: The path to the goal is clear from here, allowing a direct "
            "move to the goal."
        ),
    ),
    Demonstration(
        start=(4, 12),
        goal=(45, 3),
        h_barriers=((8, 0, 30),),
        v_barriers=((35, 5, 25),),
        path=((4, 12), (31, 9), (32, 4), (45, 3)),
        thought=(
            "Identify a path from [4, 12] to [45, 3] while avoiding the horizontal "
            "barrier at y=8 spanning x=0 to x=30 by moving right beyond its end before "
            "descending, then pass under the vertical barrier at x=35 spanning y=5 to "
            "y=25, and finally move directly to [45, 3]."
        ),
        iterations=(
            "- First Iteration on [4, 12]\n"
            "Thought: The horizontal barrier at y=8 spanning x=0 to x=30 prevents "
            "descending directly, so we should move right past its end while staying "
            "above it.\n"
            "Selected Point: [31, 9]\n"
            "Evaluation: The selected point [31, 9] clears the right end of the "
            "horizontal barrier while keeping progress toward the goal.\n"
            "- Second Iteration on [31, 9]\n"
            "Thought: With the horizontal barrier behind us, we can drop below y=5 to "
            "pass under the vertical barrier at x=35.\n"
            "Selected Point: [32, 4]\n"
            "Evaluation: The selected point [32, 4] is below the vertical barrier's "
            "lower end, so the remaining route to the goal is unobstructed.\n"
            "- Third Iteration on [32, 4]\n"
            "Thought: From this position, there are no barriers directly obstructing "
            "the path to the goal.\n"
            "Selected Point: [45, 3]\n"
            "Evaluation: The path to the goal is clear from here, allowing a direct "
            "move to the goal."
        ),
    ),
    Demonstration(
        start=(48, 5),
        goal=(5, 28),
        h_barriers=((12, 15, 50),),
        v_barriers=((10, 0, 15),),
        path=((48, 5), (14, 11), (13, 16), (5, 28)),
    ),
    Demonstration(
        start=(10, 25),
        goal=(30, 2),
        h_barriers=((18, 0, 20), (6, 25, 50)),
        v_barriers=(),
        path=((10, 25), (22, 19), (23, 5), (30, 2)),
    ),
)


def _fmt_point(p: PointLike) -> str:
    return f"[{int(p[0])}, {int(p[1])}]"


def _fmt_triples(triples: Sequence[Sequence[int]]) -> str:
    return repr([[int(v) for v in t] for t in triples])


def _fmt_path(path: Sequence[PointLike]) -> str:
    return repr([[int(p[0]), int(p[1])] for p in path])


def _query_lines(
    start: PointLike, goal: PointLike, h_barriers, v_barriers
) -> list[str]:
    return [
        f"Start Point: {_fmt_point(start)}",
        f"Goal Point: {_fmt_point(goal)}",
        f"Horizontal Barriers: {_fmt_triples(h_barriers)}",
        f"Vertical Barriers: {_fmt_triples(v_barriers)}",
    ]


def _demo_block(style: PromptStyle, demo: Demonstration) -> str:
    lines = _query_lines(demo.start, demo.goal, demo.h_barriers, demo.v_barriers)
    if style is PromptStyle.COT:
        lines.append(f"Thought: {demo.thought}")
    elif style is PromptStyle.REPE:
        lines.append(demo.iterations)
    lines.append(f"Generated Path: {_fmt_path(demo.path)}")
    return "\n".join(lines)


def render_prompt(
    style: PromptStyle, env: Environment, s0: PointLike, sg: PointLike
) -> str:
    """Instantiate the prompt template for a query; deterministic bytes."""
    blocks = [_INSTRUCTION]
    for demo in DEMONSTRATIONS[: style.shots]:
        blocks.append(_demo_block(style, demo))
    query = _query_lines(
        s0, sg,
        [b.as_list() for b in env.h_barriers],
        [b.as_list() for b in env.v_barriers],
    )
    query.append("Generated Path: ")
    blocks.append("\n".join(query))
    return "\n\n".join(blocks)


_MARKER = "Generated Path:"


def _round_half_away(v: float) -> int:
    if v >= 0:
        return int(math.floor(v + 0.5))
    return -int(math.floor(-v + 0.5))


def parse_path(response: str) -> list[Point]:
    """Extract the point list after the last "Generated Path:" marker.

    Tolerates whitespace variation and real-valued coordinates (rounded half
    away from zero).  Raises :class:`MarkerNotFoundError` when the marker is
    absent and :class:`MalformedPathError` for anything unparseable after it.
    """
    idx = response.rfind(_MARKER)
    if idx < 0:
        raise MarkerNotFoundError(f'response contains no "{_MARKER}" marker')
    tail = response[idx + len(_MARKER):]
    open_idx = tail.find("[")
    if open_idx < 0:
        raise MalformedPathError("no list found after the path marker")
    depth = 0
    end = None
    for i in range(open_idx, len(tail)):
        c = tail[i]
        if c == "[":
            depth += 1
        elif c == "]":
            depth -= 1
            if depth == 0:
                end = i + 1
                break
    if end is None:
        raise MalformedPathError("unbalanced brackets after the path marker")
    literal = tail[open_idx:end]
    try:
        value = ast.literal_eval(literal)
    except (ValueError, SyntaxError) as exc:
        raise MalformedPathError(f"unparseable path list: {literal!r}") from exc
    if not isinstance(value, (list, tuple)):
        raise MalformedPathError(f"path literal is not a list: {literal!r}")
    points = []
    for item in value:
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise MalformedPathError(f"bad coordinate pair: {item!r}")
        points.append(Point(_round_half_away(float(item[0])), _round_half_away(float(item[1]))))
    return points


_inflight = threading.BoundedSemaphore(4)


def set_max_in_flight(n: int) -> None:
    """Bound on concurrent HTTP requests across all threads (default 4)."""
    global _inflight
    if n < 1:
        raise ValueError("max in-flight requests must be >= 1")
    _inflight = threading.BoundedSemaphore(n)


def _fetch_completion(
    cfg: ProviderConfig, prompt: str, client: Optional[httpx.Client] = None
) -> str:
    url = cfg.base_url.rstrip("/") + "/chat/completions"
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(cfg.api_key_env)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {
        "model": cfg.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_tokens,
    }
    own_client = client is None
    http = client or httpx.Client(timeout=cfg.timeout)
    last_error: Optional[Exception] = None
    try:
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                time.sleep(min(8.0, 0.5 * 2 ** (attempt - 1)))
            try:
                with _inflight:
                    resp = http.post(url, headers=headers, json=body)
                resp.raise_for_status()
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
                last_error = exc
        raise ProviderError(f"provider request failed after {cfg.max_retries + 1} attempts: {last_error}")
    finally:
        if own_client:
            http.close()


def query_waypoints(
    cfg: ProviderConfig,
    cache: ResponseCache,
    style: PromptStyle,
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    *,
    client: Optional[httpx.Client] = None,
    cache_only: bool = False,
) -> list[Point]:
    """Raw (unsanitized) waypoints for a query, via cache or live request.

    Freshly fetched responses are cached before parsing, so a failed parse is
    still replayable.  Parse and provider errors propagate; callers fall back
    to an empty raw list, which sanitizes to [start, goal].
    """
    prompt = render_prompt(style, env, s0, sg)
    key = ResponseCache.key(prompt, cfg.model_name, cfg.temperature)
    text = cache.get(key)
    if text is None:
        if cache_only:
            raise CacheMissError(
                f"no cached response for start {tuple(s0)} goal {tuple(sg)} (key {key[:12]}...)"
            )
        text = _fetch_completion(cfg, prompt, client=client)
        cache.put(key, text)
    return parse_path(text)


def sample_path_waypoints(
    path: Sequence[PointLike], s0: PointLike, sg: PointLike, n: int
) -> list[Point]:
    """Pick the path vertices nearest to n uniform arc-length fractions.

    Returns [start, samples..., goal]; ties snap to the earlier vertex.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0 or len(path) < 3:
        return [Point(*s0), Point(*sg)]
    cums = [0.0]
    for a, b in zip(path, path[1:]):
        cums.append(cums[-1] + math.hypot(b[0] - a[0], b[1] - a[1]))
    total = cums[-1]
    samples = []
    for j in range(1, n + 1):
        target = total * j / (n + 1)
        i = bisect_left(cums, target)
        if i > 0 and (i == len(cums) or target - cums[i - 1] <= cums[i] - target):
            i -= 1
        samples.append(Point(*path[i]))
    return [Point(*s0), *samples, Point(*sg)]


def oracle_waypoints(env: Environment, s0: PointLike, sg: PointLike, n: int) -> list[Point]:
    """Deterministic stand-in for a model: sample the optimal path.

    Runs A*, then returns [start, n arc-length samples..., goal].
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    result = astar(env, s0, sg)
    if not result.found:
        raise NoPathError(f"no path from {tuple(s0)} to {tuple(sg)}")
    assert result.path is not None
    return sample_path_waypoints(result.path, s0, sg, n)


def llm_only_path(
    cfg: ProviderConfig,
    cache: ResponseCache,
    style: PromptStyle,
    env: Environment,
    s0: PointLike,
    sg: PointLike,
    *,
    client: Optional[httpx.Client] = None,
    cache_only: bool = False,
) -> tuple[list[Point], bool]:
    """LLM-only baseline: the parsed response *is* the path.

    Segments may be long jumps; validity is judged by segment collision
    checks, not lattice steps.  Provider or parse failures yield an empty,
    invalid path.  No search counters exist for this baseline.
    """
    try:
        points = query_waypoints(
            cfg, cache, style, env, s0, sg, client=client, cache_only=cache_only
        )
    except (ProviderError, PromptParseError):
        return [], False
    return points, path_valid(env, points, s0, sg)
