import json

import numpy as np
import pytest

from llmastar.dataset import (
    DatasetSchemaError,
    GenParams,
    GenerationExhaustedError,
    MapRecord,
    dataset_to_json,
    generate_dataset,
    generate_map,
    load_dataset,
    save_dataset,
)
from llmastar.env import point_blocked
from llmastar.search import astar

SMALL = GenParams(
    x_range=(0, 20), y_range=(0, 12),
    n_h_barriers=(1, 2), n_v_barriers=(1, 2),
    n_pairs=3, min_separation=5.0, seed=42,
)


def rng_for(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def test_zero_barriers_trivially_solvable():
    params = GenParams(
        x_range=(0, 15), y_range=(0, 10),
        n_h_barriers=(0, 0), n_v_barriers=(0, 0),
        n_pairs=4, min_separation=4.0, seed=1,
    )
    rec = generate_map(params, rng_for(1))
    assert rec.environment.h_barriers == ()
    assert rec.environment.v_barriers == ()
    assert len(rec.start_goal) == 4


def test_schema_field_names():
    rec = generate_map(SMALL, rng_for(7))
    d = rec.to_json_dict()
    assert list(d.keys()) == [
        "id", "x_range", "y_range", "horizontal_barriers", "vertical_barriers", "start_goal",
    ]


def test_generation_deterministic():
    a = generate_dataset(SMALL, 3)
    b = generate_dataset(SMALL, 3)
    assert dataset_to_json(a) == dataset_to_json(b)


def test_different_seeds_differ():
    a = generate_dataset(SMALL, 3)
    b = generate_dataset(GenParams(**{**SMALL.__dict__, "seed": 43}), 3)
    assert dataset_to_json(a) != dataset_to_json(b)


def test_sample_counts():
    records = generate_dataset(SMALL, 5)
    assert len(records) == 5
    assert sum(len(r.start_goal) for r in records) == 15
    assert len(generate_dataset(SMALL, 1)) == 1
    with pytest.raises(ValueError):
        generate_dataset(SMALL, 0)


def test_every_sample_solvable_and_unblocked():
    for rec in generate_dataset(SMALL, 4):
        seen = set()
        for s, g in rec.start_goal:
            assert not point_blocked(rec.environment, s)
            assert not point_blocked(rec.environment, g)
            assert (s, g) not in seen
            seen.add((s, g))
            assert astar(rec.environment, s, g).found


def test_save_load_round_trip(tmp_path):
    records = generate_dataset(SMALL, 3)
    path = tmp_path / "ds.json"
    save_dataset(records, str(path))
    loaded = load_dataset(str(path))
    assert loaded == records


def test_reload_points_unblocked(tmp_path):
    records = generate_dataset(SMALL, 2)
    path = tmp_path / "ds.json"
    save_dataset(records, str(path))
    for rec in load_dataset(str(path)):
        for s, g in rec.start_goal:
            assert not point_blocked(rec.environment, s)
            assert not point_blocked(rec.environment, g)


def test_missing_field_names_offender(tmp_path):
    records = generate_dataset(SMALL, 1)
    data = json.loads(dataset_to_json(records))
    del data[0]["x_range"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(DatasetSchemaError) as err:
        load_dataset(str(path))
    assert "x_range" in str(err.value)


def test_hand_written_file_loads(tmp_path):
    data = [
        {
            "id": "hand-000",
            "x_range": [0, 50],
            "y_range": [0, 30],
            "horizontal_barriers": [[10, 0, 25], [15, 30, 50]],
            "vertical_barriers": [[25, 10, 22]],
            "start_goal": [[[5, 5], [20, 20]]],
        }
    ]
    path = tmp_path / "hand.json"
    path.write_text(json.dumps(data))
    records = load_dataset(str(path))
    assert isinstance(records[0], MapRecord)
    assert records[0].start_goal == (((5, 5), (20, 20)),)
    assert records[0].environment.h_barriers[0].as_list() == [10, 0, 25]


def test_generation_exhausted_on_overconstrained_params():
    params = GenParams(
        x_range=(0, 4), y_range=(0, 4),
        n_h_barriers=(0, 0), n_v_barriers=(0, 0),
        n_pairs=1, min_separation=100.0, seed=3, max_attempts=20,
    )
    with pytest.raises(GenerationExhaustedError):
        generate_map(params, rng_for(3))


def test_params_validation():
    with pytest.raises(ValueError):
        GenParams(n_pairs=0)
    with pytest.raises(ValueError):
        GenParams(span_fraction=(0.9, 0.1))
    with pytest.raises(ValueError):
        GenParams(n_h_barriers=(4, 2))
