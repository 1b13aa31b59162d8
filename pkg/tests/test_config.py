"""Scenario configuration: defaults, validation, JSON round trips."""

import json

import numpy as np
import pytest

from abcsir import ConfigError, config_to_json, load_config
from abcsir.config import ALPHA_ONE_SURROGATE


def test_empty_object_gives_default_scenario():
    cfg = load_config("{}")
    assert cfg.alpha == 0.95
    assert (cfg.nx, cfg.ny, cfg.h) == (10, 10, 1.0)
    assert (cfg.t_final, cfg.tau) == (20.0, 0.005)
    p = cfg.params
    assert (p.mu, p.d, p.beta, p.r) == (0.02, 0.03, 0.9, 0.04)
    assert p.lambda_s == 0.6
    s, i, r = cfg.initial_arrays()
    assert s[0, 0] == 43.0 and i[0, 0] == 7.0 and r[0, 0] == 0.0
    assert np.all(s[1:, :] == 50.0) and np.all(i[0, 1:] == 0.0)
    assert cfg.n_steps == 4000
    assert cfg.fbs.delta == 0.001 and cfg.fbs.omega == 0.5 and cfg.fbs.max_iter == 100
    assert cfg.outputs.snapshot_times == (5.0, 10.0, 15.0, 20.0)


def test_stability_bound_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps({"time": {"t_final": 20.0, "tau": 1.0}}))


def test_non_integer_step_count_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps({"time": {"t_final": 1.0, "tau": 0.3}}))


def test_round_trip_is_identity():
    cfg = load_config(json.dumps({
        "alpha": 0.9,
        "grid": {"nx": 6, "ny": 4, "h": 0.5},
        "time": {"t_final": 2.0, "tau": 0.01},
        "params": {"beta": 0.1, "theta": 3.0},
        "initial": {"default": {"s": 40.0, "i": 1.0, "r": 0.0},
                    "overrides": [{"region": [2, 2, 3, 3], "s": 10.0, "i": 5.0, "r": 1.0}]},
        "fbs": {"delta": 0.01, "omega": 0.3, "max_iter": 7, "initial_control": 0.2},
        "outputs": {"snapshot_times": [1.0, 2.0], "directory": "artifacts"},
        "guards": {"positivity_budget": 0.05, "memory_window": 100},
    }))
    text = config_to_json(cfg)
    again = load_config(text)
    assert again == cfg
    assert load_config(config_to_json(again)) == again


def test_alpha_one_maps_to_surrogate():
    cfg = load_config(json.dumps({"alpha": 1.0}))
    assert cfg.alpha == ALPHA_ONE_SURROGATE
    assert cfg.alpha_requested == 1.0
    # idempotent through a round trip
    assert load_config(config_to_json(cfg)) == cfg


def test_alpha_out_of_range_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps({"alpha": 1.2}))
    with pytest.raises(ConfigError):
        load_config(json.dumps({"alpha": 0.0}))


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps({"gird": {}}))
    with pytest.raises(ConfigError):
        load_config(json.dumps({"params": {"betta": 0.1}}))


def test_invalid_json_reports_parse_error():
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config("{alpha: 0.9")


def test_negative_initial_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps({"initial": {"default": {"s": -1.0}}}))
    with pytest.raises(ConfigError):
        load_config(json.dumps(
            {"initial": {"overrides": [{"region": [1, 1, 1, 1], "i": -2.0}]}}
        ))


def test_override_region_outside_grid_rejected():
    with pytest.raises(ConfigError):
        load_config(json.dumps(
            {"grid": {"nx": 3, "ny": 3, "h": 1.0},
             "initial": {"overrides": [{"region": [1, 1, 4, 1], "s": 1.0}]}}
        ))


def test_override_region_covers_rectangle():
    cfg = load_config(json.dumps({
        "grid": {"nx": 4, "ny": 4, "h": 1.0},
        "initial": {"default": {"s": 9.0, "i": 0.0, "r": 0.0},
                    "overrides": [{"region": [2, 3, 4, 4], "s": 1.0, "i": 2.0, "r": 3.0}]},
    }))
    s, i, r = cfg.initial_arrays()
    assert np.all(s[2:4, 1:4] == 1.0)
    assert np.all(i[2:4, 1:4] == 2.0)
    assert s[0, 0] == 9.0 and i[1, 3] == 0.0
