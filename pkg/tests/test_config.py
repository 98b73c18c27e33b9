"""Configuration parsing: dotted keys, defaults, validation, round trip."""

import pytest

from deltanls.config import (
    ConfigError,
    RunConfig,
    apply_override,
    emit_config,
    parse_config,
    validate,
)

MINIMAL = """
command = solve
params.alpha = 0
params.omega = 2
params.omega_tilde = 1
params.beta = 1
"""


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.command == "solve"
    assert cfg.alpha == 0.0
    assert cfg.omega == 2.0
    assert cfg.n == 4096
    assert cfg.grading == 2.0
    assert cfg.formats == ("csv", "json")
    assert cfg.seed == 0


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("# a comment\n\ncommand = selftest  # trailing\n")
    assert cfg.command == "selftest"


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="params.gamma"):
        parse_config("params.gamma = 1\n")


def test_type_mismatch_names_the_key():
    with pytest.raises(ConfigError, match="grid.n"):
        parse_config("grid.n = often\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("params.beta = 1\nparams.beta = 2\n")


def test_omega_below_floor_rejected():
    # omega_alpha(0) ~ 1.261 > 1
    with pytest.raises(ConfigError, match="omega"):
        parse_config("params.omega = 1.0\nparams.alpha = 0\n")


def test_bad_command_rejected():
    with pytest.raises(ConfigError, match="command"):
        parse_config("command = dance\n")


def test_bad_format_rejected():
    with pytest.raises(ConfigError, match="output.formats"):
        parse_config("output.formats = csv,pdf\n")


def test_unsorted_sweep_betas_rejected():
    with pytest.raises(ConfigError, match="sweep.betas"):
        parse_config("sweep.betas = 2,1\n")


def test_bad_bracket_rejected():
    with pytest.raises(ConfigError, match="thresholds.bracket"):
        parse_config("thresholds.bracket = 5,1\n")


def test_round_trip_is_identity():
    cfg = parse_config(MINIMAL)
    assert parse_config(emit_config(cfg)) == cfg


def test_round_trip_survives_overrides():
    cfg = RunConfig()
    apply_override(cfg, "params.beta", "0.125")
    apply_override(cfg, "sweep.betas", "0,0.5,1")
    apply_override(cfg, "output.formats", "json,svg")
    validate(cfg)
    assert parse_config(emit_config(cfg)) == cfg


def test_params_and_options_constructors():
    cfg = parse_config(MINIMAL)
    p = cfg.params()
    assert p.beta == 1.0
    opts = cfg.solve_options()
    assert opts.seed == 0


def test_selftest_skips_param_constraints():
    # selftest does no solves, so an invalid omega is not an error
    cfg = parse_config("command = selftest\nparams.omega = 0.5\n")
    assert cfg.command == "selftest"
