import pytest

from crn_multicast.assignment import Scheme
from crn_multicast.config import (
    Config,
    ConfigError,
    default_config_text,
    load_config,
    parse_config_text,
    sweep_from_config,
)
from crn_multicast.session import TreeKind


def test_default_template_round_trips_to_defaults(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text(default_config_text(), encoding="utf-8")
    assert load_config(path) == Config()


def test_unknown_key_names_key_and_line():
    with pytest.raises(ConfigError, match=r"line 2.*n_nodez"):
        parse_config_text("n_nodes = 12\nn_nodez = 9\n")


def test_missing_equals_sign_rejected():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just some words\n")


def test_comments_and_blank_lines_ignored():
    values = parse_config_text("\n# full line comment\nn_nodes = 12  # trailing comment\n")
    assert values == {"n_nodes": 12}


def test_list_values_parse():
    values = parse_config_text("schemes = pos, rs\ntrees = mst\nsweep_values = 0.1,0.9\n")
    assert values["schemes"] == (Scheme.POS, Scheme.RS)
    assert values["trees"] == (TreeKind.MST,)
    assert values["sweep_values"] == (0.1, 0.9)


def test_unknown_scheme_rejected():
    with pytest.raises(ConfigError, match="nope"):
        parse_config_text("schemes = pos,nope\n")


def test_overrides_beat_file_values(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("seed = 3\ntrials = 50\n", encoding="utf-8")
    cfg = load_config(path, {"seed": 9, "trials": None})
    assert cfg.seed == 9  # flag wins
    assert cfg.trials == 50  # absent flag leaves the file value


def test_inconsistent_scenario_rejected():
    with pytest.raises(ConfigError, match="n_dest"):
        load_config(None, {"n_nodes": 5, "n_dest": 7})


def test_bad_numeric_value_names_key():
    with pytest.raises(ConfigError, match="p_idle"):
        parse_config_text("p_idle = often\n")


def test_sweep_from_config_rejects_unknown_variable():
    cfg = Config(sweep_variable="frequency")
    with pytest.raises(ConfigError, match="frequency"):
        sweep_from_config(cfg)


def test_sweep_from_config_builds_spec():
    spec = sweep_from_config(Config())
    assert spec.variable == "p_idle"
    assert spec.values == (0.1, 0.5, 0.9)
    assert spec.trials == 1000
