import json

import pytest

from crn_multicast.cli import main
from crn_multicast.example_case import builtin_fixture


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExampleCommand:
    def test_default_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "example")
        assert code == 0
        assert "channel 5" in out and "channel 6" in out and "channel 4" in out
        assert "packet delivery rate: 0.60" in out
        assert "result: OK" in out

    def test_json_output(self, capsys):
        code, out, _ = run_cli(capsys, "example", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["ok"] is True
        assert payload["selected_channels"] == [5, 6, 4]
        assert payload["pdr"] == 0.6

    def test_fixture_file_round_trip(self, tmp_path, capsys):
        path = tmp_path / "fixture.json"
        path.write_text(json.dumps(builtin_fixture()), encoding="utf-8")
        code, out, _ = run_cli(capsys, "example", "--fixture", str(path))
        assert code == 0

    def test_tampered_fixture_fails(self, tmp_path, capsys):
        fixture = builtin_fixture()
        fixture["events"][0]["pos"]["2"][4] = 0.2  # drags the chosen column down
        path = tmp_path / "tampered.json"
        path.write_text(json.dumps(fixture), encoding="utf-8")
        code, out, _ = run_cli(capsys, "example", "--fixture", str(path))
        assert code == 1
        assert "MISMATCH" in out

    def test_unreadable_fixture_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        code, _, err = run_cli(capsys, "example", "--fixture", str(path))
        assert code == 2
        assert "error" in err

    def test_structurally_invalid_fixture_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text("{}", encoding="utf-8")
        code, _, err = run_cli(capsys, "example", "--fixture", str(path))
        assert code == 2


SMALL_CONFIG = """
# compact scenario for fast tests
n_nodes = 12
n_dest = 4
m_channels = 6
trials = 3
seed = 9
schemes = pos,rs
trees = spt
sweep_variable = p_idle
sweep_values = 0.3,0.8
"""


class TestRunCommand:
    def test_reports_every_combination(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        code, out, _ = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 0
        assert "spt/pos" in out and "spt/rs" in out

    def test_same_seed_same_report(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        _, out1, _ = run_cli(capsys, "run", "--config", str(cfg), "--json")
        _, out2, _ = run_cli(capsys, "run", "--config", str(cfg), "--json")
        assert out1 == out2

    def test_writes_session_csv(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        out_dir = tmp_path / "out"
        code, _, _ = run_cli(capsys, "run", "--config", str(cfg), "--out", str(out_dir))
        assert code == 0
        written = sorted(p.name for p in out_dir.iterdir())
        assert written == ["session_spt_pos.csv", "session_spt_rs.csv"]
        text = (out_dir / "session_spt_pos.csv").read_text(encoding="utf-8")
        assert text.startswith("dest,delivered,throughput_bps\n")

    def test_scheme_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        code, out, _ = run_cli(capsys, "run", "--config", str(cfg), "--scheme", "masa")
        assert code == 0
        assert "spt/masa" in out and "spt/pos" not in out

    def test_unknown_config_key_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("n_nodez = 12\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2
        assert "n_nodez" in err

    def test_bad_combination_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("n_nodes = 5\nn_dest = 7\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "run", "--config", str(cfg))
        assert code == 2

    def test_missing_config_file_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "run", "--config", str(tmp_path / "nope.txt"))
        assert code == 2


class TestSweepAndPlot:
    @pytest.fixture()
    def sweep_dir(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        out_dir = tmp_path / "out"
        code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(out_dir))
        assert code == 0
        return out_dir

    def test_sweep_writes_both_files(self, sweep_dir):
        trials = (sweep_dir / "trials.csv").read_text(encoding="utf-8")
        agg = (sweep_dir / "aggregate.csv").read_text(encoding="utf-8")
        assert trials.startswith("tree,scheme,variable,value,trial,avg_throughput_bps,pdr\n")
        # 2 values x 3 trials x 2 schemes x 1 tree data rows
        assert len(trials.strip().split("\n")) == 1 + 12
        assert len(agg.strip().split("\n")) == 1 + 4

    def test_sweep_is_reproducible(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text(SMALL_CONFIG, encoding="utf-8")
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(a))
        run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(b))
        assert (a / "trials.csv").read_bytes() == (b / "trials.csv").read_bytes()
        assert (a / "aggregate.csv").read_bytes() == (b / "aggregate.csv").read_bytes()

    def test_plot_renders_one_polyline_per_scheme(self, sweep_dir, tmp_path, capsys):
        charts = tmp_path / "charts"
        code, out, _ = run_cli(capsys, "plot", str(sweep_dir / "aggregate.csv"), "--out", str(charts))
        assert code == 0
        svg_names = sorted(p.name for p in charts.iterdir())
        assert svg_names == ["pdr_spt.svg", "throughput_spt.svg"]
        svg = (charts / "throughput_spt.svg").read_text(encoding="utf-8")
        assert svg.count("<polyline") == 2  # pos and rs
        assert "<svg" in svg and "</svg>" in svg

    def test_plot_on_malformed_csv_names_the_line(self, tmp_path, capsys):
        bad = tmp_path / "agg.csv"
        bad.write_text(
            "tree,scheme,variable,value,mean_throughput_bps,ci95_throughput,mean_pdr,ci95_pdr,trials\n"
            "spt,pos,p_idle,0.3,1.0\n",
            encoding="utf-8",
        )
        code, _, err = run_cli(capsys, "plot", str(bad))
        assert code == 2
        assert "line 2" in err

    def test_plot_missing_file_is_usage_error(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "plot", str(tmp_path / "none.csv"))
        assert code == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
