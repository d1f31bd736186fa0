"""Batch interface: argument handling, emission formats, determinism,
exit codes."""

import json
import math

import pytest

from catqfi import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = val.strip()
            continue
        parts = line.split(",")
        if header is None:
            header = parts
        else:
            rows.append(dict(zip(header, parts)))
    return meta, header, rows


CURVE_ARGS = ["curve", "--d", "4", "--k", "0,1", "--eta", "1.0",
              "--nav", "0.3:1.0:4", "--baselines", "noon"]


def test_curve_csv_schema_and_order(capsys):
    code, out, _ = run(CURVE_ARGS, capsys)
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == list(cli.CURVE_HEADER)
    assert meta["version"] == "0.1.0"
    assert "convention.n_av" in meta
    cat_rows = [r for r in rows if r["method"].startswith("pure")]
    keys = [(int(r["d"]), int(r["k"]), float(r["n_av"])) for r in cat_rows]
    assert keys == sorted(keys)
    assert rows[-1]["method"] == "noon"


def test_curve_twelve_digit_format(capsys):
    _, out, _ = run(CURVE_ARGS, capsys)
    _, _, rows = parse_csv(out)
    val = rows[0]["alpha"]
    assert len(val.replace(".", "").replace("-", "").lstrip("0")) <= 12
    assert float(val) > 0


def test_curve_byte_identical_across_runs(capsys):
    _, out1, _ = run(CURVE_ARGS, capsys)
    _, out2, _ = run(CURVE_ARGS, capsys)
    assert out1 == out2


def test_curve_json_mirror(capsys):
    code, out, _ = run(CURVE_ARGS + ["--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["metadata"]["command"] == "curve"
    assert payload["metadata"]["conventions"]["sql"] == "delta_phi = 1/sqrt(N_av)"
    assert len(payload["rows"]) == 12
    assert list(payload["rows"][0]) == sorted(payload["rows"][0])


def test_curve_empty_k_is_usage_error(capsys):
    code, _, err = run(["curve", "--d", "4", "--k", ""], capsys)
    assert code == 1
    assert "usage error" in err


def test_curve_bad_range_is_usage_error(capsys):
    code, _, _ = run(["curve", "--d", "4", "--k", "0", "--nav", "1:2"], capsys)
    assert code == 1


def test_g2_single_component_rows(capsys):
    code, out, _ = run(["g2", "--d", "1", "--k", "0",
                        "--alpha-sq", "1:3:3"], capsys)
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == list(cli.G2_HEADER)
    assert all(float(r["g2"]) == pytest.approx(1.0, rel=1e-12) for r in rows)


def test_genscheme_report_deterministic(capsys):
    args = ["genscheme", "--d", "2", "--alpha", "1", "--beta", "4",
            "--shots", "200", "--seed", "7"]
    code, out1, _ = run(args, capsys)
    assert code == 0
    _, out2, _ = run(args, capsys)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["metadata"]["beta"] == 4.0
    assert sum(r["shots_observed"] for r in payload["rows"]) == 200


def test_genscheme_zero_shots_usage_error(capsys):
    code, _, _ = run(["genscheme", "--d", "2", "--shots", "0"], capsys)
    assert code == 1


def test_genscheme_default_beta(capsys):
    code, out, _ = run(["genscheme", "--d", "4", "--shots", "1"], capsys)
    assert code == 0
    assert json.loads(out)["metadata"]["beta"] == 6.0


def test_optimal_command(capsys):
    code, out, _ = run(["optimal", "--nav", "1.0", "--eta", "1.0",
                        "--d-max", "8"], capsys)
    assert code == 0
    _, _, rows = parse_csv(out)
    assert (rows[0]["d"], rows[0]["k"]) == ("8", "0")
    assert float(rows[0]["delta_phi"]) == pytest.approx(
        1 / math.sqrt(float(rows[0]["f_q"])), rel=1e-12)


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("d = 4\nk = 0\nnav = 0.3:1.0:4\neta = 1.0\n")
    code, out, _ = run(["curve", "--config", str(cfg), "--d", "2",
                        "--k", "0"], capsys)
    assert code == 0
    meta, _, rows = parse_csv(out)
    assert meta["d"] == "2"            # flag beats file
    assert meta["nav"] == "0.3:1.0:4"  # file fills the rest
    assert all(r["d"] == "2" for r in rows if r["method"] != "error")


def test_config_file_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bogus = 1\n")
    code, _, err = run(["curve", "--config", str(cfg), "--d", "4",
                        "--k", "0"], capsys)
    assert code == 1
    assert "bogus" in err


def test_output_file_written(tmp_path, capsys):
    path = tmp_path / "curve.csv"
    code, out, _ = run(CURVE_ARGS + ["--output", str(path)], capsys)
    assert code == 0
    assert out == ""
    text = path.read_text(encoding="utf-8")
    assert "\r" not in text
    assert text.count("\n") >= 13


def test_numerical_failure_exit_code(capsys):
    # an energy target beyond the truncation cap fails every (d, k) pair
    code, _, err = run(["optimal", "--nav", "50", "--eta", "1.0",
                        "--d-max", "2", "--k-max", "0"], capsys)
    assert code == 2
    assert "numerical failure" in err
