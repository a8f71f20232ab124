import xml.etree.ElementTree as ET

import pytest

from otasig.output import CSV_HEADER, OutputError, emit_csv, emit_plot, read_csv
from otasig.sim import PointResult, SimConfig, SweepResult, run_sweep

SVG = "{http://www.w3.org/2000/svg}"


def sweep(scheme="sts", L=1, seed=0):
    cfg = SimConfig(scheme=scheme, num_signals=L, snr_db_list=(0.0, 6.0, 12.0), trials_per_point=150,
                    master_seed=seed)
    return run_sweep(cfg)


def test_empty_result_header_only(tmp_path):
    path = emit_csv(SweepResult(), tmp_path / "e.csv")
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_rows_and_order(tmp_path):
    r = sweep("zc").merge(sweep("sts", 2), sweep("sts"))
    lines = emit_csv(r, tmp_path / "r.csv").read_text().splitlines()
    assert len(lines) == 1 + 9
    keys = [tuple(l.split(",")[:3]) for l in lines[1:]]
    assert keys[0] == ("sts", "1", "0.0") and keys[3] == ("sts", "2", "0.0") and keys[-1] == ("zc", "1", "12.0")


def test_csv_round_trip(tmp_path):
    r = sweep("gold", 2)
    back = read_csv(emit_csv(r, tmp_path / "g.csv"))
    assert back.sorted_points() == r.sorted_points()


def test_same_seed_byte_identical(tmp_path):
    a = emit_csv(sweep("walsh", seed=5), tmp_path / "a.csv").read_bytes()
    b = emit_csv(sweep("walsh", seed=5), tmp_path / "b.csv").read_bytes()
    c = emit_csv(sweep("walsh", seed=6), tmp_path / "c.csv").read_bytes()
    assert a == b and a != c


def test_csv_io_error_names_path(tmp_path):
    with pytest.raises(OutputError, match="nope"):
        emit_csv(SweepResult(), tmp_path / "nope" / "x.csv")


def _curves(path):
    root = ET.parse(path).getroot()
    out = {}
    for g in root.iter(f"{SVG}g"):
        gid = g.get("id", "")
        if gid.startswith(("curve-", "clamped-")):
            out[gid] = g
    return root, out


def test_plot_one_polyline(tmp_path):
    r = SweepResult([PointResult("gold", 1, s, 100, e) for s, e in ((0.0, 50), (5.0, 10), (10.0, 2))])
    root, curves = _curves(emit_plot([r], tmp_path / "p.svg"))
    assert root.tag == f"{SVG}svg"
    assert list(curves) == ["curve-gold-1"]
    path = curves["curve-gold-1"].find(f"{SVG}path")
    assert path.get("d").count("L") == 2  # M + two segments = three vertices


def test_plot_clamps_zero_errors(tmp_path):
    r = SweepResult([PointResult("sts", 1, 0.0, 100, 3), PointResult("sts", 1, 10.0, 100, 0)])
    text = emit_plot(r, tmp_path / "z.svg").read_text()
    _, curves = _curves(tmp_path / "z.svg")
    assert "clamped-sts-1" in curves
    assert "no errors" in text


def test_plot_deterministic(tmp_path):
    r = sweep("sts").merge(sweep("zc", 2))
    a = emit_plot([r], tmp_path / "a.svg").read_bytes()
    b = emit_plot([r], tmp_path / "b.svg").read_bytes()
    assert a == b


def test_plot_needs_results(tmp_path):
    with pytest.raises(ValueError):
        emit_plot([], tmp_path / "x.svg")
