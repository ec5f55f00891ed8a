import csv
import io
import json

import pytest

from hnnsim.cli import main, run_sweep, validate_rows
from hnnsim.config import load_config
from hnnsim.mapping import NocConfig
from hnnsim.sim import SimReport, rows_from_csv, simulate
from hnnsim.workload import load_workload


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_table(capsys):
    code, out, _ = run(capsys, "simulate", "--workload", "msresnet18", "--mode", "hnn")
    assert code == 0
    assert "snn" in out and "total_cycles" in out


def test_simulate_files(tmp_path, capsys):
    code, _, _ = run(capsys, "simulate", "--workload", "rwkv6l512", "--out", str(tmp_path))
    assert code == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"report.csv", "report.json", "placement.json", "rwkv6l512_ann_layers.png"} <= names
    rep = SimReport.from_dict(json.loads((tmp_path / "report.json").read_text()))
    assert rows_from_csv((tmp_path / "report.csv").read_text()) == rep.rows
    assert rep == simulate(load_workload("rwkv6l512"), mode="ann")


def test_structured_and_csv_output(capsys):
    _, out, _ = run(capsys, "simulate", "--workload", "msresnet18", "--format", "structured")
    assert json.loads(out)["totals"]["mode"] == "ann"
    _, out, _ = run(capsys, "simulate", "--workload", "msresnet18", "--format", "csv")
    assert rows_from_csv(out) == simulate(load_workload("msresnet18")).rows


def test_emio_energy_zero_iff_single_chip(capsys):
    for args, single in ((["--noc.mesh_w", "16", "--noc.mesh_h", "16"], True), ([], False)):
        _, out, _ = run(capsys, "simulate", "--workload", "rwkv6l512", "--format", "structured", *args)
        totals = json.loads(out)["totals"]
        assert (totals["chips_used"] == 1) == single
        assert (totals["emio_j"] == 0) == single


def test_layer_override_flag(capsys):
    _, out, _ = run(capsys, "simulate", "--workload", "msresnet18", "--mode", "snn",
                    "--layer.activity", "0.05", "--format", "structured")
    expected = simulate(load_workload("msresnet18").with_overrides(activity=0.05), mode="snn")
    assert json.loads(out)["totals"]["total_cycles"] == expected.total_cycles


def test_compare(tmp_path, capsys):
    code, out, _ = run(capsys, "compare", "--workload", "efficientnetb4", "--format", "csv",
                       "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["mode"] for r in rows] == ["ann", "snn", "hnn"]
    assert float(rows[2]["speedup_vs_ann"]) >= 1.0
    assert (tmp_path / "efficientnetb4_compare.png").exists()
    doc = json.loads((tmp_path / "compare.json").read_text())
    assert set(doc["reports"]) == {"ann", "snn", "hnn"}


def test_sweep_rows_and_failures(tmp_path, capsys):
    code, out, err = run(capsys, "sweep", "--workload", "msresnet18", "--mode", "hnn",
                         "--sweep.grouping", "256,64", "--sweep.mesh", "8x8,4x4",
                         "--format", "csv", "--out", str(tmp_path), "--no-plot")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["grouping"], r["mesh"]) for r in rows] == [
        ("256", "8x8"), ("256", "4x4"), ("64", "8x8"), ("64", "4x4")]
    # a 4x4 mesh is too small for this model at either grouping
    assert [r["status"] for r in rows] == ["ok", "capacity", "ok", "capacity"]
    assert "needs" in rows[1]["error"] and "needs" in rows[3]["error"]
    assert not list(tmp_path.glob("*.png"))


def test_single_point_sweep_matches_simulate():
    cfg = load_config(overrides={"sweep.activity": "0.1"}, mode="hnn")
    model = load_workload("msresnet18")
    (row,) = run_sweep(model, cfg)
    rep = simulate(model.with_overrides(activity=0.1), mode="hnn")
    assert row["total_cycles"] == rep.total_cycles and row["total_j"] == rep.total_j


def test_sweep_parallel_keeps_order():
    cfg = load_config(overrides={"sweep.activity": "0.5,0.25,0.1,0.05", "sweep.act_bits": "8,16"},
                      mode="hnn")
    model = load_workload("msresnet18")
    assert run_sweep(model, cfg, jobs=3) == run_sweep(model, cfg, jobs=1)


def test_sweep_needs_axes(capsys):
    code, _, err = run(capsys, "sweep", "--workload", "msresnet18")
    assert code == 2 and "axis" in err


def test_exit_codes(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text('{"name": "empty", "layers": []}')
    assert run(capsys, "simulate", "--workload", str(empty))[0] == 2
    assert run(capsys, "simulate", "--workload", "nope")[0] == 2
    assert run(capsys, "simulate")[0] == 2
    assert run(capsys, "simulate", "--workload", "msresnet18", "--noc.mesh_w", "x")[0] == 2
    assert run(capsys, "simulate", "--workload", "msresnet18", "--noc.mesh_w", "2",
               "--noc.mesh_h", "2")[0] == 3
    assert run(capsys, "simulate", "--workload", "msresnet18", "--noc.chips_x", "1",
               "--noc.chips_y", "1")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--mode", "cnn"])
    assert exc.value.code == 2


def test_validate_reports_deviation(capsys):
    code, out, _ = run(capsys, "validate", "--workload", "msresnet18", "--format", "structured")
    doc = json.loads(out)
    assert len(doc["rows"]) == 18
    assert code == (1 if doc["failed"] else 0)
    # a loose enough tolerance passes
    assert run(capsys, "validate", "--workload", "msresnet18", "--tolerance", "10")[0] == 0


def test_validate_symmetric_rows_exact():
    rows = validate_rows(load_workload("rwkv6l512"), NocConfig())
    # 512-neuron layers sit on two cores each; same-shape neighbours match exactly
    exact = [r for r in rows if r["rel_dev"] < 1e-12]
    assert exact


def test_encode_decode(tmp_path, capsys):
    stream = tmp_path / "s.bin"
    code, out, _ = run(capsys, "encode", "--dx", "-3", "--dy", "5", "--ptype", "1", "--axon", "17",
                       "--payload", "9", "--tag", "2", "--out", str(stream))
    assert code == 0
    word = out.split()[1]
    code, out, _ = run(capsys, "decode", word)
    assert "dx=-3 dy=5 ptype=1 axon=17 payload=9" in out
    code, out, _ = run(capsys, "decode", "--stream", str(stream))
    assert "tag=2" in out and "tick=9" in out


def test_decode_errors(tmp_path, capsys):
    assert run(capsys, "decode", "xyz")[0] == 2
    assert run(capsys, "decode")[0] == 2
    assert run(capsys, "encode", "--dx", "0", "--dy", "0", "--ptype", "1", "--payload", "200")[0] == 2
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"\x00" * 3)
    assert run(capsys, "decode", "--stream", str(bad))[0] == 2
