"""Command-line entry point.

Exit codes: 0 ok, 1 validation tolerance exceeded, 2 parse/config/workload
error, 3 placement does not fit the chip array.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .codec import (
    FRAME_BITS,
    PACKET_BITS,
    EmioFrame,
    FieldRangeError,
    FrameAlignmentError,
    NocPacket,
    decode_frame,
    decode_packet,
    encode_frame,
    encode_packet,
    read_bitstream,
    write_bitstream,
)
from .config import LAYER_OVERRIDES, SWEEP_AXES, ConfigError, RunConfig, apply_point, field_types, load_config, sweep_points
from .energy import EnergyParams
from .eventsim import layer_pair_traffic, measure_hops
from .mapping import CapacityError, NocConfig, average_hops
from .sim import MODES, compare, prepare, simulate
from .workload import NetworkModel, WorkloadError, load_workload

EXIT_OK, EXIT_TOLERANCE, EXIT_PARSE, EXIT_CAPACITY = 0, 1, 2, 3

TABLE_COLUMNS = ("layer", "name", "domain", "chip", "cores", "ops", "local_packets", "hops",
                 "crossings", "compute_cycles", "emio_cycles", "cum_cycles", "total_j")
COMPARE_COLUMNS = ("mode", "chips_used", "spiking_layers", "total_cycles", "emio_cycles",
                   "wall_us", "total_j", "speedup_vs_ann", "energy_eff_vs_ann")
SWEEP_COLUMNS = (*SWEEP_AXES, "status", "mode", "chips_used", "spiking_layers", "total_cycles",
                 "wall_us", "total_j", "speedup_vs_ann", "energy_eff_vs_ann", "error")
VALIDATE_COLUMNS = ("src", "dst", "src_chip", "dst_chip", "analytical", "oracle", "rel_dev", "ok")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


# -- formatting ---------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    return "" if v is None else str(v)


def format_table(rows: list[dict], columns) -> str:
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def format_csv(rows: list[dict], columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else ("" if v is None else v)
                    for v in (r.get(c) for c in columns)])
    return buf.getvalue()


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- shared setup -------------------------------------------------------------

def _overrides(args) -> dict:
    return {k: v for k, v in vars(args).items() if "." in k}


def _setup(args) -> tuple[RunConfig, NetworkModel, Path | None]:
    cfg = load_config(args.config, _overrides(args), getattr(args, "mode", None))
    if not args.workload:
        raise CliError("--workload is required")
    model = load_workload(args.workload)
    if cfg.layer:
        model = model.with_overrides(**cfg.layer)
    out = None
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
    return cfg, model, out


def _plot(fn, *a) -> None:
    from . import plotting  # imported lazily so table-only runs skip matplotlib

    getattr(plotting, fn)(*a)


# -- subcommands --------------------------------------------------------------

def cmd_simulate(args) -> int:
    cfg, model, out = _setup(args)
    report = simulate(model, cfg.noc, cfg.energy, cfg.mode)
    _, placement = prepare(model, cfg.noc, cfg.mode)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    elif args.format == "structured":
        sys.stdout.write(report.to_json())
    else:
        rows = [{c: getattr(r, c) for c in TABLE_COLUMNS} for r in report.rows]
        sys.stdout.write(format_table(rows, TABLE_COLUMNS))
        sys.stdout.write(format_table([report.summary()], ("workload", "mode", "chips_used",
                                                         "total_cycles", "wall_us", "total_j")))
    if out is not None:
        (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        (out / "placement.json").write_text(_dump(placement.to_dict()), encoding="utf-8")
        if not args.no_plot:
            _plot("plot_layer_report", report, out)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg, model, out = _setup(args)
    comp = compare(model, cfg.noc, cfg.energy)
    table = comp.table()
    doc = {"workload": model.name, "comparison": table,
           "reports": {m: r.to_dict() for m, r in comp.reports.items()}}
    if args.format == "csv":
        sys.stdout.write(format_csv(table, COMPARE_COLUMNS))
    elif args.format == "structured":
        sys.stdout.write(_dump(doc))
    else:
        sys.stdout.write(format_table(table, COMPARE_COLUMNS))
    if out is not None:
        (out / "compare.csv").write_text(format_csv(table, COMPARE_COLUMNS), encoding="utf-8")
        (out / "compare.json").write_text(_dump(doc), encoding="utf-8")
        if not args.no_plot:
            _plot("plot_comparison", comp, out)
    return EXIT_OK


def evaluate_point(model: NetworkModel, cfg: RunConfig, point: dict) -> dict:
    """One sweep row. Failures become rows with status 'error' instead of aborting."""
    row = {axis: (f"{point[axis][0]}x{point[axis][1]}" if axis == "mesh" else point[axis])
           for axis in point}
    row["mode"] = cfg.mode
    try:
        pcfg = apply_point(cfg, point)
        m = model.with_overrides(**pcfg.layer)
        rep = simulate(m, pcfg.noc, pcfg.energy, pcfg.mode)
        base = rep if pcfg.mode == "ann" else simulate(m, pcfg.noc, pcfg.energy, "ann")
    except CapacityError as exc:
        return {**row, "status": "capacity", "error": str(exc)}
    except (ValueError, ConfigError) as exc:
        return {**row, "status": "error", "error": str(exc)}
    s = rep.summary()
    row.update(
        status="ok",
        chips_used=s["chips_used"],
        spiking_layers=s["spiking_layers"],
        total_cycles=s["total_cycles"],
        wall_us=s["wall_us"],
        total_j=s["total_j"],
        speedup_vs_ann=base.total_cycles / rep.total_cycles,
        energy_eff_vs_ann=base.total_j / rep.total_j,
        error="",
    )
    return row


def run_sweep(model: NetworkModel, cfg: RunConfig, jobs: int = 1) -> list[dict]:
    if not cfg.sweep:
        raise CliError("sweep needs at least one axis (e.g. --sweep.activity 0.5,0.1)")
    points = sweep_points(cfg)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map() yields in submission order, so rows stay deterministic
            return list(pool.map(evaluate_point, [model] * len(points), [cfg] * len(points), points))
    return [evaluate_point(model, cfg, p) for p in points]


def cmd_sweep(args) -> int:
    cfg, model, out = _setup(args)
    rows = run_sweep(model, cfg, args.jobs)
    axes = [a for a in SWEEP_AXES if a in cfg.sweep]
    columns = (*axes, *SWEEP_COLUMNS[len(SWEEP_AXES):])
    doc = {"workload": model.name, "mode": cfg.mode, "axes": axes, "rows": rows}
    if args.format == "csv":
        sys.stdout.write(format_csv(rows, columns))
    elif args.format == "structured":
        sys.stdout.write(_dump(doc))
    else:
        sys.stdout.write(format_table(rows, [c for c in columns if c != "error"]))
        for r in rows:
            if r["status"] != "ok":
                print(f"point {[r[a] for a in axes]}: {r['error']}", file=sys.stderr)
    if out is not None:
        (out / "sweep.csv").write_text(format_csv(rows, columns), encoding="utf-8")
        (out / "sweep.json").write_text(_dump(doc), encoding="utf-8")
        if not args.no_plot:
            _plot("plot_sweep", rows, axes, out, model.name)
    return EXIT_OK


def validate_rows(model: NetworkModel, noc: NocConfig, mode: str = "ann",
                  pattern: str = "matched", tolerance: float = 0.15) -> list[dict]:
    """Analytical midpoint hops vs the packet-walking oracle for every layer transition."""
    m, placement = prepare(model, noc, mode)
    rows = []
    for i in range(len(m.layers) - 1):
        a, b = placement.layers[i], placement.layers[i + 1]
        flows = layer_pair_traffic([placement.global_xy(c) for c in a.cores],
                                   [placement.global_xy(c) for c in b.cores], 1.0, pattern)
        oracle = measure_hops(flows)
        analytical = average_hops(a.midpoint, b.midpoint)
        dev = abs(analytical - oracle) / oracle
        rows.append({"src": i, "dst": i + 1, "src_chip": a.chip, "dst_chip": b.chip,
                     "analytical": analytical, "oracle": oracle, "rel_dev": dev,
                     "ok": dev <= tolerance})
    return rows


def cmd_validate(args) -> int:
    cfg, model, out = _setup(args)
    rows = validate_rows(model, cfg.noc, cfg.mode, args.pattern, args.tolerance)
    bad = [r for r in rows if not r["ok"]]
    worst = max((r["rel_dev"] for r in rows), default=0.0)
    doc = {"workload": model.name, "mode": cfg.mode, "pattern": args.pattern,
           "tolerance": args.tolerance, "worst_rel_dev": worst, "failed": len(bad), "rows": rows}
    if args.format == "csv":
        sys.stdout.write(format_csv(rows, VALIDATE_COLUMNS))
    elif args.format == "structured":
        sys.stdout.write(_dump(doc))
    else:
        sys.stdout.write(format_table(rows, VALIDATE_COLUMNS))
        print(f"{len(rows) - len(bad)}/{len(rows)} transitions within {args.tolerance:.0%}; "
              f"worst deviation {worst:.1%}")
    if out is not None:
        (out / "validate.csv").write_text(format_csv(rows, VALIDATE_COLUMNS), encoding="utf-8")
        (out / "validate.json").write_text(_dump(doc), encoding="utf-8")
    return EXIT_TOLERANCE if bad else EXIT_OK


def _describe(p: NocPacket) -> str:
    kind = f"spike tick={p.tick}" if p.tick is not None else f"activation={p.payload}"
    return f"dx={p.dx} dy={p.dy} ptype={p.ptype} axon={p.axon} payload={p.payload} ({kind})"


def cmd_encode(args) -> int:
    pkt = NocPacket(args.dx, args.dy, args.ptype, args.axon, args.payload)
    word = encode_packet(pkt)
    print(f"packet 0x{word:09x}  {word:0{PACKET_BITS}b}")
    print(f"  {_describe(pkt)}")
    frame = EmioFrame(args.tag, pkt)
    fword = encode_frame(frame)
    print(f"frame  0x{fword:010x}  tag={args.tag}")
    if args.out:
        n = write_bitstream(args.out, [frame])
        print(f"wrote {n} bytes to {args.out}")
    return EXIT_OK


def _parse_hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError as exc:
        raise CliError(f"not a hexadecimal word: {text!r}") from exc


def cmd_decode(args) -> int:
    if args.stream:
        frames = read_bitstream(args.stream)
        for i, f in enumerate(frames):
            print(f"frame {i}: tag={f.tag} {_describe(f.packet)}")
        return EXIT_OK
    if not args.words:
        raise CliError("give hexadecimal words or --stream FILE")
    for text in args.words:
        word = _parse_hex(text)
        if args.frame:
            f = decode_frame(word)
            print(f"{text}: tag={f.tag} {_describe(f.packet)}")
        else:
            print(f"{text}: {_describe(decode_packet(word))}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_run_options(p: argparse.ArgumentParser, with_mode: bool = True) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--workload", help="workload JSON path or shipped name")
    if with_mode:
        p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--out", help="directory for report files and figures")
    p.add_argument("--format", choices=("table", "csv", "structured"), default="table")
    p.add_argument("--no-plot", action="store_true", help="skip figures when --out is given")
    for section, cls in (("noc", NocConfig), ("energy", EnergyParams)):
        g = p.add_argument_group(f"{section} overrides")
        for name in field_types(cls):
            g.add_argument(f"--{section}.{name}", dest=f"{section}.{name}",
                           default=argparse.SUPPRESS, metavar="V")
    g = p.add_argument_group("layer overrides (applied to every layer)")
    for name in LAYER_OVERRIDES:
        g.add_argument(f"--layer.{name}", dest=f"layer.{name}", default=argparse.SUPPRESS, metavar="V")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hnnsim", description="Hybrid ANN/SNN multi-chip NoC simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="evaluate one workload in one mode")
    _add_run_options(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="ANN, SNN and HNN side by side, ANN as baseline")
    _add_run_options(p, with_mode=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="Cartesian parameter sweep")
    _add_run_options(p)
    g = p.add_argument_group("sweep axes (comma-separated values)")
    for axis in SWEEP_AXES:
        g.add_argument(f"--sweep.{axis}", dest=f"sweep.{axis}", default=argparse.SUPPRESS,
                       metavar="LIST")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="analytical hops vs packet-walking oracle")
    _add_run_options(p)
    p.add_argument("--pattern", choices=("matched", "all_to_all"), default="matched")
    p.add_argument("--tolerance", type=float, default=0.15)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("encode", help="pack packet fields into a word")
    p.add_argument("--dx", type=int, required=True)
    p.add_argument("--dy", type=int, required=True)
    p.add_argument("--ptype", type=int, choices=(0, 1), default=0)
    p.add_argument("--axon", type=int, default=0)
    p.add_argument("--payload", type=int, default=0)
    p.add_argument("--tag", type=int, default=0, help="3-bit frame tag")
    p.add_argument("--out", help="also write a one-frame bitstream file")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="unpack hexadecimal words or a bitstream file")
    p.add_argument("words", nargs="*", help="hexadecimal words")
    p.add_argument("--frame", action="store_true", help=f"words are {FRAME_BITS}-bit frames")
    p.add_argument("--stream", help="bitstream file written by encode --out")
    p.set_defaults(func=cmd_decode)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"hnnsim: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CliError as exc:
        print(f"hnnsim: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, WorkloadError, FieldRangeError, FrameAlignmentError, OSError) as exc:
        print(f"hnnsim: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
