"""End-to-end evaluation of a workload in ANN, SNN, or HNN mode."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, fields

from .energy import EnergyParams, total_energy
from .mapping import NocConfig, Placement, place_network
from .timing import speedup, total_cycles
from .traffic import compute_traffic
from .workload import Domain, NetworkModel, effective_ops, hnn_partition, neurons_out

MODES = ("ann", "snn", "hnn")


def prepare(model: NetworkModel, noc: NocConfig, mode: str) -> tuple[NetworkModel, Placement]:
    """Apply the mode's domain policy and place the result."""
    if mode == "ann":
        m = model.all_domain(Domain.ARTIFICIAL)
        return m, place_network(m, noc)
    if mode == "snn":
        m = model.all_domain(Domain.SPIKING)
        return m, place_network(m, noc)
    if mode == "hnn":
        reference = place_network(model.all_domain(Domain.ARTIFICIAL), noc)
        m = hnn_partition(model, reference)
        return m, place_network(m, noc, hnn=True)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class LayerRow:
    layer: int
    name: str
    kind: str
    domain: str
    chip: int
    cores: int
    neurons: int
    ops: float
    local_packets: float
    hops: float
    routed_packets: float
    crossings: int
    boundary_packets: float
    compute_cycles: int
    emio_cycles: int
    cum_cycles: int
    wall_us: float
    pe_j: float
    mem_j: float
    router_j: float
    emio_j: float
    total_j: float


COLUMNS = tuple(f.name for f in fields(LayerRow))
_INT_COLUMNS = {f.name for f in fields(LayerRow) if f.type == "int"}
_STR_COLUMNS = {"name", "kind", "domain"}


@dataclass(frozen=True)
class SimReport:
    workload: str
    mode: str
    rows: tuple[LayerRow, ...]
    chips_used: int
    noc_freq_hz: float
    meta: dict = field(default_factory=dict)

    @property
    def total_cycles(self) -> int:
        return self.rows[-1].cum_cycles if self.rows else 0

    @property
    def compute_cycles(self) -> int:
        return sum(r.compute_cycles for r in self.rows)

    @property
    def emio_cycles(self) -> int:
        return sum(r.emio_cycles for r in self.rows)

    @property
    def wall_seconds(self) -> float:
        return self.total_cycles / self.noc_freq_hz

    def total(self, column: str) -> float:
        return sum(getattr(r, column) for r in self.rows)

    @property
    def total_j(self) -> float:
        return self.total("total_j")

    def summary(self) -> dict:
        return {
            "workload": self.workload,
            "mode": self.mode,
            "layers": len(self.rows),
            "chips_used": self.chips_used,
            "spiking_layers": sum(r.domain == "snn" for r in self.rows),
            "compute_cycles": self.compute_cycles,
            "emio_cycles": self.emio_cycles,
            "total_cycles": self.total_cycles,
            "wall_us": self.wall_seconds * 1e6,
            "local_packets": self.total("local_packets"),
            "routed_packets": self.total("routed_packets"),
            "boundary_packets": self.total("boundary_packets"),
            "pe_j": self.total("pe_j"),
            "mem_j": self.total("mem_j"),
            "router_j": self.total("router_j"),
            "emio_j": self.total("emio_j"),
            "total_j": self.total_j,
        }

    def to_dict(self) -> dict:
        return {
            "workload": self.workload,
            "mode": self.mode,
            "chips_used": self.chips_used,
            "noc_freq_hz": self.noc_freq_hz,
            "meta": self.meta,
            "totals": self.summary(),
            "layers": [asdict(r) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimReport":
        return cls(
            workload=d["workload"],
            mode=d["mode"],
            rows=tuple(LayerRow(**r) for r in d["layers"]),
            chips_used=d["chips_used"],
            noc_freq_hz=d["noc_freq_hz"],
            meta=d.get("meta", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        totals = self.summary()
        row = []
        for c in COLUMNS:
            if c == "layer":
                row.append("total")
            elif c in totals:
                row.append(_fmt(totals[c]))
            elif c in ("cores", "neurons", "ops", "crossings"):
                row.append(_fmt(self.total(c)))
            elif c == "cum_cycles":
                row.append(str(self.total_cycles))
            else:
                row.append("")
        w.writerow(row)
        return buf.getvalue()


def _fmt(v) -> str:
    # repr round-trips floats exactly
    return repr(v) if isinstance(v, float) else str(v)


def rows_from_csv(text: str) -> tuple[LayerRow, ...]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        if rec["layer"] == "total":
            continue
        vals = {}
        for c in COLUMNS:
            raw = rec[c]
            if c in _STR_COLUMNS:
                vals[c] = raw
            elif c in _INT_COLUMNS:
                vals[c] = int(raw)
            else:
                vals[c] = float(raw)
        rows.append(LayerRow(**vals))
    return tuple(rows)


def simulate(
    model: NetworkModel,
    noc: NocConfig | None = None,
    energy: EnergyParams | None = None,
    mode: str = "ann",
) -> SimReport:
    noc = noc or NocConfig()
    energy = energy or EnergyParams()
    m, placement = prepare(model, noc, mode)
    traffic = compute_traffic(m, placement, noc)
    latency = total_cycles(m, placement, traffic, noc)
    joules = total_energy(m, traffic, energy)
    rows = []
    for i, layer in enumerate(m.layers):
        t, lat, e, lp = traffic.layers[i], latency.layers[i], joules.layers[i], placement.layers[i]
        rows.append(
            LayerRow(
                layer=i,
                name=layer.name,
                kind=type(layer.kind).__name__,
                domain=layer.domain.value,
                chip=lp.chip,
                cores=len(lp.cores),
                neurons=neurons_out(layer),
                ops=effective_ops(layer),
                local_packets=t.local_packets,
                hops=t.hops,
                routed_packets=t.routed_packets,
                crossings=t.crossings,
                boundary_packets=t.boundary_packets,
                compute_cycles=lat.compute_cycles,
                emio_cycles=lat.emio_cycles,
                cum_cycles=lat.cum_cycles,
                wall_us=lat.cum_cycles / noc.noc_freq_hz * 1e6,
                pe_j=e.pe_j,
                mem_j=e.mem_j,
                router_j=e.router_j,
                emio_j=e.emio_j,
                total_j=e.total_j,
            )
        )
    return SimReport(
        workload=model.name,
        mode=mode,
        rows=tuple(rows),
        chips_used=placement.chips_used,
        noc_freq_hz=noc.noc_freq_hz,
    )


@dataclass(frozen=True)
class Comparison:
    reports: dict

    @property
    def baseline(self) -> SimReport:
        return self.reports["ann"]

    def speedup(self, mode: str) -> float:
        return speedup(self.baseline.total_cycles, self.reports[mode].total_cycles)

    def energy_efficiency(self, mode: str) -> float:
        return self.baseline.total_j / self.reports[mode].total_j

    def table(self) -> list[dict]:
        out = []
        for mode, r in self.reports.items():
            s = r.summary()
            s["speedup_vs_ann"] = self.speedup(mode)
            s["energy_eff_vs_ann"] = self.energy_efficiency(mode)
            out.append(s)
        return out


def compare(model: NetworkModel, noc: NocConfig | None = None,
            energy: EnergyParams | None = None) -> Comparison:
    return Comparison({mode: simulate(model, noc, energy, mode) for mode in MODES})
