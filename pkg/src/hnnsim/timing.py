"""Per-layer cycle counts, die-to-die overhead, and end-to-end latency."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mapping import NocConfig, Placement
from .traffic import TrafficReport
from .workload import NetworkModel, effective_ops, neurons_out

# Single-packet die-to-die latency measured on the synthesized link.
PIPELINE_LATENCY_FLOOR = 76


def _ceil(x: float) -> int:
    # Expected counts are products of decimal fractions; drop float noise
    # before rounding up so 409.99999999999994 does not become 411.
    return math.ceil(round(x, 6))


def _lanes(n: int, config: NocConfig) -> int:
    g = config.neurons_per_core
    return g * math.ceil(n / g)


def ann_layer_cycles(macs: float, n: int, config: NocConfig) -> int:
    if n < 1:
        raise ValueError("a layer has at least one neuron")
    return _ceil(macs * config.mac_cycles / _lanes(n, config))


def snn_layer_cycles(accs: float, n: int, config: NocConfig) -> int:
    if n < 1:
        raise ValueError("a layer has at least one neuron")
    return _ceil(accs * config.acc_cycles / _lanes(n, config))


def emio_cycles(p_b: float, n_c: int, config: NocConfig) -> int:
    """Serialize/deserialize cycles for ``p_b`` packets leaving ``n_c`` peripheral cores."""
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    if p_b < 0:
        raise ValueError("p_b must be >= 0")
    return math.floor(round(p_b / n_c, 6)) * config.ser_cycles + _ceil(p_b) * config.des_cycles


def pipeline_latency_floor() -> int:
    return PIPELINE_LATENCY_FLOOR


def crossing_cycles(p_b: float, n_c: int, config: NocConfig) -> int:
    """EMIO cost of one boundary traversal, with the pipeline floor when enabled."""
    if p_b <= 0:
        return 0
    cycles = emio_cycles(p_b, n_c, config)
    if config.emio_floor:
        cycles = max(cycles, config.emio_floor_cycles)
    return cycles


def speedup(baseline_cycles: float, candidate_cycles: float) -> float:
    if candidate_cycles <= 0:
        raise ValueError("candidate_cycles must be positive")
    return baseline_cycles / candidate_cycles


@dataclass(frozen=True)
class LayerLatency:
    compute_cycles: int
    emio_cycles: int
    cum_cycles: int


@dataclass(frozen=True)
class LatencyReport:
    layers: tuple[LayerLatency, ...]
    noc_freq_hz: float

    @property
    def compute_cycles(self) -> int:
        return sum(l.compute_cycles for l in self.layers)

    @property
    def emio_cycles(self) -> int:
        return sum(l.emio_cycles for l in self.layers)

    @property
    def total_cycles(self) -> int:
        return self.compute_cycles + self.emio_cycles

    @property
    def wall_seconds(self) -> float:
        return self.total_cycles / self.noc_freq_hz


def layer_compute_cycles(layer, config: NocConfig) -> int:
    n = neurons_out(layer)
    ops = effective_ops(layer)
    if layer.spiking:
        return snn_layer_cycles(ops, n, config)
    return ann_layer_cycles(ops, n, config)


def total_cycles(
    model: NetworkModel, placement: Placement, traffic: TrafficReport, config: NocConfig
) -> LatencyReport:
    """Layers run back to back; every chip boundary a transition crosses adds one EMIO traversal."""
    rows = []
    cum = 0
    for i, layer in enumerate(model.layers):
        compute = layer_compute_cycles(layer, config)
        t = traffic.layers[i]
        emio = 0
        if t.crossings:
            n_c = len(placement.layers[i].cores)
            emio = t.crossings * crossing_cycles(t.local_packets, n_c, config)
        cum += compute + emio
        rows.append(LayerLatency(compute, emio, cum))
    return LatencyReport(tuple(rows), config.noc_freq_hz)
