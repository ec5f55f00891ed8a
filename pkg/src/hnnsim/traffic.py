"""Expected packet counts per layer transition.

Traffic is attributed to the *source* layer: row ``i`` counts what layer ``i``
sends to layer ``i + 1``. The final layer has no consumer and sends nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mapping import NocConfig, Placement, average_hops
from .workload import Dense, LayerSpec, NetworkModel, neurons_out

# Payload width of one on-chip packet.
PAYLOAD_BITS = 8


def packets_per_activation(act_bits: int) -> int:
    return max(1, math.ceil(act_bits / PAYLOAD_BITS))


def local_packets(
    src_layer: LayerSpec,
    config: NocConfig | None = None,
    consumer_cores: int | None = None,
    consumer: LayerSpec | None = None,
) -> float:
    """Packets the source layer emits toward its consumer.

    An artificial output element travels as ``ceil(act_bits / 8)`` activation
    packets; a spiking neuron emits ``activity * T`` expected spike packets
    (``T`` when ``config.worst_case_spikes``).
    """
    config = config or NocConfig()
    n = neurons_out(src_layer)
    if src_layer.spiking:
        rate = 1.0 if config.worst_case_spikes else src_layer.activity
        count = n * rate * src_layer.timesteps
    else:
        count = float(n * packets_per_activation(src_layer.act_bits))
    if (
        config.multicast == "per-dest-core"
        and consumer is not None
        and consumer_cores is not None
        and isinstance(consumer.kind, Dense)
    ):
        count *= consumer_cores
    return count


def routed_packets(local: float, hops: float) -> float:
    return local * hops


def boundary_packets(local: float, crossings: int) -> float:
    return local * crossings


@dataclass(frozen=True)
class LayerTraffic:
    local_packets: float
    hops: float
    routed_packets: float
    crossings: int
    boundary_packets: float


@dataclass(frozen=True)
class TrafficReport:
    layers: tuple[LayerTraffic, ...]

    @property
    def local_packets(self) -> float:
        return sum(t.local_packets for t in self.layers)

    @property
    def routed_packets(self) -> float:
        return sum(t.routed_packets for t in self.layers)

    @property
    def boundary_packets(self) -> float:
        return sum(t.boundary_packets for t in self.layers)


def compute_traffic(model: NetworkModel, placement: Placement, config: NocConfig) -> TrafficReport:
    rows = []
    last = len(model.layers) - 1
    for i, layer in enumerate(model.layers):
        if i == last:
            rows.append(LayerTraffic(0.0, 0.0, 0.0, 0, 0.0))
            continue
        nxt = placement.layers[i + 1]
        local = local_packets(layer, config, len(nxt.cores), model.layers[i + 1])
        hops = average_hops(placement.layers[i].midpoint, nxt.midpoint)
        crossings = placement.boundary_crossings(i)
        rows.append(
            LayerTraffic(
                local_packets=local,
                hops=hops,
                routed_packets=routed_packets(local, hops),
                crossings=crossings,
                boundary_packets=boundary_packets(local, crossings),
            )
        )
    return TrafficReport(tuple(rows))
