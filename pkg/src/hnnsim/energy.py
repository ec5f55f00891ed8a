"""Dynamic energy per inference, split into PE, MEM, router and EMIO parts.

Everything is expressed relative to one MAC. The absolute ``e_mac`` default
is a placeholder in the range of 65 nm 8-bit MAC figures; only ratios between
reports are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .traffic import TrafficReport
from .workload import LayerSpec, NetworkModel, effective_ops, neurons_out

POTENTIAL_BITS = 8


@dataclass(frozen=True)
class EnergyParams:
    e_mac: float = 3.1e-12
    r_acc: float = 0.06
    r_boundary_per_hop: float = 224.0
    r_boundary_vs_mac: float = 10.0
    # None derives the value from e_mac, which keeps reports scale-free.
    e_hop: float | None = None
    e_sram_bit_read: float | None = None
    e_sram_bit_write: float | None = None
    sram_read_ratio: float = 0.05
    sram_write_ratio: float = 0.06

    def __post_init__(self):
        for name in ("e_mac", "r_acc", "r_boundary_per_hop", "r_boundary_vs_mac",
                     "sram_read_ratio", "sram_write_ratio"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("e_hop", "e_sram_bit_read", "e_sram_bit_write"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def hop_energy(self) -> float:
        if self.e_hop is not None:
            return self.e_hop
        return self.r_boundary_vs_mac / self.r_boundary_per_hop * self.e_mac

    @property
    def boundary_energy(self) -> float:
        return self.r_boundary_per_hop * self.hop_energy

    @property
    def read_energy(self) -> float:
        if self.e_sram_bit_read is not None:
            return self.e_sram_bit_read
        return self.sram_read_ratio * self.e_mac

    @property
    def write_energy(self) -> float:
        if self.e_sram_bit_write is not None:
            return self.e_sram_bit_write
        return self.sram_write_ratio * self.e_mac

    def scaled(self, k: float) -> "EnergyParams":
        """Every absolute energy multiplied by ``k``; ratios untouched."""
        def mul(v):
            return None if v is None else v * k
        return replace(
            self,
            e_mac=self.e_mac * k,
            e_hop=mul(self.e_hop),
            e_sram_bit_read=mul(self.e_sram_bit_read),
            e_sram_bit_write=mul(self.e_sram_bit_write),
        )


def pe_energy(layer: LayerSpec, ops: float, params: EnergyParams) -> float:
    if layer.spiking:
        return ops * params.r_acc * params.e_mac
    return ops * params.e_mac


def mem_energy(layer: LayerSpec, ops: float, params: EnergyParams) -> float:
    """SRAM traffic of a weight-stationary core.

    Each synaptic op reads one weight; a spiking op also reads and writes the
    8-bit membrane potential. Each output neuron writes one ``act_bits``
    result. An idle layer touches no memory.
    """
    if ops <= 0:
        return 0.0
    read_bits = ops * layer.resolved_weight_bits
    write_bits = neurons_out(layer) * layer.act_bits
    if layer.spiking:
        read_bits += ops * POTENTIAL_BITS
        write_bits += ops * POTENTIAL_BITS
    return read_bits * params.read_energy + write_bits * params.write_energy


def router_energy(routed: float, params: EnergyParams) -> float:
    return routed * params.hop_energy


def emio_energy(boundary: float, params: EnergyParams) -> float:
    # Same per-packet cost for activation and spike frames.
    return boundary * params.boundary_energy


@dataclass(frozen=True)
class LayerEnergy:
    pe_j: float
    mem_j: float
    router_j: float
    emio_j: float

    @property
    def total_j(self) -> float:
        return self.pe_j + self.mem_j + self.router_j + self.emio_j


@dataclass(frozen=True)
class EnergyReport:
    layers: tuple[LayerEnergy, ...]

    def _sum(self, attr: str) -> float:
        return sum(getattr(l, attr) for l in self.layers)

    @property
    def pe_j(self) -> float:
        return self._sum("pe_j")

    @property
    def mem_j(self) -> float:
        return self._sum("mem_j")

    @property
    def router_j(self) -> float:
        return self._sum("router_j")

    @property
    def emio_j(self) -> float:
        return self._sum("emio_j")

    @property
    def total_j(self) -> float:
        return self._sum("total_j")


def total_energy(model: NetworkModel, traffic: TrafficReport, params: EnergyParams) -> EnergyReport:
    rows = []
    for layer, t in zip(model.layers, traffic.layers, strict=True):
        ops = effective_ops(layer)
        rows.append(
            LayerEnergy(
                pe_j=pe_energy(layer, ops, params),
                mem_j=mem_energy(layer, ops, params),
                router_j=router_energy(t.routed_packets, params),
                emio_j=emio_energy(t.boundary_packets, params),
            )
        )
    return EnergyReport(tuple(rows))
