"""Layer-to-core placement on a row of chips, each an X-Y mesh of core tiles.

Layers are packed in order along X: cores fill row-major within a chip and a
layer that does not fit the remaining cores opens the next chip. Layers are
never split across chips, so chip boundaries fall between layers.

Global coordinates put chip ``c`` at x offset ``c * mesh_w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .workload import NetworkModel, neurons_out


class CapacityError(ValueError):
    """A single layer needs more cores than one chip (or chip region) provides."""


class ChipArrayError(CapacityError):
    """The model needs more chips than the configured array holds."""


@dataclass(frozen=True)
class NocConfig:
    mesh_w: int = 8
    mesh_h: int = 8
    neurons_per_core: int = 256
    axons_per_core: int = 256
    noc_freq_hz: float = 200e6
    chips_x: int = 16
    chips_y: int = 16
    peripheral_ring: int = 1
    ser_cycles: int = 38
    des_cycles: int = 38
    mac_cycles: int = 1
    acc_cycles: int = 1
    # Measured single-packet die-to-die latency, applied as a per-crossing floor.
    emio_floor: bool = True
    emio_floor_cycles: int = 76
    multicast: str = "unicast"
    worst_case_spikes: bool = False

    def __post_init__(self):
        for name in ("mesh_w", "mesh_h", "neurons_per_core", "axons_per_core", "chips_x", "chips_y"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.peripheral_ring < 0:
            raise ValueError("peripheral_ring must be >= 0")
        if self.noc_freq_hz <= 0:
            raise ValueError("noc_freq_hz must be positive")
        if self.multicast not in ("unicast", "per-dest-core"):
            raise ValueError(f"unknown multicast policy {self.multicast!r}")

    @property
    def cores_per_chip(self) -> int:
        return self.mesh_w * self.mesh_h

    @property
    def max_chips(self) -> int:
        return self.chips_x * self.chips_y

    @property
    def synapses_per_core(self) -> int:
        return self.neurons_per_core * self.axons_per_core

    def is_peripheral(self, x: int, y: int) -> bool:
        return min(x, y, self.mesh_w - 1 - x, self.mesh_h - 1 - y) < self.peripheral_ring

    @cached_property
    def ring_cores(self) -> tuple[tuple[int, int], ...]:
        """Peripheral cores, outermost ring first, each ring clockwise from its top-left corner."""
        out: list[tuple[int, int]] = []
        for k in range(self.peripheral_ring):
            x0, y0, x1, y1 = k, k, self.mesh_w - 1 - k, self.mesh_h - 1 - k
            if x0 > x1 or y0 > y1:
                break
            if y0 == y1:
                out += [(x, y0) for x in range(x0, x1 + 1)]
                continue
            if x0 == x1:
                out += [(x0, y) for y in range(y0, y1 + 1)]
                continue
            out += [(x, y0) for x in range(x0, x1 + 1)]
            out += [(x1, y) for y in range(y0 + 1, y1 + 1)]
            out += [(x, y1) for x in range(x1 - 1, x0 - 1, -1)]
            out += [(x0, y) for y in range(y1 - 1, y0, -1)]
        return tuple(out)

    @cached_property
    def interior_cores(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (x, y)
            for y in range(self.mesh_h)
            for x in range(self.mesh_w)
            if not self.is_peripheral(x, y)
        )


class CoreCoord(NamedTuple):
    chip: int
    x: int
    y: int


@dataclass(frozen=True)
class LayerPlacement:
    chip: int
    cores: tuple[CoreCoord, ...]
    midpoint: tuple[float, float]


@dataclass(frozen=True)
class Placement:
    layers: tuple[LayerPlacement, ...]
    mesh_w: int
    hnn: bool = False

    @property
    def chips_used(self) -> int:
        return self.layers[-1].chip + 1 if self.layers else 0

    def global_xy(self, core: CoreCoord) -> tuple[int, int]:
        return core.chip * self.mesh_w + core.x, core.y

    def boundary_crossings(self, layer_index: int) -> int:
        """Chip boundaries between layer ``layer_index`` and its successor."""
        return abs(self.layers[layer_index + 1].chip - self.layers[layer_index].chip)

    def to_dict(self) -> dict:
        return {
            "hnn": self.hnn,
            "chips_used": self.chips_used,
            "layers": [
                {
                    "chip": lp.chip,
                    "cores": [[c.x, c.y] for c in lp.cores],
                    "midpoint": list(lp.midpoint),
                }
                for lp in self.layers
            ],
        }


def cores_required(layer, config: NocConfig) -> int:
    return math.ceil(neurons_out(layer) / config.neurons_per_core)


def _midpoint(cores, mesh_w: int) -> tuple[float, float]:
    n = len(cores)
    sx = sum(c.chip * mesh_w + c.x for c in cores)
    sy = sum(c.y for c in cores)
    return sx / n, sy / n


def _chip_assignment(model: NetworkModel, config: NocConfig) -> list[tuple[int, int]]:
    """(chip, first row-major slot) per layer under sequential whole-layer packing."""
    capacity = config.cores_per_chip
    chip, used = 0, 0
    out = []
    for i, layer in enumerate(model.layers):
        need = cores_required(layer, config)
        if need > capacity:
            raise CapacityError(
                f"layer {i} ({layer.name or type(layer.kind).__name__}) needs {need} cores; "
                f"a chip has {capacity}"
            )
        if used + need > capacity:
            chip, used = chip + 1, 0
        if chip >= config.max_chips:
            raise ChipArrayError(
                f"model {model.name!r} needs more than {config.max_chips} chips"
            )
        out.append((chip, used))
        used += need
    return out


def place_network(model: NetworkModel, config: NocConfig, hnn: bool = False) -> Placement:
    """Place every layer of ``model``.

    With ``hnn`` the chip of each layer is taken from the all-artificial
    packing (so boundaries match the one used to choose spiking layers), and
    inside a chip spiking layers sit on the peripheral ring while artificial
    layers sit in the interior. When a chip's layers oversubscribe a region,
    allocation wraps around that region: the layers execute one after another,
    so later layers reuse the cores of earlier ones.
    """
    assignment = _chip_assignment(model, config)
    mesh_w = config.mesh_w
    placed = []

    if not hnn:
        for layer, (chip, start) in zip(model.layers, assignment):
            need = cores_required(layer, config)
            cores = tuple(
                CoreCoord(chip, s % mesh_w, s // mesh_w) for s in range(start, start + need)
            )
            placed.append(LayerPlacement(chip, cores, _midpoint(cores, mesh_w)))
        return Placement(tuple(placed), mesh_w, hnn=False)

    ring, interior = config.ring_cores, config.interior_cores
    cursors: dict[tuple[int, bool], int] = {}
    for i, (layer, (chip, _)) in enumerate(zip(model.layers, assignment)):
        need = cores_required(layer, config)
        region = ring if layer.spiking else interior
        if need > len(region):
            where = "peripheral" if layer.spiking else "interior"
            raise CapacityError(
                f"layer {i} ({layer.name or type(layer.kind).__name__}) needs {need} cores; "
                f"the {where} region has {len(region)}"
            )
        key = (chip, layer.spiking)
        start = cursors.get(key, 0)
        slots = [region[(start + j) % len(region)] for j in range(need)]
        cursors[key] = (start + need) % len(region)
        cores = tuple(CoreCoord(chip, x, y) for x, y in slots)
        placed.append(LayerPlacement(chip, cores, _midpoint(cores, mesh_w)))
    return Placement(tuple(placed), mesh_w, hnn=True)


def average_hops(prev_mid: tuple[float, float], cur_mid: tuple[float, float]) -> float:
    """Manhattan distance between layer midpoints plus the local-port hop."""
    return abs(prev_mid[0] - cur_mid[0]) + abs(prev_mid[1] - cur_mid[1]) + 1.0


def boundary_crossings(placement: Placement, layer_index: int) -> int:
    return placement.boundary_crossings(layer_index)
