"""Network workloads as ordered layer sequences, and their operation counts.

Artificial layers are counted in MACs; spiking layers in expected ACCs
(synaptic ops scaled by firing activity and the timestep window).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Union

VALID_BITS = (1, 4, 8, 16, 32)

DEFAULT_ACTIVITY = 0.1
DEFAULT_TIMESTEPS = 8
# Largest window the 4-bit delivery tick can address.
MAX_TIMESTEPS = 16

ANN_WEIGHT_BITS = 32
SNN_WEIGHT_BITS = 8


class WorkloadError(ValueError):
    """Malformed layer, model, or workload file."""


class Domain(enum.Enum):
    ARTIFICIAL = "ann"
    SPIKING = "snn"


def _check_dims(obj) -> None:
    for name, value in vars(obj).items():
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise WorkloadError(
                f"{type(obj).__name__}.{name} must be an integer >= 1, got {value!r}"
            )


@dataclass(frozen=True)
class Dense:
    fan_in: int
    fan_out: int

    def __post_init__(self):
        _check_dims(self)

    def synaptic_ops(self) -> int:
        return self.fan_in * self.fan_out

    def neurons_out(self) -> int:
        return self.fan_out

    @property
    def out_channels(self) -> int:
        return self.fan_out


@dataclass(frozen=True)
class Conv:
    c_in: int
    c_out: int
    kernel: int
    h_out: int
    w_out: int

    def __post_init__(self):
        _check_dims(self)

    def synaptic_ops(self) -> int:
        return self.h_out * self.w_out * self.c_out * self.kernel**2 * self.c_in

    def neurons_out(self) -> int:
        return self.h_out * self.w_out * self.c_out

    @property
    def out_channels(self) -> int:
        return self.c_out


@dataclass(frozen=True)
class DepthwiseConv:
    c_in: int
    kernel: int
    h_out: int
    w_out: int

    def __post_init__(self):
        _check_dims(self)

    def synaptic_ops(self) -> int:
        return self.h_out * self.w_out * self.c_in * self.kernel**2

    def neurons_out(self) -> int:
        return self.h_out * self.w_out * self.c_in

    @property
    def out_channels(self) -> int:
        return self.c_in


@dataclass(frozen=True)
class Pool:
    # Multiplication-free window reduction, counted as kernel^2 ops per output.
    c_out: int
    kernel: int
    h_out: int
    w_out: int

    def __post_init__(self):
        _check_dims(self)

    def synaptic_ops(self) -> int:
        return self.h_out * self.w_out * self.c_out * self.kernel**2

    def neurons_out(self) -> int:
        return self.h_out * self.w_out * self.c_out

    @property
    def out_channels(self) -> int:
        return self.c_out


LayerKind = Union[Dense, Conv, DepthwiseConv, Pool]

_KIND_NAMES = {Dense: "dense", Conv: "conv", DepthwiseConv: "dwconv", Pool: "pool"}
_KINDS_BY_NAME = {v: k for k, v in _KIND_NAMES.items()}


@dataclass(frozen=True)
class LayerSpec:
    """One layer: shape, domain, and the parameters that only matter when spiking.

    ``weight_bits`` left as ``None`` resolves to the domain's native weight
    precision (32 bit artificial, 8 bit spiking).
    """

    kind: LayerKind
    domain: Domain = Domain.ARTIFICIAL
    activity: float = DEFAULT_ACTIVITY
    timesteps: int = DEFAULT_TIMESTEPS
    weight_bits: int | None = None
    act_bits: int = 8
    name: str = ""

    def __post_init__(self):
        if type(self.kind) not in _KIND_NAMES:
            raise WorkloadError(f"unknown layer kind {self.kind!r}")
        if not isinstance(self.domain, Domain):
            raise WorkloadError(f"domain must be a Domain, got {self.domain!r}")
        if not (0.0 < self.activity <= 1.0):
            raise WorkloadError(f"activity must lie in (0, 1], got {self.activity!r}")
        if not isinstance(self.timesteps, int) or not 1 <= self.timesteps <= MAX_TIMESTEPS:
            raise WorkloadError(
                f"timesteps must be an integer in [1, {MAX_TIMESTEPS}], got {self.timesteps!r}"
            )
        if self.weight_bits is not None and self.weight_bits not in VALID_BITS:
            raise WorkloadError(f"weight_bits must be one of {VALID_BITS}")
        if self.act_bits not in VALID_BITS:
            raise WorkloadError(f"act_bits must be one of {VALID_BITS}")

    @property
    def spiking(self) -> bool:
        return self.domain is Domain.SPIKING

    @property
    def effective_timesteps(self) -> int:
        return self.timesteps if self.spiking else 1

    @property
    def resolved_weight_bits(self) -> int:
        if self.weight_bits is not None:
            return self.weight_bits
        return SNN_WEIGHT_BITS if self.spiking else ANN_WEIGHT_BITS

    def with_domain(self, domain: Domain) -> "LayerSpec":
        if domain is self.domain:
            return self
        return replace(self, domain=domain)


def synaptic_ops(layer: LayerSpec) -> int:
    return layer.kind.synaptic_ops()


def effective_ops(layer: LayerSpec) -> float:
    """MACs for artificial layers, expected ACCs for spiking ones (not rounded)."""
    ops = synaptic_ops(layer)
    if layer.spiking:
        return ops * layer.activity * layer.timesteps
    return float(ops)


def neurons_out(layer: LayerSpec) -> int:
    return layer.kind.neurons_out()


def _input_matches(prev: LayerSpec, cur: LayerSpec) -> bool:
    kind = cur.kind
    if isinstance(kind, Dense):
        return kind.fan_in == neurons_out(prev)
    if isinstance(kind, (Conv, DepthwiseConv)):
        return kind.c_in == prev.kind.out_channels
    return kind.c_out == prev.kind.out_channels


@dataclass(frozen=True)
class NetworkModel:
    name: str
    layers: tuple[LayerSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise WorkloadError(f"model {self.name!r} has no layers")
        for i in range(1, len(self.layers)):
            if not _input_matches(self.layers[i - 1], self.layers[i]):
                raise WorkloadError(
                    f"model {self.name!r}: layer {i} ({self.layers[i].name or self.layers[i].kind}) "
                    f"does not accept the output of layer {i - 1}"
                )

    def __len__(self) -> int:
        return len(self.layers)

    def with_domains(self, domains) -> "NetworkModel":
        layers = tuple(l.with_domain(d) for l, d in zip(self.layers, domains, strict=True))
        return replace(self, layers=layers)

    def all_domain(self, domain: Domain) -> "NetworkModel":
        return self.with_domains([domain] * len(self.layers))

    def with_overrides(self, **changes) -> "NetworkModel":
        """Apply the same field changes (activity, timesteps, act_bits...) to every layer."""
        if not changes:
            return self
        return replace(self, layers=tuple(replace(l, **changes) for l in self.layers))

    def total_synaptic_ops(self) -> int:
        return sum(synaptic_ops(l) for l in self.layers)


# -- workload files ---------------------------------------------------------

_DIM_FIELDS = {
    "dense": ("fan_in", "fan_out"),
    "conv": ("c_in", "c_out", "kernel", "h_out", "w_out"),
    "dwconv": ("c_in", "kernel", "h_out", "w_out"),
    "pool": ("c_out", "kernel", "h_out", "w_out"),
}


def layer_from_dict(d: dict) -> LayerSpec:
    try:
        kind_name = d["kind"]
        kind_cls = _KINDS_BY_NAME[kind_name]
        dims = {k: d[k] for k in _DIM_FIELDS[kind_name]}
        return LayerSpec(
            kind=kind_cls(**dims),
            domain=Domain(d.get("domain", "ann")),
            activity=float(d.get("activity", DEFAULT_ACTIVITY)),
            timesteps=int(d.get("timesteps", DEFAULT_TIMESTEPS)),
            weight_bits=d.get("weight_bits"),
            act_bits=int(d.get("act_bits", 8)),
            name=str(d.get("name", "")),
        )
    except WorkloadError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkloadError(f"bad layer entry {d!r}: {exc}") from exc


def layer_to_dict(layer: LayerSpec) -> dict:
    kind_name = _KIND_NAMES[type(layer.kind)]
    out = {"name": layer.name, "kind": kind_name, "domain": layer.domain.value}
    out.update({k: getattr(layer.kind, k) for k in _DIM_FIELDS[kind_name]})
    out.update(activity=layer.activity, timesteps=layer.timesteps, act_bits=layer.act_bits)
    if layer.weight_bits is not None:
        out["weight_bits"] = layer.weight_bits
    return out


def model_from_dict(d: dict) -> NetworkModel:
    if not isinstance(d, dict) or "layers" not in d:
        raise WorkloadError("workload document needs a 'layers' list")
    if not isinstance(d["layers"], list):
        raise WorkloadError("'layers' must be a list")
    return NetworkModel(
        name=str(d.get("name", "unnamed")),
        layers=tuple(layer_from_dict(x) for x in d["layers"]),
    )


def model_to_dict(model: NetworkModel) -> dict:
    return {"name": model.name, "layers": [layer_to_dict(l) for l in model.layers]}


def shipped_workloads() -> list[str]:
    root = resources.files("hnnsim") / "workloads"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_workload(source: str | Path) -> NetworkModel:
    """Load a workload from a file path, or by name from the shipped set."""
    path = Path(source)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        res = resources.files("hnnsim") / "workloads" / f"{source}.json"
        if not res.is_file():
            raise WorkloadError(f"no workload file or shipped workload named {str(source)!r}")
        text = res.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkloadError(f"{source}: {exc}") from exc
    return model_from_dict(doc)


def save_workload(model: NetworkModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n", encoding="utf-8")


def hnn_partition(model: NetworkModel, placement) -> NetworkModel:
    """Re-tag the transmit/receive pair at every chip boundary as spiking.

    ``placement`` is the chip assignment of the all-artificial variant of
    ``model``; each retagged layer keeps its own activity and timesteps.
    Layers already spiking stay spiking, so the result is idempotent.
    """
    chips = [lp.chip for lp in placement.layers]
    if len(chips) != len(model.layers):
        raise WorkloadError(
            f"placement covers {len(chips)} layers but model {model.name!r} has {len(model.layers)}"
        )
    domains = [l.domain for l in model.layers]
    for i in range(len(chips) - 1):
        if chips[i] != chips[i + 1]:
            domains[i] = Domain.SPIKING
            domains[i + 1] = Domain.SPIKING
    return model.with_domains(domains)
