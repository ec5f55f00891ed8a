"""Analytical simulator for hybrid ANN/SNN inference on multi-chip 2D-mesh NoCs."""

from .clp import LifState, act_to_spikes, lif_run, lif_step, spikes_to_act
from .codec import EmioFrame, NocPacket, decode_packet, emio_deserialize, emio_serialize, encode_packet
from .energy import EnergyParams, total_energy
from .mapping import CapacityError, ChipArrayError, NocConfig, Placement, average_hops, place_network
from .sim import Comparison, SimReport, compare, simulate
from .timing import emio_cycles, total_cycles
from .traffic import compute_traffic
from .workload import (
    Conv,
    Dense,
    DepthwiseConv,
    Domain,
    LayerSpec,
    NetworkModel,
    Pool,
    WorkloadError,
    hnn_partition,
    load_workload,
    shipped_workloads,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "ChipArrayError", "Comparison", "Conv", "Dense", "DepthwiseConv", "Domain",
    "EmioFrame", "EnergyParams", "LayerSpec", "LifState", "NetworkModel", "NocConfig", "NocPacket",
    "Placement", "Pool", "SimReport", "WorkloadError", "act_to_spikes", "average_hops", "compare",
    "compute_traffic", "decode_packet", "emio_cycles", "emio_deserialize", "emio_serialize",
    "encode_packet", "hnn_partition", "lif_run", "lif_step", "load_workload", "place_network",
    "shipped_workloads", "simulate", "spikes_to_act", "total_cycles", "total_energy",
]
