import math

import pytest

from conftest import dense_chain
from hnnsim.mapping import NocConfig, place_network
from hnnsim.sim import simulate
from hnnsim.timing import (
    ann_layer_cycles,
    crossing_cycles,
    emio_cycles,
    layer_compute_cycles,
    pipeline_latency_floor,
    snn_layer_cycles,
    speedup,
    total_cycles,
)
from hnnsim.traffic import compute_traffic
from hnnsim.workload import load_workload

NOC = NocConfig()
LITERAL = NocConfig(emio_floor=False)


@pytest.mark.parametrize("macs,n,out", [(65_536, 256, 256), (256, 256, 1), (90_000, 300, 176)])
def test_ann_cycles(macs, n, out):
    assert ann_layer_cycles(macs, n, NOC) == out


@pytest.mark.parametrize("accs,n,out", [(209_715.2, 512, 410), (0, 512, 0), (512, 512, 1)])
def test_snn_cycles(accs, n, out):
    assert snn_layer_cycles(accs, n, NOC) == out


def test_float_noise_does_not_round_up():
    # 0.1 * 8 * 262144 in floating point lands just above 209715.2
    accs = 262_144 * 0.1 * 8
    assert snn_layer_cycles(accs, 512, NOC) == 410


@pytest.mark.parametrize("p,n,out", [(0, 8, 0), (8, 8, 342), (1, 8, 38)])
def test_emio_literal(p, n, out):
    assert emio_cycles(p, n, NOC) == out


@pytest.mark.parametrize("p,n,out", [(1, 8, 76), (0, 8, 0), (8, 8, 342)])
def test_crossing_with_floor(p, n, out):
    assert crossing_cycles(p, n, NOC) == out


def test_crossing_literal_mode():
    assert crossing_cycles(1, 8, LITERAL) == 38
    assert pipeline_latency_floor() == 76


@pytest.mark.parametrize("a,b,out", [(100, 100, 1.0), (152, 10, 15.2), (330, 100, 3.3)])
def test_speedup(a, b, out):
    assert speedup(a, b) == pytest.approx(out, rel=1e-15)


def test_speedup_rejects_zero():
    with pytest.raises(ValueError):
        speedup(1, 0)


def test_single_layer_total_is_compute():
    model = dense_chain([512, 512])
    p = place_network(model, NOC)
    lat = total_cycles(model, p, compute_traffic(model, p, NOC), NOC)
    assert lat.total_cycles == layer_compute_cycles(model.layers[0], NOC) == 512


def test_two_layers_one_crossing():
    model = dense_chain([16_384] * 3)
    p = place_network(model, NOC)
    lat = total_cycles(model, p, compute_traffic(model, p, NOC), NOC)
    c0 = layer_compute_cycles(model.layers[0], NOC)
    c1 = layer_compute_cycles(model.layers[1], NOC)
    expected_emio = max(math.floor(16_384 / 64) * 38 + 16_384 * 38, 76)
    assert lat.total_cycles == c0 + c1 + expected_emio
    assert lat.wall_seconds == lat.total_cycles / NOC.noc_freq_hz


def test_rwkv_hnn_golden():
    # locked from this implementation's first run; any formula change shows up here
    report = simulate(load_workload("rwkv6l512"), mode="hnn")
    assert report.total_cycles == 54_360
    assert report.chips_used == 2


def test_activity_monotone():
    model = load_workload("msresnet18")
    cycles = [simulate(model.with_overrides(activity=a), mode="hnn").total_cycles
              for a in (0.5, 0.25, 0.1, 0.05)]
    assert cycles == sorted(cycles, reverse=True)
