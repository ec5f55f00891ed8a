import pytest

from conftest import dense_chain
from hnnsim.mapping import (
    CapacityError,
    ChipArrayError,
    CoreCoord,
    NocConfig,
    average_hops,
    cores_required,
    place_network,
)
from hnnsim.workload import Dense, Domain, LayerSpec, NetworkModel


def layer(n):
    return LayerSpec(Dense(n, n))


@pytest.mark.parametrize("n,expected", [(256, 1), (257, 2), (16_384, 64)])
def test_cores_required(noc, n, expected):
    assert cores_required(layer(n), noc) == expected


def test_single_layer_placement(noc):
    p = place_network(NetworkModel("one", [layer(256)]), noc)
    assert p.layers[0].cores == (CoreCoord(0, 0, 0),)
    assert p.layers[0].midpoint == (0.0, 0.0)


def test_full_chip_layers_spill(noc):
    p = place_network(dense_chain([16_384] * 3), noc)
    assert [lp.chip for lp in p.layers] == [0, 1]
    assert p.boundary_crossings(0) == 1


def test_row_major_midpoints(noc):
    p = place_network(dense_chain([4096] * 3), noc)
    assert [lp.chip for lp in p.layers] == [0, 0]
    assert {c.y for c in p.layers[0].cores} == {0, 1}
    assert {c.y for c in p.layers[1].cores} == {2, 3}
    assert p.layers[0].midpoint == (3.5, 0.5)
    assert p.layers[1].midpoint == (3.5, 2.5)


def test_midpoint_uses_global_x(noc):
    p = place_network(dense_chain([16_384] * 3), noc)
    # chip 1 is offset by one mesh width
    assert p.layers[1].midpoint == (3.5 + 8, 3.5)
    assert p.global_xy(p.layers[1].cores[0]) == (8, 0)


@pytest.mark.parametrize("a,b,h", [((2.0, 2.0), (2.0, 2.0), 1.0), ((0.0, 0.0), (3.0, 4.0), 8.0),
                                   ((3.5, 0.5), (3.5, 2.5), 3.0)])
def test_average_hops(a, b, h):
    assert average_hops(a, b) == h


def test_crossings_count_chip_distance():
    from hnnsim.mapping import LayerPlacement, Placement

    lps = tuple(LayerPlacement(c, (CoreCoord(c, 0, 0),), (8.0 * c, 0.0)) for c in (0, 0, 1, 4))
    p = Placement(lps, 8)
    assert [p.boundary_crossings(i) for i in range(3)] == [0, 1, 3]


def test_layer_larger_than_chip(noc):
    with pytest.raises(CapacityError):
        place_network(NetworkModel("big", [layer(16_385)]), noc)


def test_chip_array_exhausted():
    cfg = NocConfig(chips_x=1, chips_y=2)
    with pytest.raises(ChipArrayError):
        place_network(dense_chain([16_384] * 4), cfg)


def test_ring_and_interior_partition_the_mesh(noc):
    ring, inner = noc.ring_cores, noc.interior_cores
    assert len(ring) == 28 and len(inner) == 36
    assert set(ring).isdisjoint(inner)
    assert len(set(ring) | set(inner)) == 64
    assert ring[0] == (0, 0) and inner[0] == (1, 1)
    assert all(noc.is_peripheral(x, y) for x, y in ring)
    # clockwise walk: consecutive ring cores are mesh neighbours
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        assert abs(x0 - x1) + abs(y0 - y1) == 1


def test_wider_ring():
    cfg = NocConfig(peripheral_ring=2)
    assert len(cfg.ring_cores) == 28 + 20
    assert len(cfg.interior_cores) == 16


def test_hnn_regions(noc):
    model = dense_chain([4096] * 6)
    from hnnsim.workload import hnn_partition

    hnn = hnn_partition(model, place_network(model, noc))
    p = place_network(hnn, noc, hnn=True)
    for l, lp in zip(hnn.layers, p.layers):
        peripheral = [noc.is_peripheral(c.x, c.y) for c in lp.cores]
        assert all(peripheral) if l.spiking else not any(peripheral)
    # chip assignment follows the all-artificial packing
    assert [lp.chip for lp in p.layers] == [0, 0, 0, 0, 1]


def test_hnn_region_too_small(noc):
    # 29 cores cannot fit the 28-core ring
    model = NetworkModel("x", [LayerSpec(Dense(8, 29 * 256), domain=Domain.SPIKING)])
    with pytest.raises(CapacityError):
        place_network(model, noc, hnn=True)


def test_placement_dump(noc):
    d = place_network(dense_chain([4096] * 3), noc).to_dict()
    assert d["chips_used"] == 1
    assert d["layers"][1]["midpoint"] == [3.5, 2.5]
    assert len(d["layers"][0]["cores"]) == 16
