import random

import pytest

from hnnsim.eventsim import (
    MeshSim,
    channel_dependencies,
    check_deadlock_freedom,
    layer_pair_traffic,
    measure_hops,
    route_path,
    route_path_yx,
)
from hnnsim.mapping import average_hops


def mean_xy(cores):
    return (sum(x for x, _ in cores) / len(cores), sum(y for _, y in cores) / len(cores))


def rows(y0, y1, w=8):
    return [(x, y) for y in range(y0, y1) for x in range(w)]


def test_route_local():
    assert route_path((2, 2), (2, 2)) == [(2, 2)]


def test_route_x_then_y():
    assert route_path((0, 0), (3, 4)) == [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2),
                                           (3, 3), (3, 4)]
    back = route_path((3, 4), (0, 0))
    assert len(back) == 8 and back[1] == (2, 4)


def test_single_flow_hops():
    assert measure_hops([((0, 0), (3, 4), 1.0)]) == 8
    assert measure_hops([((1, 1), (1, 1), 5.0)]) == 1.0


def test_sim_rejects_off_mesh():
    with pytest.raises(ValueError):
        MeshSim(4, 4).inject((0, 0), (4, 0))


def test_sim_weights_by_packets():
    flows = [((0, 0), (0, 0), 3.0), ((0, 0), (2, 0), 1.0)]
    assert measure_hops(flows) == pytest.approx((3 * 1 + 1 * 3) / 4)


def test_sim_counts_cycles():
    sim = MeshSim(8, 8)
    sim.inject((0, 0), (7, 7))
    sim.run()
    assert sim.delivered == 1 and sim.cycles == 15


def test_all_to_all_exhaustive_enumeration():
    a, b = rows(0, 2), rows(2, 4)
    oracle = measure_hops(layer_pair_traffic(a, b, pattern="all_to_all"))
    brute = sum(abs(s[0] - d[0]) + abs(s[1] - d[1]) + 1 for s in a for d in b) / (len(a) * len(b))
    assert oracle == pytest.approx(brute, rel=1e-12)
    assert brute == pytest.approx(5.625)
    # the midpoint estimate is 3, so uniform all-to-all traffic misses it by 47%
    assert average_hops(mean_xy(a), mean_xy(b)) == 3.0


def test_matched_same_shape_is_exact():
    a, b = rows(0, 2), rows(2, 4)
    assert measure_hops(layer_pair_traffic(a, b)) == pytest.approx(3.0, rel=1e-12)


def test_single_core_pairs_agree_exactly():
    for pattern in ("matched", "all_to_all"):
        flows = layer_pair_traffic([(1, 2)], [(5, 7)], 10.0, pattern)
        assert measure_hops(flows) == average_hops((1, 2), (5, 7)) == 10


def test_symmetric_translated_pairs_agree_exactly():
    rng = random.Random(3)
    for _ in range(20):
        w, h = rng.randint(1, 4), rng.randint(1, 4)
        x0, y0 = rng.randint(0, 8 - w), rng.randint(0, 8 - h)
        x1, y1 = rng.randint(0, 8 - w), rng.randint(0, 8 - h)
        a = [(x0 + i, y0 + j) for j in range(h) for i in range(w)]
        b = [(x1 + i, y1 + j) for j in range(h) for i in range(w)]
        flows = layer_pair_traffic(a, b)
        assert measure_hops(flows) == pytest.approx(average_hops(mean_xy(a), mean_xy(b)), rel=1e-12)


def test_matched_conserves_packets():
    flows = layer_pair_traffic(rows(0, 1)[:3], rows(1, 2)[:5], packets=7.0)
    assert sum(c for *_, c in flows) == pytest.approx(7.0)
    # each source core sends one third, each destination receives one fifth
    for src in rows(0, 1)[:3]:
        assert sum(c for s, _, c in flows if s == src) == pytest.approx(7 / 3)
    for dst in rows(1, 2)[:5]:
        assert sum(c for _, d, c in flows if d == dst) == pytest.approx(7 / 5)


def test_unknown_pattern():
    with pytest.raises(ValueError):
        layer_pair_traffic([(0, 0)], [(1, 1)], pattern="random")


def test_xy_routing_is_deadlock_free():
    mesh = [(x, y) for x in range(4) for y in range(4)]
    traffic = [(s, d, 1.0) for s in mesh for d in mesh]
    assert check_deadlock_freedom(traffic)


def test_checker_detects_cycles():
    # mixing XY and YX routes closes a dependency loop around a 2x2 square
    flows = [((0, 0), (1, 1)), ((1, 1), (0, 0)), ((1, 0), (0, 1)), ((0, 1), (1, 0))]
    paths = [route_path(*flows[0]), route_path_yx(*flows[1]), route_path(*flows[1]),
             route_path_yx(*flows[0]), route_path(*flows[2]), route_path_yx(*flows[3]),
             route_path(*flows[3]), route_path_yx(*flows[2])]
    deps = channel_dependencies(paths)
    from graphlib import CycleError, TopologicalSorter

    with pytest.raises(CycleError):
        tuple(TopologicalSorter(deps).static_order())


def test_wrapped_row_fixture_worst_case():
    # a 4-core layer wrapping from row 0 into row 1, followed by a 4-core layer in row 1:
    # the midpoints sit half a row apart while the real flows cross most of the mesh
    src = [(6, 0), (7, 0), (0, 1), (1, 1)]
    dst = [(2, 1), (3, 1), (4, 1), (5, 1)]
    analytical = average_hops(mean_xy(src), mean_xy(dst))
    oracle = measure_hops(layer_pair_traffic(src, dst), 8, 8)
    assert analytical == 1.5
    assert oracle == pytest.approx(5.5)
    assert abs(analytical - oracle) / oracle == pytest.approx(8 / 11)
