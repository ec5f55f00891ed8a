"""Packet-level X-Y routing on a mesh, used as a brute-force oracle.

The simulator walks every packet hop by hop (no contention, no queueing
delay) and counts the routers it visits, including the local-port delivery
at the destination. It also builds the channel dependency graph of a set of
routes and checks it for cycles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable

Coord = tuple[int, int]


def route_path(src: Coord, dst: Coord) -> list[Coord]:
    """Dimension-order route: all X movement first, then Y. Includes both endpoints."""
    x, y = src
    path = [(x, y)]
    step = 1 if dst[0] > x else -1
    while x != dst[0]:
        x += step
        path.append((x, y))
    step = 1 if dst[1] > y else -1
    while y != dst[1]:
        y += step
        path.append((x, y))
    return path


def route_path_yx(src: Coord, dst: Coord) -> list[Coord]:
    """Y-first routing; only for exercising the deadlock checker."""
    flipped = route_path((src[1], src[0]), (dst[1], dst[0]))
    return [(x, y) for y, x in flipped]


@dataclass
class _Packet:
    path: list[Coord]
    weight: float
    pos: int = 0


@dataclass
class MeshSim:
    width: int
    height: int
    router: Callable[[Coord, Coord], list[Coord]] = route_path
    queues: dict[Coord, deque] = field(default_factory=dict)
    injected: int = 0
    delivered: int = 0
    cycles: int = 0
    _weight: float = 0.0
    _weighted_hops: float = 0.0

    def _check(self, c: Coord) -> None:
        if not (0 <= c[0] < self.width and 0 <= c[1] < self.height):
            raise ValueError(f"{c} outside {self.width}x{self.height} mesh")

    def inject(self, src: Coord, dst: Coord, weight: float = 1.0) -> None:
        self._check(src)
        self._check(dst)
        pkt = _Packet(self.router(src, dst), weight)
        self.queues.setdefault(src, deque()).append(pkt)
        self.injected += 1

    def run(self, max_cycles: int = 1_000_000) -> None:
        """Advance every in-flight packet one router per cycle until all are delivered."""
        while any(self.queues.values()):
            if self.cycles >= max_cycles:
                raise RuntimeError("packets still in flight after max_cycles")
            self.cycles += 1
            moved: dict[Coord, deque] = {}
            for q in self.queues.values():
                while q:
                    pkt = q.popleft()
                    if pkt.pos == len(pkt.path) - 1:
                        # local-port delivery counts as the final hop
                        self.delivered += 1
                        self._weight += pkt.weight
                        self._weighted_hops += pkt.weight * (pkt.pos + 1)
                        continue
                    pkt.pos += 1
                    moved.setdefault(pkt.path[pkt.pos], deque()).append(pkt)
            self.queues = moved
        if self.delivered != self.injected:
            raise RuntimeError(f"{self.injected - self.delivered} packets lost")

    @property
    def mean_hops(self) -> float:
        return self._weighted_hops / self._weight


def _extent(traffic) -> tuple[int, int]:
    w = h = 1
    for src, dst, _ in traffic:
        w = max(w, src[0] + 1, dst[0] + 1)
        h = max(h, src[1] + 1, dst[1] + 1)
    return w, h


def measure_hops(traffic: Iterable[tuple[Coord, Coord, float]], width: int | None = None,
                 height: int | None = None) -> float:
    """Packet-weighted mean path length of ``(src, dst, count)`` flows."""
    traffic = [t for t in traffic if t[2] > 0]
    if not traffic:
        raise ValueError("traffic is empty")
    w, h = _extent(traffic)
    sim = MeshSim(width or w, height or h)
    for src, dst, count in traffic:
        sim.inject(src, dst, count)
    sim.run()
    return sim.mean_hops


def channel_dependencies(paths: Iterable[list[Coord]]) -> dict:
    """Map each directed link to the links a packet may request while holding it."""
    deps: dict[tuple[Coord, Coord], set] = {}
    for path in paths:
        links = list(zip(path, path[1:]))
        for a, b in zip(links, links[1:]):
            deps.setdefault(a, set()).add(b)
        for link in links:
            deps.setdefault(link, set())
    return deps


def check_deadlock_freedom(traffic, router: Callable[[Coord, Coord], list[Coord]] = route_path) -> bool:
    """True iff the channel dependency graph of the routed flows is acyclic."""
    paths = [router(src, dst) for src, dst, *_ in traffic]
    try:
        tuple(TopologicalSorter(channel_dependencies(paths)).static_order())
    except CycleError:
        return False
    return True


# -- traffic between two placed layers -------------------------------------

def layer_pair_traffic(src_cores, dst_cores, packets: float = 1.0, pattern: str = "matched"):
    """Flows between two layers' cores carrying ``packets`` in total.

    ``matched`` sends each source core's share to the destination cores
    holding the same fraction of the output index range (row-major element
    order is preserved). ``all_to_all`` spreads every source core uniformly
    over every destination core.
    """
    src_cores, dst_cores = list(src_cores), list(dst_cores)
    ns, nd = len(src_cores), len(dst_cores)
    flows: dict[tuple[Coord, Coord], float] = {}
    if pattern == "all_to_all":
        share = packets / (ns * nd)
        for s in src_cores:
            for d in dst_cores:
                flows[(s, d)] = flows.get((s, d), 0.0) + share
    elif pattern == "matched":
        # Split the unit interval at multiples of 1/ns and 1/nd; each piece
        # links one source core to one destination core.
        cuts = sorted({i * nd for i in range(ns + 1)} | {j * ns for j in range(nd + 1)})
        total = ns * nd
        for lo, hi in zip(cuts, cuts[1:]):
            s = src_cores[lo // nd]
            d = dst_cores[lo // ns]
            flows[(s, d)] = flows.get((s, d), 0.0) + packets * (hi - lo) / total
    else:
        raise ValueError(f"unknown traffic pattern {pattern!r}")
    return [(s, d, c) for (s, d), c in flows.items()]
