"""Circuit view of deposited traces: nets, connectivity, resistance, DRC.

Printed liquid-metal segments that touch share a potential, so nets are
connected components of the traces under a width-aware touch predicate:
two segments touch when their stroked outlines (centreline capsules of
radius width/2) approach within a tolerance. Resistance estimates treat
each segment as a uniform conductor of its simulated cross-section.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import CircuitError, ConfigError, UnknownPadError

Point = tuple[float, float]


def _closest_points(p1: Point, p2: Point, q1: Point, q2: Point):
    """Closest points between segments p1p2 and q1q2, with their distance.

    Clamped-parametric method; returns (distance, point_on_p, point_on_q).
    """
    px, py = p2[0] - p1[0], p2[1] - p1[1]
    qx, qy = q2[0] - q1[0], q2[1] - q1[1]
    wx, wy = p1[0] - q1[0], p1[1] - q1[1]
    a = px * px + py * py
    b = px * qx + py * qy
    c = qx * qx + qy * qy
    d = px * wx + py * wy
    e = qx * wx + qy * wy
    den = a * c - b * b
    candidates = []
    if den > 1e-14 * max(a, c, 1.0):
        s = (b * e - c * d) / den
        t = (a * e - b * d) / den
        candidates.append((min(1.0, max(0.0, s)), min(1.0, max(0.0, t))))
    # end-clamped cases; also cover degenerate (point-like) segments
    for t in (0.0, 1.0):
        s = (-d + b * t) / a if a > 0 else 0.0
        candidates.append((min(1.0, max(0.0, s)), t))
    for s in (0.0, 1.0):
        t = (e + b * s) / c if c > 0 else 0.0
        candidates.append((s, min(1.0, max(0.0, t))))
    best = None
    for s, t in candidates:
        gx = p1[0] + s * px - (q1[0] + t * qx)
        gy = p1[1] + s * py - (q1[1] + t * qy)
        d2 = gx * gx + gy * gy
        if best is None or d2 < best[0]:
            best = (d2, (p1[0] + s * px, p1[1] + s * py),
                    (q1[0] + t * qx, q1[1] + t * qy))
    return math.sqrt(best[0]), best[1], best[2]


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    ll = dx * dx + dy * dy
    if ll == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    t = min(1.0, max(0.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / ll))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def outline_clearance(t1, t2) -> float:
    """Gap between the stroked outlines of two trace segments, in mm.

    Negative values mean the outlines overlap.
    """
    d, _, _ = _closest_points(t1.start, t1.end, t2.start, t2.end)
    return d - 0.5e3 * (t1.width_m + t2.width_m)


def segments_touch(t1, t2, tolerance: float) -> bool:
    return outline_clearance(t1, t2) <= tolerance


@dataclass(frozen=True)
class Net:
    """Segments that share a potential, with the pads they touch.

    pad_segments records, per touching pad, which member segments it
    contacts — the entry points for resistance queries.
    """

    net_id: int
    segments: tuple[int, ...]
    pads: tuple[str, ...] = ()
    touch_tolerance: float = 0.0
    pad_segments: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def segments_for_pad(self, name: str) -> tuple[int, ...]:
        for pad, segs in self.pad_segments:
            if pad == name:
                return segs
        raise UnknownPadError(f"pad {name!r} does not touch net {self.net_id}")


@dataclass(frozen=True)
class CircuitNets:
    nets: tuple[Net, ...]
    touch_tolerance: float

    def net_of_segment(self, index: int) -> Net:
        for net in self.nets:
            if index in net.segments:
                return net
        raise CircuitError(f"segment {index} belongs to no net")

    def net_of_pad(self, name: str) -> Net:
        for net in self.nets:
            if name in net.pads:
                return net
        raise UnknownPadError(f"pad {name!r} touches no trace")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def extract_nets(traces, touch_tolerance: float,
                 pads: dict[str, Point] | None = None) -> CircuitNets:
    """Partition trace segments into nets by outline touch.

    Net ids are assigned in order of each net's lowest member index, so
    the result is deterministic and invariant to how unions are
    discovered. A pad belongs to a net when it lies within the tolerance
    of a member segment's stroked outline.
    """
    if touch_tolerance < 0:
        raise ConfigError("touch tolerance must be >= 0")
    traces = tuple(traces)
    uf = _UnionFind(len(traces))
    for i in range(len(traces)):
        for j in range(i + 1, len(traces)):
            if segments_touch(traces[i], traces[j], touch_tolerance):
                uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(len(traces)):
        groups.setdefault(uf.find(i), []).append(i)
    members = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    pad_items = sorted((pads or {}).items())
    nets = []
    for nid, seg_ids in enumerate(members):
        touching = []
        for name, point in pad_items:
            hit = tuple(
                k for k in seg_ids
                if _point_segment_distance(point, traces[k].start,
                                           traces[k].end)
                <= 0.5e3 * traces[k].width_m + touch_tolerance)
            if hit:
                touching.append((name, hit))
        nets.append(Net(net_id=nid, segments=tuple(seg_ids),
                        pads=tuple(name for name, _ in touching),
                        touch_tolerance=touch_tolerance,
                        pad_segments=tuple(touching)))
    return CircuitNets(nets=tuple(nets), touch_tolerance=touch_tolerance)


def check_connectivity(nets: CircuitNets,
                       pad_pairs) -> tuple[tuple[str, str, bool], ...]:
    """For each (pad_a, pad_b) pair, whether both pads share one net."""
    results = []
    for a, b in pad_pairs:
        net_a = nets.net_of_pad(a)
        net_b = nets.net_of_pad(b)
        results.append((a, b, net_a.net_id == net_b.net_id))
    return tuple(results)


@dataclass(frozen=True)
class ResistanceEstimate:
    ohms: float
    path: tuple[int, ...]
    approximate: bool


def _segment_resistance(trace, resistivity: float) -> float:
    area = trace.cross_section_m2
    if area <= 0.0:
        raise CircuitError("zero-area segment in resistance path")
    return resistivity * trace.length_mm * 1e-3 / area


def estimate_resistance(net: Net, pad_a: str, pad_b: str,
                        resistivity: float, traces) -> ResistanceEstimate:
    """Series resistance along the least-resistance path between two pads.

    Each member segment contributes rho * length / cross_section, lengths
    in metres. On a branched or looping net the single-path model ignores
    parallel branches, so the estimate carries approximate=True there.
    """
    if resistivity <= 0:
        raise CircuitError("resistivity must be > 0")
    traces = tuple(traces)
    starts = net.segments_for_pad(pad_a)
    targets = set(net.segments_for_pad(pad_b))
    members = net.segments
    res = {i: _segment_resistance(traces[i], resistivity) for i in members}
    adjacency: dict[int, list[int]] = {i: [] for i in members}
    edge_count = 0
    for x, i in enumerate(members):
        for j in members[x + 1:]:
            if segments_touch(traces[i], traces[j], net.touch_tolerance):
                adjacency[i].append(j)
                adjacency[j].append(i)
                edge_count += 1
    branched = (edge_count != len(members) - 1 or
                any(len(v) > 2 for v in adjacency.values()))

    heap = [(res[i], i, (i,)) for i in sorted(starts)]
    heapq.heapify(heap)
    settled: set[int] = set()
    while heap:
        cost, node, path = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        if node in targets:
            return ResistanceEstimate(ohms=cost, path=path,
                                      approximate=branched)
        for nb in sorted(adjacency[node]):
            if nb not in settled:
                heapq.heappush(heap, (cost + res[nb], nb, path + (nb,)))
    raise CircuitError(
        f"pads {pad_a!r} and {pad_b!r} are not connected within net "
        f"{net.net_id}")


@dataclass(frozen=True)
class DrcViolation:
    kind: str                 # "min-width" or "clearance-short-risk"
    location: Point           # mm
    measured: float
    limit: float


@dataclass(frozen=True)
class DrcResult:
    violations: tuple[DrcViolation, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def drc(traces, min_width: float, min_clearance: float,
        nets: CircuitNets) -> DrcResult:
    """Design-rule check: minimum width and inter-net clearance, in mm.

    Width violations flag individual segments narrower than min_width.
    Clearance violations flag pairs of segments on distinct nets whose
    stroked outlines come closer than min_clearance (short risk).
    Violations are sorted by location for deterministic output.
    """
    if min_width <= 0 or min_clearance <= 0:
        raise ConfigError("DRC limits must be > 0")
    traces = tuple(traces)
    net_of = {}
    for net in nets.nets:
        for k in net.segments:
            net_of[k] = net.net_id
    violations = []
    for k, t in enumerate(traces):
        width_mm = t.width_m * 1e3
        if width_mm < min_width:
            mid = ((t.start[0] + t.end[0]) / 2.0, (t.start[1] + t.end[1]) / 2.0)
            violations.append(DrcViolation(kind="min-width", location=mid,
                                           measured=width_mm,
                                           limit=min_width))
    for i in range(len(traces)):
        for j in range(i + 1, len(traces)):
            if net_of.get(i) == net_of.get(j):
                continue
            d, pi, pj = _closest_points(traces[i].start, traces[i].end,
                                        traces[j].start, traces[j].end)
            gap = d - 0.5e3 * (traces[i].width_m + traces[j].width_m)
            if gap < min_clearance:
                loc = ((pi[0] + pj[0]) / 2.0, (pi[1] + pj[1]) / 2.0)
                violations.append(DrcViolation(kind="clearance-short-risk",
                                               location=loc, measured=gap,
                                               limit=min_clearance))
    violations.sort(key=lambda v: (v.location[0], v.location[1], v.kind,
                                   v.measured))
    return DrcResult(violations=tuple(violations))
