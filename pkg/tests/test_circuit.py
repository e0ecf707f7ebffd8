"""Net extraction, connectivity, resistance estimates and design rules."""

import math

import numpy as np
import pytest
import scipy.ndimage

from lmprint import MachineSettings, extract_nets, get_sample, plan, \
    rasterize, simulate
from lmprint.circuit import check_connectivity, drc, estimate_resistance, \
    outline_clearance, segments_touch
from lmprint.errors import CircuitError, UnknownPadError
from lmprint.simulator import TraceSegment

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


def _trace(start, end, width_mm=0.2, flux=1e-12, speed=40.0):
    return TraceSegment(
        start=start, end=end, width_m=width_mm * 1e-3, flux_m3_s=flux,
        creep=0.0, contact_angle_deg=120.0, speed_mm_s=speed,
        pressure_g=94.0, flags=())


def _flood_count(traces, scale):
    img = rasterize(traces, scale)
    _, count = scipy.ndimage.label(img.cells, structure=EIGHT_CONNECTED)
    return count


def test_outline_clearance_subtracts_half_widths():
    a = _trace((0.0, 0.0), (10.0, 0.0), width_mm=0.2)
    b = _trace((0.0, 1.0), (10.0, 1.0), width_mm=0.4)
    assert outline_clearance(a, b) == pytest.approx(1.0 - 0.1 - 0.2)
    assert segments_touch(a, b, 0.7001)
    assert not segments_touch(a, b, 0.6999)


def test_outline_clearance_negative_for_overlap():
    a = _trace((0.0, 0.0), (10.0, 0.0))
    b = _trace((5.0, -5.0), (5.0, 5.0))
    assert outline_clearance(a, b) == pytest.approx(-0.2)


def test_crossing_traces_form_one_net():
    traces = [_trace((0.0, 0.0), (10.0, 0.0)),
              _trace((5.0, -5.0), (5.0, 5.0))]
    nets = extract_nets(traces, 0.0)
    assert len(nets.nets) == 1
    assert nets.nets[0].segments == (0, 1)


def test_distant_traces_form_two_nets():
    traces = [_trace((0.0, 0.0), (10.0, 0.0)),
              _trace((0.0, 5.0), (10.0, 5.0))]
    nets = extract_nets(traces, 0.0)
    assert len(nets.nets) == 2
    assert [n.segments for n in nets.nets] == [(0,), (1,)]


def test_touch_tolerance_bridges_small_gaps():
    traces = [_trace((0.0, 0.0), (10.0, 0.0)),
              _trace((10.25, 0.0), (20.0, 0.0))]  # 0.05 mm outline gap
    assert len(extract_nets(traces, 0.0).nets) == 2
    assert len(extract_nets(traces, 0.05).nets) == 1


def test_net_ids_use_lowest_member_index():
    traces = [_trace((0.0, 10.0), (10.0, 10.0)),   # isolated
              _trace((0.0, 0.0), (10.0, 0.0)),
              _trace((10.0, 0.0), (20.0, 0.0))]
    nets = extract_nets(traces, 0.0)
    assert [(n.net_id, n.segments) for n in nets.nets] == \
        [(0, (0,)), (1, (1, 2))]
    assert nets.net_of_segment(2).net_id == 1


def test_partition_is_permutation_invariant():
    rng = np.random.default_rng(99)
    base = []
    for _ in range(12):
        p = rng.uniform(0.0, 30.0, size=2)
        ang = rng.uniform(0.0, 2 * math.pi)
        q = p + 4.0 * np.array([math.cos(ang), math.sin(ang)])
        base.append(_trace(tuple(p), tuple(q)))
    ref = extract_nets(base, 0.1)
    ref_groups = {frozenset((base[i].start, base[i].end)
                            for i in net.segments)
                  for net in ref.nets}
    order = rng.permutation(len(base))
    shuffled = [base[i] for i in order]
    got = extract_nets(shuffled, 0.1)
    got_groups = {frozenset((shuffled[i].start, shuffled[i].end)
                            for i in net.segments)
                  for net in got.nets}
    assert got_groups == ref_groups


def test_pads_attach_to_their_nets():
    traces = [_trace((0.0, 0.0), (10.0, 0.0)),
              _trace((0.0, 5.0), (10.0, 5.0))]
    nets = extract_nets(traces, 0.0,
                        pads={"A": (0.0, 0.0), "B": (10.0, 5.0)})
    assert nets.net_of_pad("A").net_id == 0
    assert nets.net_of_pad("B").net_id == 1
    assert nets.net_of_pad("A").segments_for_pad("A") == (0,)
    with pytest.raises(UnknownPadError):
        nets.net_of_pad("A").segments_for_pad("B")


def test_floating_pad_is_unknown():
    traces = [_trace((0.0, 0.0), (10.0, 0.0))]
    nets = extract_nets(traces, 0.0, pads={"X": (50.0, 50.0)})
    assert nets.nets[0].pads == ()
    with pytest.raises(UnknownPadError):
        nets.net_of_pad("X")


def test_check_connectivity_pairs():
    traces = [_trace((0.0, 0.0), (10.0, 0.0)),
              _trace((10.0, 0.0), (10.0, 10.0)),
              _trace((0.0, 20.0), (10.0, 20.0))]
    nets = extract_nets(traces, 0.0, pads={
        "A": (0.0, 0.0), "B": (10.0, 10.0), "C": (0.0, 20.0)})
    got = check_connectivity(nets, [("A", "B"), ("A", "C"), ("B", "C")])
    assert got == (("A", "B", True), ("A", "C", False), ("B", "C", False))


def test_grid_antenna_is_one_net_matching_flood_fill():
    tp = plan(get_sample("grid-antenna"), MachineSettings(10.0, 30.0))
    result = simulate(tp)
    nets = extract_nets(result.traces, 0.05,
                        pads=get_sample("grid-antenna").pads)
    assert len(nets.nets) == 1
    assert _flood_count(result.traces, 0.05) == 1


def test_ic_sketch_has_seven_nets():
    drawing = get_sample("ic-sketch")
    tp = plan(drawing, MachineSettings(10.0, 30.0))
    result = simulate(tp)
    nets = extract_nets(result.traces, 0.05, pads=drawing.pads)
    assert len(nets.nets) == 7
    pairs = check_connectivity(nets, [("L1", "B1"), ("L1", "L2")])
    assert pairs[0][2] is True
    assert pairs[1][2] is False
    assert _flood_count(result.traces, 0.02) == 7


class TestResistance:
    def test_single_segment(self):
        # cross-section flux/speed = 0.04 m^3/s / 0.04 m/s = 1 m^2,
        # so one metre of trace at unit resistivity reads exactly 1 ohm
        traces = [_trace((0.0, 0.0), (1000.0, 0.0), flux=0.04, speed=40.0)]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (1000.0, 0.0)})
        est = estimate_resistance(nets.nets[0], "A", "B", 1.0, traces)
        assert est.ohms == pytest.approx(1.0, rel=1e-12)
        assert est.path == (0,)
        assert est.approximate is False

    def test_series_segments_add(self):
        traces = [_trace((0.0, 0.0), (1000.0, 0.0), flux=0.04),
                  _trace((1000.0, 0.0), (2000.0, 0.0), flux=0.04)]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (2000.0, 0.0)})
        est = estimate_resistance(nets.nets[0], "A", "B", 1.0, traces)
        assert est.ohms == pytest.approx(2.0, rel=1e-12)
        assert est.path == (0, 1)

    def test_linear_in_resistivity(self):
        traces = [_trace((0.0, 0.0), (60.0, 0.0))]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (60.0, 0.0)})
        r1 = estimate_resistance(nets.nets[0], "A", "B", 1e-7, traces).ohms
        r2 = estimate_resistance(nets.nets[0], "A", "B", 3e-7, traces).ohms
        assert r2 == pytest.approx(3.0 * r1, rel=1e-12)

    def test_branched_net_flags_approximate(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0)),
                  _trace((10.0, 0.0), (20.0, 0.0)),
                  _trace((10.0, 0.0), (10.0, 10.0))]  # spur off the middle
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (20.0, 0.0)})
        est = estimate_resistance(nets.nets[0], "A", "B", 1.0, traces)
        assert est.approximate is True
        assert est.path == (0, 1)  # spur not part of the shortest path

    def test_shortest_path_matches_brute_force(self):
        # lattice of segments with unequal widths; enumerate all simple
        # paths over the touch graph as an oracle for the reported path
        rng = np.random.default_rng(20260826)
        pts = [(0.0, 0.0), (10.0, 0.0), (20.0, 0.0),
               (0.0, 10.0), (10.0, 10.0), (20.0, 10.0)]
        links = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]
        traces = [_trace(pts[i], pts[j],
                         flux=float(rng.uniform(0.01, 0.09)))
                  for i, j in links]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (20.0, 10.0)})
        net = nets.nets[0]
        est = estimate_resistance(net, "A", "B", 1.0, traces)
        assert est.approximate is True

        def cost(i):
            t = traces[i]
            return 1.0 * (t.length_mm * 1e-3) / (t.flux_m3_s / 0.04)

        touching = {i: [j for j in range(len(traces)) if j != i
                        and segments_touch(traces[i], traces[j], 0.0)]
                    for i in range(len(traces))}
        starts = net.segments_for_pad("A")
        ends = set(net.segments_for_pad("B"))
        best = math.inf
        stack = [(s, (s,), cost(s)) for s in starts]
        while stack:
            node, path, acc = stack.pop()
            if node in ends:
                best = min(best, acc)
                continue
            for nxt in touching[node]:
                if nxt not in path:
                    stack.append((nxt, path + (nxt,), acc + cost(nxt)))
        assert est.ohms == pytest.approx(best, rel=1e-9)

    def test_zero_area_segment_rejected(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0), flux=0.0)]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (10.0, 0.0)})
        with pytest.raises(CircuitError):
            estimate_resistance(nets.nets[0], "A", "B", 1.0, traces)

    def test_pad_on_other_net_rejected(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0)),
                  _trace((0.0, 5.0), (10.0, 5.0))]
        nets = extract_nets(traces, 0.0,
                            pads={"A": (0.0, 0.0), "B": (10.0, 5.0)})
        with pytest.raises(UnknownPadError):
            estimate_resistance(nets.net_of_pad("A"), "A", "B", 1.0, traces)


class TestDrc:
    def test_clean_layout_passes(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0), width_mm=0.2),
                  _trace((0.0, 5.0), (10.0, 5.0), width_mm=0.2)]
        nets = extract_nets(traces, 0.0)
        result = drc(traces, 0.1, 0.1, nets)
        assert result.passed
        assert result.violations == ()

    def test_min_width_violation(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0), width_mm=0.08)]
        nets = extract_nets(traces, 0.0)
        result = drc(traces, 0.1, 0.1, nets)
        assert not result.passed
        assert len(result.violations) == 1
        v = result.violations[0]
        assert v.kind == "min-width"
        assert v.measured == pytest.approx(0.08)
        assert v.limit == 0.1
        assert v.location == (5.0, 0.0)  # midpoint of the thin trace

    def test_clearance_violation_between_nets(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0), width_mm=0.2),
                  _trace((0.0, 0.25), (10.0, 0.25), width_mm=0.2)]
        nets = extract_nets(traces, 0.0)
        assert len(nets.nets) == 2
        result = drc(traces, 0.1, 0.1, nets)
        assert len(result.violations) == 1
        v = result.violations[0]
        assert v.kind == "clearance-short-risk"
        assert v.measured == pytest.approx(0.05)

    def test_same_net_proximity_is_fine(self):
        traces = [_trace((0.0, 0.0), (10.0, 0.0)),
                  _trace((10.0, 0.0), (10.0, 0.25))]
        nets = extract_nets(traces, 0.0)
        assert len(nets.nets) == 1
        assert drc(traces, 0.1, 0.5, nets).passed

    def test_violations_sorted_and_deterministic(self):
        traces = [_trace((20.0, 0.0), (30.0, 0.0), width_mm=0.05),
                  _trace((0.0, 0.0), (10.0, 0.0), width_mm=0.06),
                  _trace((0.0, 0.22), (10.0, 0.22), width_mm=0.06)]
        nets = extract_nets(traces, 0.0)
        result = drc(traces, 0.1, 0.2, nets)
        keys = [(v.location[0], v.location[1], v.kind, v.measured)
                for v in result.violations]
        assert keys == sorted(keys)
        again = drc(list(reversed(traces)), 0.1, 0.2,
                    extract_nets(list(reversed(traces)), 0.0))
        assert [(v.kind, v.measured) for v in again.violations] == \
            [(v.kind, v.measured) for v in result.violations]


def test_random_layouts_match_flood_fill():
    """Net count from the touch graph equals the raster component count."""
    rng = np.random.default_rng(42)
    scale = 0.02
    accepted = 0
    attempts = 0
    while accepted < 50:
        attempts += 1
        assert attempts < 1000
        n = int(rng.integers(3, 9))
        traces = []
        for _ in range(n):
            p = rng.uniform(0.0, 16.0, size=2)
            ang = rng.uniform(0.0, 2 * math.pi)
            length = rng.uniform(2.0, 7.0)
            q = (float(p[0] + length * math.cos(ang)),
                 float(p[1] + length * math.sin(ang)))
            traces.append(_trace((float(p[0]), float(p[1])), q,
                                 width_mm=0.3))
        # skip layouts where graph and raster could disagree at pixel scale
        ambiguous = any(
            abs(outline_clearance(traces[i], traces[j])) < 2.0 * scale
            for i in range(n) for j in range(i + 1, n))
        if ambiguous:
            continue
        accepted += 1
        nets = extract_nets(traces, 0.0)
        assert len(nets.nets) == _flood_count(traces, scale)
