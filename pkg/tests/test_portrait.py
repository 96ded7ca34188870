import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octothorpe.canonical import CanonicalSystem, apply_symmetry
from octothorpe.classifier import construct_row
from octothorpe.portrait import (Flow, LimitCycle, ReturnMap, SeparatrixSkeleton, StepUnderflow,
                                 center_like, cycle_orbit, detect_limit_cycle, infinite_saddle_landings,
                                 integrate, omega_limit, render, trace_separatrices)
from orbit_tools import chart_gap

UNSTABLE_CYCLE = CanonicalSystem(0.5, 0.5, 1, 3, -1, -0.5)
NO_CYCLE = CanonicalSystem(0.5, 0.5, 1, 3, -4, -2)
CENTER = CanonicalSystem(0.5, 0.5, 1, 2, -2, -1)


def test_start_on_singularity_rejected():
    with pytest.raises(ValueError):
        integrate(UNSTABLE_CYCLE, (0.0, 0.0))


def test_orbit_on_invariant_line_stays_there():
    traj = integrate(UNSTABLE_CYCLE, (0.2, -0.5), max_time=5.0)
    assert all(abs(b + 0.5) <= 1e-10 for _, ch, a, b in traj.samples if ch == "P")


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.4, 1.4), st.floats(-1.4, 1.4))
def test_invariant_lines_are_barriers(x, y):
    c = UNSTABLE_CYCLE
    flow = Flow(c)
    start = flow.line_values("P", x, y)
    if min(abs(v) for v in start) < 1e-3:
        return
    traj = flow.integrate((x, y), 1.0, max_time=3.0, max_steps=20000)
    signs = np.sign(start)
    for _, ch, a, b in traj.samples:
        vals = np.array(flow.line_values(ch, a, b))
        assert np.all(vals * signs >= -1e-12)


@pytest.mark.parametrize("start", [(0.2, 0.1), (-0.3, 0.35), (1.0, -1.2)])
def test_forward_then_backward_returns(start):
    flow = Flow(UNSTABLE_CYCLE)
    fwd = flow.integrate(start, 1.0, max_time=1.0, fixed_chart=True, stop_at_targets=False)
    _, _, a, b = fwd.samples[-1]
    back = flow.integrate((a, b), -1.0, max_time=fwd.samples[-1][0], fixed_chart=True, stop_at_targets=False)
    _, _, a0, b0 = back.samples[-1]
    assert math.hypot(a0 - start[0], b0 - start[1]) < 1e-6


@pytest.mark.parametrize("chart, start", [("U1", (2.0, 0.3)), ("V1", (-1.8, -0.6)),
                                          ("U2", (0.3, 2.2)), ("V2", (0.4, -1.9))])
def test_chart_and_plane_agree(chart, start):
    assert chart_gap(UNSTABLE_CYCLE, start, chart, 0.05) < 1e-6


def test_step_underflow_carries_location():
    err = StepUnderflow("x", ("P", 0.0, 1.0))
    assert err.location == ("P", 0.0, 1.0)


def test_repelling_origin_attracts_backward():
    assert omega_limit(NO_CYCLE, (0.3, 0.2), direction=-1.0) == "origin"
    assert omega_limit(NO_CYCLE, (-0.4, 0.45), direction=-1.0) == "origin"


def test_unstable_cycle_is_bracketed():
    rm = ReturnMap(UNSTABLE_CYCLE)
    assert omega_limit(UNSTABLE_CYCLE, rm.point(0.5)) == "origin"
    flow = Flow(UNSTABLE_CYCLE)
    outside = flow.integrate(rm.point(0.97), 1.0, max_time=200.0)
    _, _, x, y = outside.samples[-1]
    # ends hugging the edges of the centre square
    assert min(abs(x + 0.5), abs(x - 0.5), abs(y + 0.5), abs(y - 0.5)) < 1e-2


def test_detect_unstable_cycle():
    cyc = detect_limit_cycle(UNSTABLE_CYCLE)
    assert cyc is not None
    assert cyc.multiplier > 1 and cyc.stability == "unstable"
    assert 0.02 < cyc.s < 0.995
    assert abs(ReturnMap(UNSTABLE_CYCLE).displacement(cyc.s)) < 1e-8


def test_no_cycle_when_return_map_is_monotone():
    assert detect_limit_cycle(NO_CYCLE) is None


def test_center_detected():
    assert center_like(CENTER)
    assert not center_like(UNSTABLE_CYCLE)
    assert detect_limit_cycle(CENTER) is None


def test_skeleton_for_first_row():
    c = construct_row("1.1")
    skel = trace_separatrices(c)
    kinds = skel.kinds()
    assert all(s.status == "resolved" for s in skel.free())
    # every separatrix off the invariant set ends at a non-saddle
    assert all(kinds[s.endpoint] != "saddle" for s in skel.free())
    ends = {(s.saddle, s.branch): s.endpoint for s in skel.free()}
    assert ends[("q1", "stable+")] == ends[("q4", "stable+")] == "p3"
    assert infinite_saddle_landings(skel) == 2


def test_skeleton_symmetric_under_phi5():
    c = CanonicalSystem(0.5, 0.5, 1, 3, -1, -0.5)
    mirrored = apply_symmetry(c, "phi5")
    assert mirrored.params == c.params
    skel = trace_separatrices(c)
    ends = sorted(str(s.endpoint) for s in skel.free())
    ends_m = sorted(str(s.endpoint) for s in trace_separatrices(mirrored).free())
    assert ends == ends_m


def test_svg_is_deterministic():
    c = construct_row("1.1")
    a = render(c, trace_separatrices(c, orbits=True))
    b = render(c, trace_separatrices(c, orbits=True))
    assert a == b and a.startswith("<svg")
    sq = render(c, trace_separatrices(c), view="square")
    assert "<rect" in sq and sq != a


def test_center_render_shows_nested_orbits():
    rm = ReturnMap(CENTER)
    rings = [cycle_orbit(CENTER, LimitCycle(s, rm.point(s), 1.0, "neutral")) for s in (0.2, 0.4, 0.6)]
    skel = SeparatrixSkeleton([], [], rings)
    svg = render(CENTER, skel)
    assert svg.count("<polyline") >= 4 + 3


def test_json_export_shape():
    c = construct_row("1.1")
    cyc = detect_limit_cycle(UNSTABLE_CYCLE)
    data = trace_separatrices(c).to_json(stride=10, cycles=[cyc])
    assert {"singularities", "separatrices", "cycles"} <= set(data)
    assert all({"from", "to", "points"} <= set(s) for s in data["separatrices"])
    assert data["cycles"][0]["stability"] == "unstable"
