
import numpy as np
import pytest

from octothorpe.canonical import CanonicalSystem
from octothorpe.compactification import (CHARTS, chart_expanded_u1, chart_rhs, classify_infinite,
                                         from_chart, g_poly, infinite_singularities)
from octothorpe.singularities import NON_HYPERBOLIC, SADDLE, STABLE_NODE, UNSTABLE_NODE


def pushed(c, chart, u, v):
    """Chain rule through the chart map, times v**2."""
    x, y = from_chart(chart, u, v)
    P, Q = c.field(x, y)
    if chart in ("U1", "V1"):
        s = 1.0 if chart == "U1" else -1.0
        # u = y/x, v = s/x
        du = (Q * x - y * P) / (x * x)
        dv = -s * P / (x * x)
    else:
        s = 1.0 if chart == "U2" else -1.0
        du = (P * y - x * Q) / (y * y)
        dv = -s * Q / (y * y)
    return du * v * v, dv * v * v


def test_infinity_is_invariant(rng):
    c = CanonicalSystem(*rng.uniform(-2, 2, 6))
    for chart in CHARTS:
        for u in rng.normal(size=10):
            assert chart_rhs(c, chart, u, 0.0)[1] == 0.0


def test_charts_match_chain_rule(rng):
    for _ in range(20):
        c = CanonicalSystem(*rng.uniform(-2, 2, 6))
        for chart in CHARTS:
            u, v = rng.normal(), rng.uniform(0.05, 1.0)
            got, want = chart_rhs(c, chart, u, v), pushed(c, chart, u, v)
            scale = max(1.0, *map(abs, want))
            assert np.allclose(got, want, rtol=1e-10, atol=1e-10 * scale)


def test_expanded_u1_leading_terms(rng):
    c = CanonicalSystem(0.0, 0.0, 1.3, 0.4, -0.7, 2.1)
    du, dv = chart_expanded_u1(c)
    assert du[(1, 0)] == -1.3 and du[(2, 0)] == pytest.approx(-0.7 - 0.4) and du[(3, 0)] == 2.1
    c = CanonicalSystem(*rng.uniform(-2, 2, 6))
    du, dv = chart_expanded_u1(c)
    for u, v in rng.normal(size=(10, 2)):
        a = sum(k * u ** i * v ** j for (i, j), k in du.items())
        b = sum(k * u ** i * v ** j for (i, j), k in dv.items())
        assert np.allclose((a, b), chart_rhs(c, "U1", u, v), atol=1e-10)


def test_symmetric_roots():
    inf = infinite_singularities(CanonicalSystem(0.5, 0.5, 1, 2, 2, 1))
    assert sorted(inf.roots) == pytest.approx([-1, 1])


def test_family_one_root_signs(rng):
    for _ in range(100):
        c = CanonicalSystem(0.5, 0.6, 1, rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0.01, 5))
        plus, minus = infinite_singularities(c).roots
        assert min(plus, minus) < 0 < max(plus, minus)
        for u in (plus, minus):
            assert abs(g_poly(c, u)) < 1e-10


def test_example_roots_negative():
    inf = infinite_singularities(CanonicalSystem(0.5, 0.5, 1, 5, 1, -0.5))
    assert inf.Delta == pytest.approx(14.0)
    assert all(r < 0 for r in inf.roots)


def test_infinite_types_family_one():
    c = CanonicalSystem(0.5, 0.6, 1, 2, 1, 1)
    reports = {r.id: r for r in classify_infinite(c)}
    assert reports["U1:0"].local_type == STABLE_NODE
    inf = infinite_singularities(c)
    tags = dict(zip(("u+", "u-"), inf.roots))
    plus = "u+" if tags["u+"] > 0 else "u-"
    minus = "u-" if plus == "u+" else "u+"
    assert reports[f"U1:{plus}"].local_type == SADDLE
    assert reports[f"U1:{minus}"].local_type == UNSTABLE_NODE


def test_double_root_is_degenerate():
    # Delta = (b10 - a01)^2 + 4 a10 b01 = 4 - 4 = 0
    c = CanonicalSystem(0.5, 0.5, 1, 0, 2, -1)
    inf = infinite_singularities(c)
    assert inf.double_root
    assert any(r.local_type == NON_HYPERBOLIC for r in classify_infinite(c) if "u" in r.id.split(":")[1])


def test_degeneracy_only_for_double_roots(rng):
    for _ in range(500):
        c = CanonicalSystem(0.5, 0.5, *rng.uniform(-3, 3, 4))
        inf = infinite_singularities(c)
        for u0 in inf.roots:
            along = 2 * c.a10 + (c.a01 - c.b10) * u0
            if abs(along) < 1e-9:
                assert abs(inf.Delta) < 1e-6 or abs(c.a10) < 1e-9


def test_antipodal_types_agree(rng):
    for _ in range(50):
        c = CanonicalSystem(*rng.uniform(0.05, 0.95, 2), *rng.uniform(-3, 3, 4))
        reports = {r.id: r.local_type for r in classify_infinite(c)}
        for rid, kind in reports.items():
            chart, tag = rid.split(":")
            twin = {"U1": "V1", "V1": "U1", "U2": "V2", "V2": "U2"}[chart] + ":" + tag
            assert reports[twin] == kind
