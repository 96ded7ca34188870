"""Poincare compactification of the canonical cubic field.

Charts and coordinates (v > 0 is the finite part in every chart):

    U1: (x, y) = ( 1/v,  u/v)     V1: (x, y) = (-1/v, -u/v)
    U2: (x, y) = ( u/v,  1/v)     V2: (x, y) = (-u/v, -1/v)

The chart fields are the pushed-forward planar field multiplied by v**2, the
degree minus one.  Because the degree is odd the V charts carry the same
polynomial as the U charts of the point-reflected system (alpha, beta) ->
(1 - alpha, 1 - beta), so antipodal points at infinity have the same type.
"""

import math
from dataclasses import dataclass

import numpy as np

from .singularities import SADDLE, SingularityReport, hyperbolic_type, NON_HYPERBOLIC

CHARTS = ("U1", "V1", "U2", "V2")


def _u1(al, be, a10, a01, b10, b01, u, v):
    ga = (1 + al * v) * (1 + (al - 1) * v)
    gb = (u + be * v) * (u + (be - 1) * v)
    lin_a = a10 + a01 * u
    lin_b = b10 + b01 * u
    return gb * lin_b - u * ga * lin_a, -v * ga * lin_a


def chart_rhs(c, chart, u, v):
    al, be, a10, a01, b10, b01 = c.params
    if chart == "U1":
        return _u1(al, be, a10, a01, b10, b01, u, v)
    if chart == "V1":
        return _u1(1 - al, 1 - be, a10, a01, b10, b01, u, v)
    # the second pair of charts swaps the roles of x and y
    if chart == "U2":
        return _u1(be, al, b01, b10, a01, a10, u, v)
    if chart == "V2":
        return _u1(1 - be, 1 - al, b01, b10, a01, a10, u, v)
    raise ValueError(f"unknown chart {chart!r}")


def chart_field(c, chart):
    """Fast closure (u, v) -> (du, dv) for the integrator."""
    al, be, a10, a01, b10, b01 = c.params
    args = {
        "U1": (al, be, a10, a01, b10, b01),
        "V1": (1 - al, 1 - be, a10, a01, b10, b01),
        "U2": (be, al, b01, b10, a01, a10),
        "V2": (1 - be, 1 - al, b01, b10, a01, a10),
    }[chart]
    al, be, p, q, r, s = args
    am1, bm1 = al - 1, be - 1

    def rhs(u, v):
        ga = (1 + al * v) * (1 + am1 * v)
        la = p + q * u
        return (u + be * v) * (u + bm1 * v) * (r + s * u) - u * ga * la, -v * ga * la

    return rhs


def chart_expanded_u1(c):
    """Monomial coefficients of the U1 field as {(i, j): coeff} for u**i v**j."""
    al, be, a10, a01, b10, b01 = c.params
    du = {
        (1, 0): -a10,
        (2, 0): b10 - a01,
        (1, 1): a10 * (1 - 2 * al) + b10 * (2 * be - 1),
        (0, 2): b10 * be * (be - 1),
        (3, 0): b01,
        (2, 1): a01 * (1 - 2 * al) + b01 * (2 * be - 1),
        (1, 2): a10 * al * (1 - al) + b01 * be * (be - 1),
        (2, 2): a01 * al * (1 - al),
    }
    dv = {
        (0, 1): -a10,
        (1, 1): -a01,
        (0, 2): a10 * (1 - 2 * al),
        (1, 2): a01 * (1 - 2 * al),
        (0, 3): a10 * al * (1 - al),
        (1, 3): a01 * al * (1 - al),
    }
    return du, dv


def to_chart(chart, x, y):
    if chart == "U1":
        return y / x, 1 / x
    if chart == "V1":
        return y / x, -1 / x
    if chart == "U2":
        return x / y, 1 / y
    if chart == "V2":
        return x / y, -1 / y
    raise ValueError(chart)


def from_chart(chart, u, v):
    if chart == "U1":
        return 1 / v, u / v
    if chart == "V1":
        return -1 / v, -u / v
    if chart == "U2":
        return u / v, 1 / v
    if chart == "V2":
        return -u / v, -1 / v
    raise ValueError(chart)


def disk_point(chart, a, b):
    """Poincare disk coordinates of a planar point or a chart point (v >= 0)."""
    if chart == "P":
        r = math.sqrt(1 + a * a + b * b)
        return a / r, b / r
    u, v = a, b
    r = math.sqrt(1 + u * u + v * v)
    return {
        "U1": (1 / r, u / r), "V1": (-1 / r, -u / r),
        "U2": (u / r, 1 / r), "V2": (-u / r, -1 / r),
    }[chart]


@dataclass
class InfinitySet:
    Delta: float
    roots: tuple          # real roots (u0_plus, u0_minus), or () when complex
    double_root: bool
    complex_roots: bool


def g_poly(c, u):
    return c.b01 * u * u + (c.b10 - c.a01) * u - c.a10


def infinite_singularities(c):
    m = c.b10 - c.a01
    Delta = m * m + 4 * c.a10 * c.b01
    double = abs(Delta) <= 1e-12 * max(1.0, m * m)
    if Delta < 0 and not double:
        return InfinitySet(Delta, (), False, True)
    root = math.sqrt(max(Delta, 0.0))
    plus = (-m + root) / (2 * c.b01)
    minus = (-m - root) / (2 * c.b01)
    return InfinitySet(Delta, (plus, minus), double, False)


def chart_jacobian(c, chart, u, v, h=1e-7):
    """Central-difference Jacobian of a chart field."""
    f = chart_field(c, chart)
    fu1, fu0 = f(u + h, v), f(u - h, v)
    fv1, fv0 = f(u, v + h), f(u, v - h)
    return np.array([[(fu1[0] - fu0[0]) / (2 * h), (fv1[0] - fv0[0]) / (2 * h)],
                     [(fu1[1] - fu0[1]) / (2 * h), (fv1[1] - fv0[1]) / (2 * h)]])


def classify_infinite(c):
    """Reports for every singular point on the circle at infinity.

    Ids name the chart and the root: "U1:0" is the end of the positive x axis,
    "V1:u+" the antipode of the U1 point at u0_plus, and so on."""
    reports = []
    for chart, lam in (("U1", -c.a10), ("V1", -c.a10), ("U2", -c.b01), ("V2", -c.b01)):
        J = np.diag([lam, lam])
        kind, ev = hyperbolic_type(J)
        reports.append(SingularityReport(f"{chart}:0", (chart, 0.0, 0.0), J, ev, kind))
    inf = infinite_singularities(c)
    for tag, u0 in zip(("u+", "u-"), inf.roots):
        along = 2 * c.a10 + (c.a01 - c.b10) * u0
        across = -(c.a01 * u0 + c.a10)
        notes = []
        degenerate = abs(along) <= 1e-10 * max(1.0, abs(c.a10)) or abs(across) <= 1e-10 * max(1.0, abs(c.a10))
        if degenerate:
            notes.append("degenerate: double root or u0 = 0")
        for chart in ("U1", "V1"):
            J = chart_jacobian(c, chart, u0, 0.0)
            J[0, 0], J[1, 0], J[1, 1] = along, 0.0, across
            kind, ev = hyperbolic_type(J)
            if degenerate:
                kind = NON_HYPERBOLIC
            reports.append(SingularityReport(f"{chart}:{tag}", (chart, u0, 0.0), J, ev, kind, list(notes)))
        if inf.double_root:
            break
    return reports


def infinite_saddles(c):
    return [r for r in classify_infinite(c) if r.local_type == SADDLE]
