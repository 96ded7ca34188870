"""Finite singularities of the canonical system: the origin, the four corners
p1..p4 of the octothorpe, and the four points q1..q4 where the zero lines of
the linear forms cross the invariant lines."""

from dataclasses import dataclass, field

import numpy as np

ZERO_TOL = 1e-12
HYPERBOLIC_TOL = 1e-10

SADDLE = "saddle"
STABLE_NODE = "stable_node"
UNSTABLE_NODE = "unstable_node"
STABLE_FOCUS = "stable_focus"
UNSTABLE_FOCUS = "unstable_focus"
WEAK_STABLE_FOCUS = "weak_stable_focus"
WEAK_UNSTABLE_FOCUS = "weak_unstable_focus"
CENTER = "center"
NON_HYPERBOLIC = "non_hyperbolic"
UNDEFINED = "undefined"

ATTRACTING = {STABLE_NODE, STABLE_FOCUS, WEAK_STABLE_FOCUS}
REPELLING = {UNSTABLE_NODE, UNSTABLE_FOCUS, WEAK_UNSTABLE_FOCUS}


@dataclass
class SingularityReport:
    id: str
    location: tuple | None
    jacobian: np.ndarray | None
    eigenvalues: tuple
    local_type: str
    notes: list = field(default_factory=list)

    def to_json(self):
        def num(z):
            z = complex(z)
            return z.real if z.imag == 0 else [z.real, z.imag]

        return {
            "id": self.id,
            "location": None if self.location is None else list(self.location),
            "jacobian": None if self.jacobian is None else self.jacobian.tolist(),
            "eigenvalues": [num(e) for e in self.eigenvalues],
            "type": self.local_type,
            "notes": list(self.notes),
        }


def hyperbolic_type(J):
    """Local type of a hyperbolic equilibrium from its Jacobian."""
    J = np.asarray(J, dtype=float)
    ev = np.linalg.eigvals(J)
    scale = max(np.linalg.norm(J), 1e-300)
    if np.any(np.abs(ev.real) <= HYPERBOLIC_TOL * scale):
        return NON_HYPERBOLIC, tuple(ev)
    if abs(ev[0].imag) > 0:
        return (STABLE_FOCUS if ev[0].real < 0 else UNSTABLE_FOCUS), tuple(ev)
    lo, hi = sorted(ev.real)
    if lo < 0 < hi:
        return SADDLE, (lo, hi)
    return (STABLE_NODE if hi < 0 else UNSTABLE_NODE), (lo, hi)


def p_points(c):
    a, b = c.alpha, c.beta
    return {"p1": (-a, -b), "p2": (1 - a, -b), "p3": (1 - a, 1 - b), "p4": (-a, 1 - b)}


# Sign pattern of the diagonal of DX(p_i) in terms of (f1(p_i), f2(p_i)).
_P_SIGNS = {"p1": (-1, -1), "p2": (1, -1), "p3": (1, 1), "p4": (-1, 1)}


def p_singularities(c):
    out = []
    for name, (x, y) in p_points(c).items():
        sx, sy = _P_SIGNS[name]
        J = np.diag([sx * c.f1(x, y), sy * c.f2(x, y)])
        kind, ev = hyperbolic_type(J)
        out.append(SingularityReport(name, (x, y), J, ev, kind))
    return out


def q_points(c):
    """Locations of q1..q4; None when the defining denominator vanishes."""
    a, b = c.alpha, c.beta
    pts = {"q1": None, "q2": None, "q3": None, "q4": None}
    if abs(c.a10) > ZERO_TOL:
        pts["q1"] = (c.a01 / c.a10 * b, -b)
        pts["q3"] = (c.a01 / c.a10 * (b - 1), 1 - b)
    if abs(c.b01) > ZERO_TOL:
        pts["q2"] = (1 - a, c.b10 / c.b01 * (a - 1))
        pts["q4"] = (-a, c.b10 / c.b01 * a)
    return pts


def q_diagonals(c):
    """Closed-form diagonals of the triangular Jacobians at q1..q4."""
    P = p_points(c)
    f1 = {k: c.f1(*v) for k, v in P.items()}
    f2 = {k: c.f2(*v) for k, v in P.items()}
    a, b, det = c.alpha, c.beta, c.det
    out = {}
    if abs(c.a10) > ZERO_TOL:
        out["q1"] = (f1["p1"] * f1["p2"] / c.a10, b * det / c.a10)
        out["q3"] = (f1["p3"] * f1["p4"] / c.a10, (1 - b) * det / c.a10)
    if abs(c.b01) > ZERO_TOL:
        out["q2"] = ((1 - a) * det / c.b01, f2["p2"] * f2["p3"] / c.b01)
        out["q4"] = (a * det / c.b01, f2["p1"] * f2["p4"] / c.b01)
    return out


def q_singularities(c):
    diag = q_diagonals(c)
    out = []
    for name, loc in q_points(c).items():
        if loc is None:
            out.append(SingularityReport(name, None, None, (), UNDEFINED))
            continue
        J = np.array(c.jacobian(*loc), dtype=float)
        J[0, 0], J[1, 1] = diag[name]
        # the Jacobian is triangular: the entry across the invariant line vanishes
        if name in ("q1", "q3"):
            J[1, 0] = 0.0
        else:
            J[0, 1] = 0.0
        kind, ev = hyperbolic_type(J)
        out.append(SingularityReport(name, loc, J, ev, kind))
    return out


def classify_origin(c):
    a, b = c.alpha, c.beta
    J = np.array(c.jacobian(0.0, 0.0), dtype=float)
    ev = tuple(np.linalg.eigvals(J))
    position_factor = (a - 1) * a * (b - 1) * b
    det = position_factor * c.det
    trace = c.a10 * (a - 1) * a + c.b01 * (b - 1) * b
    notes = []
    if abs(det) <= ZERO_TOL:
        kind = NON_HYPERBOLIC
    elif det < 0:
        kind = SADDLE
    elif abs(trace) > ZERO_TOL:
        focus = trace * trace - 4 * det < 0
        if trace < 0:
            kind = STABLE_FOCUS if focus else STABLE_NODE
        else:
            kind = UNSTABLE_FOCUS if focus else UNSTABLE_NODE
    else:
        # purely imaginary eigenvalues; the Jacobian cannot be triangular here
        if abs(c.b10) <= ZERO_TOL:
            raise ArithmeticError("monodromic origin with b10 = 0 is impossible")
        lyapunov = c.b01 * (c.a01 + c.b10)
        if abs(lyapunov) <= ZERO_TOL:
            kind = CENTER
        elif c.b10 * lyapunov > 0:
            kind = WEAK_UNSTABLE_FOCUS
        else:
            kind = WEAK_STABLE_FOCUS
            notes.append("source wording: weak stable node")
        if kind != CENTER:
            notes.append(f"V1 = {first_focal_value(c):.6g}")
    return SingularityReport("origin", (0.0, 0.0), J, ev, kind, notes)


def first_focal_value(c):
    return c.b01 * (c.a01 + c.b10) / (8 * c.b10)


def all_finite(c):
    return [classify_origin(c)] + p_singularities(c) + q_singularities(c)


# (name, q, p, which linear form, coefficient that multiplies it)
_PREDICATES = (
    ("q1_p1", "f1", "p1", "a10"), ("q1_p2", "f1", "p2", "a10"),
    ("q2_p2", "f2", "p2", "b01"), ("q2_p3", "f2", "p3", "b01"),
    ("q3_p3", "f1", "p3", "a10"), ("q3_p4", "f1", "p4", "a10"),
    ("q4_p4", "f2", "p4", "b01"), ("q4_p1", "f2", "p1", "b01"),
)


@dataclass(frozen=True)
class RelativePositions:
    """Each entry is "<" (q left of or below p), ">" or "="."""

    signs: dict

    def __getitem__(self, key):
        return self.signs[key]

    @property
    def degenerate(self):
        return any(v == "=" for v in self.signs.values())

    def on_edge(self):
        """q-points lying strictly between two corners on an edge of the centre square."""
        s = self.signs
        return {
            "q1": s["q1_p1"] == ">" and s["q1_p2"] == "<",
            "q2": s["q2_p2"] == ">" and s["q2_p3"] == "<",
            "q3": s["q3_p4"] == ">" and s["q3_p3"] == "<",
            "q4": s["q4_p1"] == ">" and s["q4_p4"] == "<",
        }


def relative_positions(c):
    P = p_points(c)
    signs = {}
    for name, form, p, coef in _PREDICATES:
        value = getattr(c, form)(*P[p])
        if abs(value) <= ZERO_TOL:
            signs[name] = "="
        else:
            signs[name] = "<" if getattr(c, coef) * value > 0 else ">"
    return RelativePositions(signs)
