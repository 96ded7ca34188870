"""Numerical phase portraits on the Poincare disk: adaptive integration with
chart hand-off, separatrix tracing, return-map limit-cycle detection and
omega-limit estimation."""

import math
from dataclasses import dataclass, field

import numpy as np

from .compactification import chart_field, classify_infinite
from .singularities import SADDLE, all_finite

ATOL = 1e-10
RTOL = 1e-9
MAX_DISPLACEMENT = 1e-2
BALL_RADIUS = 1e-5
ENDPOINT_RADIUS = 1e-4
LAUNCH_OFFSET = 1e-6

PLANE_EXIT = 4.0       # leave the plane chart beyond this sup-norm
PLANE_ENTRY = 2.0      # come back below this one
CHART_SWAP = 2.0       # |u| beyond which the other pair of charts is better


class StepUnderflow(RuntimeError):
    def __init__(self, message, location):
        super().__init__(message)
        self.location = location


class AmbiguousEndpoint(RuntimeError):
    pass


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def homogeneous(chart, a, b):
    """Projective representative (X, Y, Z) with Z >= 0."""
    if chart == "P":
        return a, b, 1.0
    return {"U1": (1.0, a, b), "V1": (-1.0, -a, b),
            "U2": (a, 1.0, b), "V2": (-a, -1.0, b)}[chart]


def chart_coords(chart, X, Y, Z):
    """Coordinates of a projective point in a chart, or None outside it."""
    if chart == "P":
        return (X / Z, Y / Z) if Z > 0 else None
    if chart == "U1":
        return (Y / X, Z / X) if X > 0 else None
    if chart == "V1":
        return (Y / X, -Z / X) if X < 0 else None
    if chart == "U2":
        return (X / Y, Z / Y) if Y > 0 else None
    if chart == "V2":
        return (X / Y, -Z / Y) if Y < 0 else None
    raise ValueError(chart)


def best_chart(X, Y, Z):
    if Z > 0 and Z * PLANE_ENTRY >= max(abs(X), abs(Y)):
        return "P"
    if abs(X) >= abs(Y):
        return "U1" if X > 0 else "V1"
    return "U2" if Y > 0 else "V2"


def to_disk(X, Y, Z):
    r = math.sqrt(X * X + Y * Y + Z * Z)
    return X / r, Y / r


@dataclass
class Target:
    id: str
    point: tuple          # projective
    kind: str
    jacobian: np.ndarray
    chart: str            # chart in which the jacobian is expressed
    coords: dict = field(default_factory=dict)


@dataclass
class Trajectory:
    samples: list                  # (t, chart, a, b)
    reason: str                    # singularity | max_steps | max_time | event | left_domain
    target: str | None = None
    derivatives: list = field(default_factory=list)

    def disk_points(self):
        return [to_disk(*homogeneous(ch, a, b)) for _, ch, a, b in self.samples]

    def planar_points(self):
        out = []
        for _, ch, a, b in self.samples:
            X, Y, Z = homogeneous(ch, a, b)
            if Z > 0:
                out.append((X / Z, Y / Z))
        return out


class Flow:
    """The compactified field of a canonical system on all five charts."""

    def __init__(self, c, atol=ATOL, rtol=RTOL, max_displacement=MAX_DISPLACEMENT,
                 ball_radius=BALL_RADIUS, targets=True):
        self.c = c
        self.atol, self.rtol = atol, rtol
        self.max_displacement = max_displacement
        self.ball_radius = ball_radius
        self.fields = {ch: chart_field(c, ch) for ch in ("U1", "V1", "U2", "V2")}
        self.fields["P"] = self._planar()
        al, be = c.alpha, c.beta
        # invariant lines as linear forms in (X, Y, Z)
        self.lines = ((1.0, 0.0, al), (1.0, 0.0, al - 1), (0.0, 1.0, be), (0.0, 1.0, be - 1))
        self.targets = self._targets() if targets else []

    def _planar(self):
        al, be, a10, a01, b10, b01 = self.c.params

        def rhs(x, y):
            xa = x + al
            yb = y + be
            return xa * (xa - 1.0) * (a10 * x + a01 * y), yb * (yb - 1.0) * (b10 * x + b01 * y)

        return rhs

    def _targets(self):
        out = []
        for r in all_finite(self.c):
            if r.location is None:
                continue
            out.append(Target(r.id, (r.location[0], r.location[1], 1.0), r.local_type, r.jacobian, "P"))
        # with a10 or b01 zero the circle at infinity is degenerate; only finite targets remain
        at_infinity = classify_infinite(self.c) if self.c.a10 != 0 and self.c.b01 != 0 else []
        for r in at_infinity:
            chart, u, v = r.location
            out.append(Target(r.id, homogeneous(chart, u, v), r.local_type, r.jacobian, chart))
        for t in out:
            for ch in ("P", "U1", "V1", "U2", "V2"):
                xy = chart_coords(ch, *t.point)
                if xy is not None:
                    t.coords[ch] = xy
        return out

    def target(self, tid):
        for t in self.targets:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def line_values(self, chart, a, b):
        X, Y, Z = homogeneous(chart, a, b)
        return [l0 * X + l1 * Y + l2 * Z for l0, l1, l2 in self.lines]

    def nearest_target(self, chart, a, b, radius):
        best, best_d = None, radius
        for t in self.targets:
            xy = t.coords.get(chart)
            if xy is None:
                continue
            d = math.hypot(a - xy[0], b - xy[1])
            if d < best_d:
                best, best_d = t, d
        return best, best_d

    def _switch(self, chart, a, b):
        X, Y, Z = homogeneous(chart, a, b)
        if chart == "P":
            if max(abs(X), abs(Y)) <= PLANE_EXIT:
                return chart, a, b
            new = "U1" if X > 0 else "V1" if abs(X) >= abs(Y) else None
            if abs(X) < abs(Y):
                new = "U2" if Y > 0 else "V2"
        else:
            if Z > 0 and Z * PLANE_ENTRY >= max(abs(X), abs(Y)):
                new = "P"
            elif chart in ("U1", "V1") and abs(a) > CHART_SWAP:
                new = "U2" if Y > 0 else "V2"
            elif chart in ("U2", "V2") and abs(a) > CHART_SWAP:
                new = "U1" if X > 0 else "V1"
            else:
                return chart, a, b
        na, nb = chart_coords(new, X, Y, Z)
        return new, na, nb

    def integrate(self, start, direction=1.0, chart="P", max_steps=200000, max_time=math.inf,
                  event=None, stop_at_targets=True, h0=1e-4, min_steps_before_stop=0,
                  keep_derivatives=False, fixed_chart=False, ignore=()):
        """Adaptive Dormand-Prince integration of sigma * F, sigma = direction.

        `event(prev, new)` may return True to stop; both arguments are
        (t, chart, a, b) tuples in the same chart."""
        a, b = start
        if not fixed_chart:
            chart, a, b = self._switch(chart, a, b)
        t = 0.0
        h = h0
        samples = [(t, chart, a, b)]
        derivs = []
        f = self.fields[chart]
        sig = direction
        k1 = f(a, b)
        k1 = (sig * k1[0], sig * k1[1])
        if keep_derivatives:
            derivs.append(k1)
        on_line = [abs(v) <= 1e-12 for v in self.line_values(chart, a, b)]
        signs = [0 if o else (1 if v > 0 else -1) for o, v in zip(on_line, self.line_values(chart, a, b))]
        reason, hit = "max_steps", None
        steps = 0
        while steps < max_steps:
            if t >= max_time - 1e-13 * (1 + abs(t)):
                reason = "max_time"
                break
            speed = math.hypot(*k1)
            if speed * h > self.max_displacement:
                h = self.max_displacement / speed
            h = min(h, max_time - t)
            ks = [k1]
            for i in range(1, 7):
                ai = _A[i]
                da = sum(ai[j] * ks[j][0] for j in range(i))
                db = sum(ai[j] * ks[j][1] for j in range(i))
                kk = f(a + h * da, b + h * db)
                ks.append((sig * kk[0], sig * kk[1]))
            na = a + h * sum(_B[j] * ks[j][0] for j in range(6))
            nb = b + h * sum(_B[j] * ks[j][1] for j in range(6))
            ea = h * sum(_E[j] * ks[j][0] for j in range(7))
            eb = h * sum(_E[j] * ks[j][1] for j in range(7))
            sa = self.atol + self.rtol * max(abs(a), abs(na))
            sb = self.atol + self.rtol * max(abs(b), abs(nb))
            err = max(abs(ea) / sa, abs(eb) / sb)
            if not math.isfinite(err):
                err = 1e10
            crossed = False
            if err <= 1.0:
                vals = self.line_values(chart, na, nb)
                crossed = any(s != 0 and v * s < 0 for s, v in zip(signs, vals))
            if err > 1.0 or crossed:
                h *= 0.5 if crossed else max(0.2, 0.9 * err ** -0.2)
                if h < 1e-15 * (1 + abs(t)):
                    raise StepUnderflow("step size underflow", (chart, a, b))
                continue
            steps += 1
            t += h
            prev = samples[-1]
            a, b = na, nb
            k1 = ks[6]
            new = (t, chart, a, b)
            samples.append(new)
            if keep_derivatives:
                derivs.append(k1)
            h *= min(5.0, max(0.2, 0.9 * err ** -0.2)) if err > 0 else 5.0
            if event is not None and event(prev, new):
                reason = "event"
                break
            if stop_at_targets and steps > min_steps_before_stop:
                tgt, _ = self.nearest_target(chart, a, b, self.ball_radius)
                if tgt is not None and tgt.id not in ignore:
                    reason, hit = "singularity", tgt.id
                    break
            if not fixed_chart:
                nchart, sa_, sb_ = self._switch(chart, a, b)
                if nchart != chart:
                    chart, a, b = nchart, sa_, sb_
                    f = self.fields[chart]
                    k1 = f(a, b)
                    k1 = (sig * k1[0], sig * k1[1])
                    samples.append((t, chart, a, b))
                    if keep_derivatives:
                        derivs.append(k1)
                    vals = self.line_values(chart, a, b)
                    signs = [0 if s == 0 else s for s in signs]
            elif chart != "P" and b < 0:
                reason = "left_domain"
                break
        return Trajectory(samples, reason, hit, derivs)


def integrate(c, start, direction=1.0, chart="P", **controls):
    """Integrate the canonical field from a planar (or chart) starting point."""
    flow = Flow(c)
    tgt, d = flow.nearest_target(chart, start[0], start[1], 1e-9)
    if tgt is not None:
        raise ValueError(f"start lies on singularity {tgt.id}")
    return flow.integrate(start, direction, chart, **controls)


@dataclass
class Separatrix:
    saddle: str
    branch: str                # "unstable+" / "unstable-" / "stable+" / "stable-"
    eigenvector: tuple
    chart: str
    on_invariant: bool         # launched along an invariant line or the circle at infinity
    endpoint: str | None
    status: str                # resolved | loose | ambiguous | unresolved
    trajectory: Trajectory = field(repr=False, default=None)

    @property
    def unstable(self):
        return self.branch.startswith("unstable")


@dataclass
class SeparatrixSkeleton:
    singularities: list        # Target list (finite and infinite)
    separatrices: list
    orbits: list = field(default_factory=list)

    def free(self):
        return [s for s in self.separatrices if not s.on_invariant]

    def kinds(self):
        return {t.id: t.kind for t in self.singularities}

    def pattern(self):
        """Sorted (saddle, branch, endpoint) triples of the separatrices off the invariant set."""
        return sorted((s.saddle, s.branch, s.endpoint) for s in self.free())

    def to_json(self, include_points=True, stride=1, cycles=()):
        def pts(s):
            if not include_points or s.trajectory is None:
                return []
            return [list(p) for p in s.trajectory.disk_points()[::stride]]

        return {
            "singularities": [
                {"id": t.id, "type": t.kind, "disk": list(to_disk(*t.point))} for t in self.singularities
            ],
            "separatrices": [
                {"from": s.saddle, "branch": s.branch, "to": s.endpoint, "status": s.status,
                 "invariant": s.on_invariant, "points": pts(s)}
                for s in self.separatrices
            ],
            "cycles": [cy.to_json() for cy in cycles],
        }


def _is_finite_id(tid):
    return ":" not in tid


def _launches(flow, t):
    """(branch, chart, start, sigma, eigenvector, on_invariant) for every separatrix of a saddle."""
    J = np.asarray(t.jacobian, dtype=float)
    ev, vecs = np.linalg.eig(J)
    out = []
    base = t.coords[t.chart]
    for k in range(2):
        lam = ev[k].real
        e = vecs[:, k].real
        e = e / np.linalg.norm(e)
        kind = "unstable" if lam > 0 else "stable"
        sigma = 1.0 if lam > 0 else -1.0
        for sgn, tag in ((1, "+"), (-1, "-")):
            start = (base[0] + sgn * LAUNCH_OFFSET * e[0], base[1] + sgn * LAUNCH_OFFSET * e[1])
            if t.chart != "P" and start[1] < -1e-15:
                continue      # other side of the circle at infinity
            if t.chart != "P" and abs(start[1]) <= 1e-15:
                start = (start[0], 0.0)
                invariant = True
            else:
                invariant = any(abs(v) <= 1e-12 for v in flow.line_values(t.chart, *start))
            out.append((kind + tag, t.chart, start, sigma, (float(e[0]), float(e[1])), invariant))
    return out


def _resolve(flow, traj):
    if traj.reason == "singularity":
        return traj.target, "resolved"
    _, ch, a, b = traj.samples[-1]
    near = [t for t in flow.targets
            if t.coords.get(ch) is not None and math.hypot(a - t.coords[ch][0], b - t.coords[ch][1]) < ENDPOINT_RADIUS]
    if len(near) == 1:
        return near[0].id, "loose"
    if len(near) > 1:
        return None, "ambiguous"
    return None, "unresolved"


def trace_separatrices(c, flow=None, max_steps=100000, strict=False, orbits=False):
    """Trace every separatrix of every hyperbolic saddle, finite or at infinity."""
    flow = flow or Flow(c)
    seps = []
    for t in flow.targets:
        if t.kind != SADDLE:
            continue
        for branch, chart, start, sigma, e, invariant in _launches(flow, t):
            traj = flow.integrate(start, sigma, chart, max_steps=max_steps, ignore=(t.id,))
            end, status = _resolve(flow, traj)
            if strict and status == "ambiguous":
                raise AmbiguousEndpoint(f"{t.id} {branch} ends near several singularities")
            seps.append(Separatrix(t.id, branch, e, chart, invariant, end, status, traj))
    skel = SeparatrixSkeleton(list(flow.targets), seps)
    if orbits:
        skel.orbits = region_orbits(c, flow)
    return skel


def region_orbits(c, flow=None, max_steps=20000):
    """A forward and backward orbit from a seed inside each cell cut out by the invariant lines."""
    flow = flow or Flow(c)
    al, be = c.alpha, c.beta
    xs = (-al - 1.5, 0.5 - al, 2.5 - al)
    ys = (-be - 1.5, 0.5 - be, 2.5 - be)
    out = []
    for x in xs:
        for y in ys:
            x0, y0 = x + 0.0731, y + 0.0417        # off the symmetry axes
            for sigma in (1.0, -1.0):
                out.append(flow.integrate((x0, y0), sigma, max_steps=max_steps))
    return out


def infinite_saddle_landings(skel):
    """How many separatrices leaving the circle at infinity end at a finite singularity."""
    return sum(1 for s in skel.free()
               if not _is_finite_id(s.saddle) and s.endpoint is not None and _is_finite_id(s.endpoint))


def _rk4(f, sig, x, y, dt):
    k1 = f(x, y)
    k2 = f(x + 0.5 * dt * sig * k1[0], y + 0.5 * dt * sig * k1[1])
    k3 = f(x + 0.5 * dt * sig * k2[0], y + 0.5 * dt * sig * k2[1])
    k4 = f(x + dt * sig * k3[0], y + dt * sig * k3[1])
    return (x + dt * sig * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6,
            y + dt * sig * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6)


class ReturnMap:
    """First return to the segment from the origin to the corner p3.

    A point on the section is its fraction s in (0, 1) of the way to p3."""

    def __init__(self, c, direction=None, flow=None, max_time=2e3):
        if not (0 < c.alpha < 1 and 0 < c.beta < 1):
            raise ValueError("the return map needs the origin inside the centre square")
        self.c = c
        self.flow = flow or Flow(c)
        self.corner = (1 - c.alpha, 1 - c.beta)
        self.normal = (-self.corner[1], self.corner[0])
        if direction is None:
            # run the flow in the direction in which the origin attracts
            trace = c.a10 * (c.alpha - 1) * c.alpha + c.b01 * (c.beta - 1) * c.beta
            direction = -1.0 if trace > 0 else 1.0
        self.direction = direction
        self.max_time = max_time
        f = self.flow.fields["P"]
        mid = (0.5 * self.corner[0], 0.5 * self.corner[1])
        fx, fy = f(*mid)
        self.orientation = 1 if direction * (self.normal[0] * fx + self.normal[1] * fy) > 0 else -1

    def _g(self, x, y):
        return self.normal[0] * x + self.normal[1] * y

    def point(self, s):
        return s * self.corner[0], s * self.corner[1]

    def __call__(self, s):
        """Returned fraction, 0.0 when the orbit falls into the origin, None when it never returns."""
        c0x, c0y = self.corner
        corner2 = c0x * c0x + c0y * c0y
        g, o = self._g, self.orientation

        def crossing(prev, new):
            _, ch0, x0, y0 = prev
            _, ch1, x1, y1 = new
            if ch0 != "P" or ch1 != "P":
                return False
            g0, g1 = g(x0, y0), g(x1, y1)
            return o * g0 < 0 <= o * g1 and (x1 * c0x + y1 * c0y) > 0

        traj = self.flow.integrate(self.point(s), self.direction, "P", max_time=self.max_time,
                                   max_steps=400000, event=crossing, min_steps_before_stop=0)
        if traj.reason == "singularity":
            return 0.0 if traj.target == "origin" else None
        if traj.reason != "event":
            return None
        _, _, x, y = traj.samples[-1]
        f = self.flow.fields["P"]
        for _ in range(6):
            fx, fy = f(x, y)
            rate = self.direction * (self.normal[0] * fx + self.normal[1] * fy)
            if rate == 0:
                break
            x, y = _rk4(f, self.direction, x, y, -g(x, y) / rate)
        return (x * c0x + y * c0y) / corner2

    def displacement(self, s):
        r = self(s)
        return None if r is None else r - s


@dataclass
class LimitCycle:
    s: float                 # fraction of the way from the origin to p3
    point: tuple
    multiplier: float        # forward-time derivative of the return map
    stability: str

    def to_json(self):
        return {"s": self.s, "point": list(self.point), "multiplier": self.multiplier,
                "stability": self.stability}


def _displacement_grid(rm, lo, hi, n, tail=0.99):
    """Uniform samples up to `tail`, then geometric ones toward the polycycle at s = 1."""
    points = list(np.linspace(lo, min(hi, tail), n))
    if hi > tail:
        points += list(1.0 - np.geomspace(1.0 - tail, 1.0 - hi, 6)[1:])
    return [(float(s), rm.displacement(float(s))) for s in points]


def detect_limit_cycle(c, annulus=(0.02, 0.9999), grid=24, tol=1e-10, flow=None, direction=None,
                       noise=1e-7):
    """Locate a limit cycle around a focus or node at the origin, or return None.

    Sign changes where both displacements are below `noise` are integration
    round-off, as on a band of closed orbits, and do not count."""
    rm = ReturnMap(c, direction, flow)
    samples = _displacement_grid(rm, annulus[0], annulus[1], grid)
    bracket = None
    for (s0, d0), (s1, d1) in zip(samples, samples[1:]):
        if d0 is None or d1 is None:
            continue
        if max(abs(d0), abs(d1)) < noise:
            continue
        if d0 == 0 or d0 * d1 < 0:
            bracket = (s0, d0, s1, d1)
            break
    if bracket is None:
        return None
    lo, dlo, hi, _ = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        dm = rm.displacement(mid)
        if dm is None:
            break
        if (dm < 0) == (dlo < 0):
            lo, dlo = mid, dm
        else:
            hi = mid
    s = float(0.5 * (lo + hi))
    h = max(1e-6, 10 * tol)
    up, down = rm(min(s + h, annulus[1])), rm(max(s - h, annulus[0]))
    slope = (up - down) / (min(s + h, annulus[1]) - max(s - h, annulus[0]))
    forward = float(slope if rm.direction > 0 else 1.0 / slope)
    return LimitCycle(s, rm.point(s), forward, "unstable" if forward > 1 else "stable")


def center_like(c, samples=8, tol=1e-6, flow=None):
    """True when the forward return map moves no sampled point: a band of closed orbits."""
    rm = ReturnMap(c, 1.0, flow)
    disp = [d for _, d in _displacement_grid(rm, 0.05, 0.6, samples)]
    return all(d is not None and abs(d) < tol for d in disp)


def omega_limit(c, start, flow=None, max_time=1e4, direction=1.0):
    """Singularity id that the orbit of a planar point tends to, or the termination reason."""
    flow = flow or Flow(c)
    traj = flow.integrate(start, direction, "P", max_time=max_time, max_steps=500000)
    if traj.reason == "singularity":
        return traj.target
    _, ch, a, b = traj.samples[-1]
    tgt, _ = flow.nearest_target(ch, a, b, ENDPOINT_RADIUS)
    return tgt.id if tgt is not None else traj.reason


# --- rendering -------------------------------------------------------------

_GLYPH = {
    "saddle": ("rect", "#000", "#000"),
    "stable_node": ("circle", "#1f4e9c", "#1f4e9c"),
    "stable_focus": ("circle", "#1f4e9c", "#1f4e9c"),
    "weak_stable_focus": ("circle", "#1f4e9c", "#1f4e9c"),
    "unstable_node": ("circle", "#fff", "#b0281c"),
    "unstable_focus": ("circle", "#fff", "#b0281c"),
    "weak_unstable_focus": ("circle", "#fff", "#b0281c"),
}


def _fmt(v):
    return f"{v:.3f}"


def _polyline(pts, stroke, width):
    if len(pts) < 2:
        return ""
    body = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    return f'<polyline points="{body}" fill="none" stroke="{stroke}" stroke-width="{width}"/>'


def _thin(pts, every):
    if len(pts) <= 2:
        return pts
    out = pts[::every]
    if out[-1] != pts[-1]:
        out.append(pts[-1])
    return out


def _glyph(kind, x, y):
    shape, fill, stroke = _GLYPH.get(kind, ("circle", "#888", "#888"))
    if shape == "rect":
        return (f'<rect x="{_fmt(x - 3)}" y="{_fmt(y - 3)}" width="6" height="6" '
                f'fill="{fill}" stroke="{stroke}"/>')
    return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" fill="{fill}" stroke="{stroke}" stroke-width="1.2"/>'


def render(c, skeleton, view="disk", size=480, cycle=None, every=4):
    """Deterministic SVG of the disk or of the unit square in the original coordinates."""
    half = size / 2
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">', f'<rect width="{size}" height="{size}" fill="#fff"/>']
    if view == "disk":
        R = half - 10

        def place(X, Y):
            return half + R * X, half - R * Y

        parts.append(f'<circle cx="{_fmt(half)}" cy="{_fmt(half)}" r="{_fmt(R)}" fill="none" stroke="#000"/>')
        for k, (l0, l1, l2) in enumerate(Flow(c, targets=False).lines):
            pts = []
            for t in np.linspace(-60, 60, 241):
                # points of the line l0*x + l1*y + l2 = 0
                x, y = (-l2, t) if l0 else (t, -l2)
                pts.append(place(*to_disk(x, y, 1.0)))
            parts.append(_polyline(pts, "#999", 1.0))

        def mapped(traj):
            return [place(X, Y) for X, Y in traj.disk_points()]
    elif view == "square":
        R = size - 20
        al, be = c.alpha, c.beta

        def place(x, y):
            return 10 + R * (x + al), size - 10 - R * (y + be)

        parts.append(f'<rect x="10" y="10" width="{_fmt(R)}" height="{_fmt(R)}" fill="none" stroke="#999"/>')

        def mapped(traj):
            out = []
            for x, y in traj.planar_points():
                if -al - 1e-9 <= x <= 1 - al + 1e-9 and -be - 1e-9 <= y <= 1 - be + 1e-9:
                    out.append(place(x, y))
            return out
    else:
        raise ValueError(f"unknown view {view!r}")

    for traj in skeleton.orbits:
        parts.append(_polyline(_thin(mapped(traj), every), "#bbb", 0.6))
    for s in skeleton.separatrices:
        if s.trajectory is None:
            continue
        colour = "#b0281c" if s.unstable else "#1f4e9c"
        parts.append(_polyline(_thin(mapped(s.trajectory), every), colour, 1.2))
    if cycle is not None:
        parts.append(_polyline(_thin(mapped(cycle), every), "#2a8a3a", 1.6))
    for t in skeleton.singularities:
        if view == "disk":
            x, y = place(*to_disk(*t.point))
        else:
            X, Y, Z = t.point
            if Z <= 0:
                continue
            x0, y0 = X / Z, Y / Z
            if not (-c.alpha - 1e-9 <= x0 <= 1 - c.alpha + 1e-9 and -c.beta - 1e-9 <= y0 <= 1 - c.beta + 1e-9):
                continue
            x, y = place(x0, y0)
        parts.append(_glyph(t.kind, x, y))
    parts.append("</svg>")
    return "\n".join(p for p in parts if p) + "\n"


def cycle_orbit(c, cycle, flow=None):
    """One revolution along a located cycle, for drawing."""
    rm = ReturnMap(c, None, flow)
    flow = rm.flow
    o = rm.orientation

    def crossing(prev, new):
        _, _, x0, y0 = prev
        _, _, x1, y1 = new
        return o * rm._g(x0, y0) < 0 <= o * rm._g(x1, y1) and x1 * rm.corner[0] + y1 * rm.corner[1] > 0

    return flow.integrate(cycle.point, rm.direction, "P", max_time=rm.max_time, event=crossing)
