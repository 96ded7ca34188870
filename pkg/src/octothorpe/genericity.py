"""Genericity checks, the polycycle around the centre square and the
limit-cycle criterion for a focus or node at the origin."""

import math
from dataclasses import dataclass, field

from .canonical import position_of_origin, to_canonical
from .compactification import classify_infinite, infinite_singularities
from .replicator import RawSystem
from .singularities import (NON_HYPERBOLIC, SADDLE, UNDEFINED, all_finite,
                            p_singularities, relative_positions)

GENERIC_TOL = 1e-12
RATIO_TOL = 1e-10


class HypothesesNotMet(ValueError):
    pass


def _sign(v, tol=0.0):
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return 0


@dataclass(frozen=True)
class Discriminants:
    detA: float
    Delta: float
    sign_b10_minus_a01: int
    T: float
    K: float
    delta: float

    def to_json(self):
        return {k: (v if math.isfinite(v) else "inf") if isinstance(v, float) else v
                for k, v in self.__dict__.items()}


def trace_at_origin(c):
    a, b = c.alpha, c.beta
    return c.a10 * (a - 1) * a + c.b01 * (b - 1) * b


def cherkas_quantity(c):
    a, b = c.alpha, c.beta
    return c.a01 * c.b01 * (b - 1) * b - c.a10 * c.b10 * (a - 1) * a


def slope_gap(c):
    """Sign-carrying derivative of g at the zero of a01*u + a10, in units where a10 = 1.

    Infinite when a01 = 0."""
    if c.a01 == 0:
        return math.inf
    return 2 * abs(c.b01) * c.a10 / c.a01 + (c.b10 - c.a01)


def discriminants(c):
    return Discriminants(
        detA=c.det,
        Delta=infinite_singularities(c).Delta,
        sign_b10_minus_a01=_sign(c.b10 - c.a01),
        T=trace_at_origin(c),
        K=cherkas_quantity(c),
        delta=slope_gap(c),
    )


@dataclass(frozen=True)
class GenericityCheck:
    passed: bool
    witnesses: tuple = ()
    product: float = 0.0

    def __bool__(self):
        return self.passed


def necessary_condition(s):
    """a10 * b01 * det A must not vanish; every vanishing factor is named."""
    a10, b01 = s.a10, s.b01
    det = a10 * b01 - s.a01 * s.b10
    product = a10 * b01 * det
    witnesses = tuple(name for name, v in (("a10", a10), ("b01", b01), ("detA", det))
                      if abs(v) <= GENERIC_TOL)
    if not witnesses and abs(product) <= GENERIC_TOL:
        # each factor is small but none vanishes on its own; blame the smallest
        witnesses = (min((("a10", a10), ("b01", b01), ("detA", det)), key=lambda p: abs(p[1]))[0],)
    return GenericityCheck(not witnesses, witnesses, product)


@dataclass
class PolycycleReport:
    exists: bool
    saddles: tuple = ()
    ratios: dict = field(default_factory=dict)
    r_gamma: float | None = None
    stability: str = "none"

    def to_json(self):
        return dict(self.__dict__)


def _in_centre(c):
    return 0 < c.alpha < 1 and 0 < c.beta < 1


def polycycle_report(c):
    """Heteroclinic loop p1 -> ... -> p4 along the edges of the centre square."""
    if not _in_centre(c):
        raise HypothesesNotMet("the polycycle analysis needs the origin inside the centre square")
    corners = p_singularities(c)
    if any(r.local_type != SADDLE for r in corners):
        return PolycycleReport(False)
    if any(relative_positions(c).on_edge().values()):
        return PolycycleReport(False)
    ratios = {}
    for r in corners:
        lo, hi = r.eigenvalues
        ratios[r.id] = abs(lo) / hi
    r_gamma = math.prod(ratios.values())
    log_r = math.log(r_gamma)
    if abs(log_r) <= RATIO_TOL:
        stability = "inconclusive"
    else:
        stability = "stable" if log_r > 0 else "unstable"
    return PolycycleReport(True, tuple(ratios), ratios, r_gamma, stability)


def limit_cycle_exists(c):
    """True iff a limit cycle surrounds the origin; when present it is unique and hyperbolic."""
    if not _in_centre(c):
        raise HypothesesNotMet("origin is not in the centre square")
    if c.det <= 0:
        raise HypothesesNotMet("origin is a saddle, not a focus or node")
    if not polycycle_report(c).exists:
        raise HypothesesNotMet("no polycycle bounds the centre square")
    T = trace_at_origin(c)
    if abs(T) <= GENERIC_TOL:
        return False
    return T * cherkas_quantity(c) < 0


@dataclass
class AuditItem:
    passed: bool | None
    detail: str
    witnesses: list = field(default_factory=list)
    numerical: bool = False


@dataclass
class GenericityAudit:
    items: dict

    @property
    def passed(self):
        return all(item.passed is not False for item in self.items.values())

    def to_json(self):
        return {
            "passed": self.passed,
            "items": {k: {"passed": v.passed, "detail": v.detail, "witnesses": v.witnesses,
                          "numerical": v.numerical} for k, v in self.items.items()},
        }


def genericity_audit(c, skeleton=None, numerical=True):
    """Per-item audit of the genericity definition.

    (a) hyperbolic singularities, checked symbolically; (b) hyperbolic limit
    cycles, certified by uniqueness and hyperbolicity for this family;
    (c) no saddle connections off the invariant set, checked on the traced
    separatrices; (d) a polycycle with ratio product different from one."""
    if isinstance(c, RawSystem):
        gate = necessary_condition(c)
        if not gate:
            return GenericityAudit({"a": AuditItem(False, "a10*b01*detA vanishes", list(gate.witnesses))})
        c = to_canonical(c)
    items = {}
    bad = []
    pos = position_of_origin(c)
    if pos.boundary_flag:
        bad.append("alpha/beta on an invariant line")
    gate = necessary_condition(c)
    bad.extend(gate.witnesses)
    if gate:
        for r in all_finite(c) + classify_infinite(c):
            if r.local_type in (NON_HYPERBOLIC, "center") or (
                    r.local_type.startswith("weak")):
                bad.append(r.id)
        if any(r.local_type == UNDEFINED for r in all_finite(c)):
            bad.append("undefined q-point")
    items["a"] = AuditItem(not bad, "all singularities hyperbolic" if not bad else "non-hyperbolic singularity", bad)
    items["b"] = AuditItem(True, "at most one limit cycle, hyperbolic when it exists")

    if not bad and numerical:
        if skeleton is None:
            from .portrait import trace_separatrices
            skeleton = trace_separatrices(c)
        kinds = skeleton.kinds()
        links, loose = [], []
        for s in skeleton.free():
            if s.endpoint is None:
                loose.append(f"{s.saddle}:{s.branch}")
            elif kinds.get(s.endpoint) == SADDLE:
                links.append(f"{s.saddle}:{s.branch}->{s.endpoint}")
        if links:
            items["c"] = AuditItem(False, "saddle connection off the invariant set", links, True)
        elif loose:
            items["c"] = AuditItem(None, "some separatrices did not resolve", loose, True)
        else:
            items["c"] = AuditItem(True, "no connection found at tolerance", [], True)
    else:
        items["c"] = AuditItem(None, "not checked", [], True)

    if not bad and _in_centre(c):
        poly = polycycle_report(c)
        if poly.exists and poly.stability == "inconclusive":
            items["d"] = AuditItem(False, "polycycle ratio product equals one", ["r_gamma"])
        else:
            items["d"] = AuditItem(True, "polycycle absent" if not poly.exists else f"r_gamma = {poly.r_gamma:.6g}")
    else:
        items["d"] = AuditItem(None if bad else True, "no polycycle around a centre square")
    return GenericityAudit(items)
