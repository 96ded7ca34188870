"""Replicator dynamics: single-population n-strategy flow and the planar
cubic system obtained from a two-player, two-strategy game."""

from dataclasses import dataclass

import numpy as np

SIMPLEX_TOL = 1e-12


class SimplexError(ValueError):
    pass


@dataclass(frozen=True)
class RawSystem:
    """Coefficients of x' = x(x-1)(a00+a10 x+a01 y), y' = y(y-1)(b00+b10 x+b01 y)."""

    a00: float
    a10: float
    a01: float
    b00: float
    b10: float
    b01: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in self.as_tuple()):
            raise ValueError("coefficients must be finite")

    def as_tuple(self):
        return (self.a00, self.a10, self.a01, self.b00, self.b10, self.b01)

    @property
    def det(self):
        return self.a10 * self.b01 - self.a01 * self.b10

    def field(self, x, y):
        dx = x * (x - 1.0) * (self.a00 + self.a10 * x + self.a01 * y)
        dy = y * (y - 1.0) * (self.b00 + self.b10 * x + self.b01 * y)
        return dx, dy


@dataclass(frozen=True)
class TwoPlayerGame:
    A_star: np.ndarray
    B_star: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.A_star, dtype=float)
        b = np.asarray(self.B_star, dtype=float)
        if a.shape != (2, 2) or b.shape != (2, 2):
            raise ValueError("two-player payoff matrices must be 2x2")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("payoffs must be finite")
        object.__setattr__(self, "A_star", a)
        object.__setattr__(self, "B_star", b)


def _check_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 2:
        raise ValueError("payoff matrix must be square with n >= 2")
    if not np.all(np.isfinite(A)):
        raise ValueError("payoff entries must be finite")
    return A


def check_simplex(x, n=None):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or (n is not None and x.size != n):
        raise SimplexError(f"expected a vector of length {n}")
    if np.any(x < -SIMPLEX_TOL) or abs(x.sum() - 1.0) > SIMPLEX_TOL:
        raise SimplexError("point is not on the probability simplex")
    return x


def payoff(pure_index, mix, A):
    """Payoff of pure strategy `pure_index` (1-based) against the mix."""
    A = _check_matrix(A)
    n = A.shape[0]
    if not 1 <= pure_index <= n:
        raise IndexError(f"strategy index {pure_index} outside 1..{n}")
    x = check_simplex(mix, n)
    return float(A[pure_index - 1] @ x)


def average_payoff(x, A):
    A = _check_matrix(A)
    x = check_simplex(x, A.shape[0])
    return float(x @ A @ x)


def replicator_rhs(x, A):
    A = _check_matrix(A)
    x = check_simplex(x, A.shape[0])
    fitness = A @ x
    return x * (fitness - x @ fitness)


def simulate_replicator(x0, A, dt=1e-2, steps=1000):
    """Classical RK4 on the simplex; returns the (steps+1, n) path.

    The simplex check is only applied to the initial point, since round-off
    drifts the sum by far less than the integration error."""
    A = _check_matrix(A)
    x = check_simplex(x0, A.shape[0]).copy()

    def rhs(z):
        f = A @ z
        return z * (f - z @ f)

    path = [x.copy()]
    for _ in range(steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        path.append(x.copy())
    return np.array(path)


def reduce_two_player(g):
    a, b = g.A_star, g.B_star
    return RawSystem(
        a00=a[1, 1] - a[0, 1],
        a10=0.0,
        a01=a[0, 1] + a[1, 0] - a[0, 0] - a[1, 1],
        b00=b[1, 1] - b[0, 1],
        b10=b[0, 1] + b[1, 0] - b[0, 0] - b[1, 1],
        b01=0.0,
    )


def two_player_rhs(x1, x2, y1, y2, g):
    """Four-dimensional two-population replicator field (x1', x2', y1', y2')."""
    A, B = g.A_star, g.B_star
    x = np.array([x1, x2])
    y = np.array([y1, y2])
    fx = A @ y
    fy = B @ x
    mean_x = x @ fx
    mean_y = y @ fy
    return x[0] * (fx[0] - mean_x), x[1] * (fx[1] - mean_x), y[0] * (fy[0] - mean_y), y[1] * (fy[1] - mean_y)


@dataclass(frozen=True)
class CorruptionPayoffs:
    """Officials (corrupt / honest) against government (corrupt / honest)."""

    W: float
    M: float
    Mc: float
    Mg: float
    Mg_prime: float
    e: float
    V_gc: float
    V_gnc: float
    KP: float


def corruption_game(p):
    A = [[p.W + p.Mc - p.Mg, p.W + p.Mc - p.M],
         [p.W - p.Mg_prime, p.W]]
    B = [[p.Mg - p.W + p.V_gc - p.KP, p.Mg_prime - p.W + p.V_gc - p.KP],
         [p.M - p.W - p.e + p.V_gnc, -p.W + p.V_gnc]]
    return TwoPlayerGame(np.array(A), np.array(B))


def corruption_conditions(s):
    """Sign conditions under which full corruption and full honesty are the only attractors."""
    return s.b00 > 0 and s.b00 + s.b10 < 0 and s.a00 > 0 and s.a00 + s.a01 < 0
