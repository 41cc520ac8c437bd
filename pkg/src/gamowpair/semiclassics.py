"""Sauter's tunneling estimate and classical proper-time orbits in a constant field.

Metric signature (+,-,-,-); four-vectors are ordered (t, x1, x2, x3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import FieldConfig
from .numerics import QuadratureSpec, adaptive_quad, ode_integrate

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class TunnelingSetup:
    p0: float
    cfg: FieldConfig

    def __post_init__(self):
        if not self.cfg.a > 0:
            raise ValueError("a barrier needs eE > 0")


@dataclass(frozen=True)
class TurningPoints:
    a: float
    b: float

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class TrajectoryState:
    x: np.ndarray
    u: np.ndarray

    @classmethod
    def from_vector(cls, y) -> "TrajectoryState":
        y = np.asarray(y, dtype=float)
        return cls(y[:4].copy(), y[4:].copy())

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.u])

    @property
    def norm(self) -> float:
        """eta_{mu nu} u^mu u^nu; equals 1 on the mass shell."""
        return float(self.u @ METRIC @ self.u)


def turning_points(setup: TunnelingSetup) -> TurningPoints:
    """Zeros of ``m^2 - (p0 - eE x3)^2`` at (p0 -+ m)/eE."""
    m, a = setup.cfg.m, setup.cfg.a
    return TurningPoints((setup.p0 - m) / a, (setup.p0 + m) / a)


def barrier_momentum(x3, setup: TunnelingSetup):
    """Imaginary momentum k(x3) = sqrt(m^2 - (p0 - eE x3)^2) under the barrier."""
    m, a = setup.cfg.m, setup.cfg.a
    arg = m * m - (setup.p0 - a * np.asarray(x3)) ** 2
    return np.sqrt(np.clip(arg, 0.0, None))


def wkb_closed_form(cfg: FieldConfig) -> float:
    """pi m^2 / (2 eE)."""
    return math.pi * cfg.m ** 2 / (2.0 * cfg.a)


def wkb_exponent(setup: TunnelingSetup, spec: QuadratureSpec | None = None) -> float:
    """Quadrature of the barrier integral ``int_a^b k(x3) dx3``.

    With ``p0 - eE x3 = m sin(phi)`` the square-root endpoints become smooth and
    the integral runs over phi in [-pi/2, pi/2]; k is still evaluated at the
    physical x3 so p0 enters the computation.
    """
    spec = spec or QuadratureSpec(rel_tol=1e-13, abs_tol=1e-15)
    m, a = setup.cfg.m, setup.cfg.a

    def integrand(phi):
        x3 = (setup.p0 - m * np.sin(phi)) / a
        return barrier_momentum(x3, setup) * (m * np.cos(phi) / a)

    return adaptive_quad(integrand, (-math.pi / 2, math.pi / 2), spec)


def sauter_prefactor(cfg: FieldConfig) -> float:
    """A = (eE)^2/(8 pi^3), the value that matches the one-pair residue."""
    return cfg.a ** 2 / (8.0 * math.pi ** 3)


def sauter_rate(cfg: FieldConfig) -> float:
    """A exp(-2 * pi m^2/(2 eE)); identical to the first residue term."""
    if not cfg.a > 0:
        raise ValueError("the Sauter rate needs chi > 0")
    return sauter_prefactor(cfg) * math.exp(-2.0 * wkb_closed_form(cfg))


def lorentz_rhs(state: TrajectoryState, cfg: FieldConfig) -> TrajectoryState:
    """Derivative (dx/ds, du/ds) under the constant field along x3.

    ``du^0/ds = (eE/m) u^3`` and ``du^3/ds = (eE/m) u^0``; u^1, u^2 are untouched.
    """
    k = cfg.a / cfg.m
    du = np.array([k * state.u[3], 0.0, 0.0, k * state.u[0]])
    return TrajectoryState(state.u.copy(), du)


def field_tensor(cfg: FieldConfig) -> np.ndarray:
    """F^{mu nu} consistent with lorentz_rhs: du^mu/ds = (e/m) F^{mu nu} eta_{nu rho} u^rho."""
    F = np.zeros((4, 4))
    F[3, 0] = cfg.E
    F[0, 3] = -cfg.E
    return F


def _vector_rhs(cfg: FieldConfig):
    k = cfg.a / cfg.m

    def rhs(s, y):
        return np.array([y[4], y[5], y[6], y[7], k * y[7], 0.0, 0.0, k * y[4]])

    return rhs


def hyperbolic_initial_state(cfg: FieldConfig) -> TrajectoryState:
    """x3 = m/eE, t = 0, u = (1, 0, 0, 0): the turning point of the hyperbola."""
    return TrajectoryState(np.array([0.0, 0.0, 0.0, cfg.m / cfg.a]),
                           np.array([1.0, 0.0, 0.0, 0.0]))


def integrate_trajectory(state0: TrajectoryState, s_range, h: float,
                         cfg: FieldConfig) -> list:
    """RK4 orbit as a list of ``(s, TrajectoryState)``."""
    if abs(state0.norm - 1.0) > 1e-12:
        raise ValueError(f"initial four-velocity is off shell: u.u = {state0.norm}")
    path = ode_integrate(_vector_rhs(cfg), state0.as_vector(), s_range, h)
    return [(s, TrajectoryState.from_vector(y)) for s, y in path]


def hyperbola(s, cfg: FieldConfig):
    """Closed-form (t(s), x3(s)) = (m/eE)(sinh, cosh)(eE s/m)."""
    r = cfg.m / cfg.a
    return r * np.sinh(s / r), r * np.cosh(s / r)


def overlap_scale(cfg: FieldConfig) -> float:
    """Branch separation 2m/eE over the Compton length 1/m, i.e. 2/chi."""
    if not cfg.a > 0:
        raise ValueError("needs chi > 0")
    return 2.0 * cfg.m ** 2 / cfg.a
