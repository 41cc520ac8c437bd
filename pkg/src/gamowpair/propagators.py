"""Free resolvent, Feynman/Dyson Green functions as proper-time transforms, and the
off-shell retarded kernel ``theta(s) <x| exp(iHs) |y>`` in the constant field.

``H = (p_0 + eE x3)^2 - p_3^2 - p_1^2 - p_2^2`` with ``p_mu = i d_mu``, so that
``exp(iHs) = exp(-i s H_osc) exp(-i s p_1^2) exp(-i s p_2^2)``. The kernel is two
free transverse factors times an (x0, x3) factor: the oscillator kernel of
``exp(-i s H_osc)`` (the complex conjugate of mehler_kernel) integrated against
the plane wave ``exp(-i p0 x0)``. That p0 integral is Gaussian; in closed form

    K_03 = a/(4 pi sinh as) * exp(-i a coth(as) (dt^2 - dz^2)/4 + i a dt (x3 + y3)/2)

with dt = x0 - y0, dz = x3 - y3. As eE -> 0 the product reduces to the
Lorentz-invariant free kernel ``-i/(4 pi s)^2 exp(-i (x-y)^2/(4s))``.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleHit, TruncationWarning
from .gamow import mehler_kernel, spectral_kernel_sum
from .kernel import FieldConfig, x_over_sinh
from .numerics import QuadratureSpec, adaptive_quad, require_finite


class BoundaryCondition(enum.Enum):
    FEYNMAN = "feynman"
    DYSON = "dyson"

    @property
    def sign(self) -> int:
        return 1 if self is BoundaryCondition.FEYNMAN else -1


@dataclass(frozen=True)
class MomentumPoint:
    p: tuple

    def __post_init__(self):
        p = tuple(float(c) for c in self.p)
        if len(p) != 4 or not all(math.isfinite(c) for c in p):
            raise ValueError("a momentum point is four finite components")
        object.__setattr__(self, "p", p)

    @property
    def p2(self) -> float:
        p0, p1, p2, p3 = self.p
        return p0 * p0 - p1 * p1 - p2 * p2 - p3 * p3


@dataclass(frozen=True)
class OffshellKernelSample:
    x: tuple
    y: tuple
    s: float
    value: complex


def free_resolvent(p: MomentumPoint, z: complex, floor: float = 1e-300) -> complex:
    """R(z) = 1/(p^2 - z)."""
    d = p.p2 - complex(z)
    if abs(d) <= floor:
        raise PoleHit(f"|p^2 - z| = {abs(d):.3e} is below the pole floor {floor:.1e}")
    return 1.0 / d


def onshell_green_momentum(p: MomentumPoint, m2: float, bc: BoundaryCondition,
                           eps: float) -> complex:
    """1/(p^2 - m^2 + i eps) for Feynman, 1/(p^2 - m^2 - i eps) for Dyson."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return 1.0 / complex(p.p2 - m2, bc.sign * eps)


def onshell_from_proper_time(p: MomentumPoint, m2: float, bc: BoundaryCondition,
                             eps: float, T: float, spec: QuadratureSpec | None = None) -> complex:
    """Truncated transform ``-+i int theta(+-s) exp(i s (p^2 - m^2 +- i eps)) ds``, |s| <= T.

    Feynman integrates over [0, T], Dyson over [-T, 0]. A TruncationWarning is
    raised when the neglected tail bound exp(-eps T)/eps exceeds ``spec.abs_tol``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-12, max_subdivisions=20000)
    tail = math.exp(-eps * T) / eps
    if tail > spec.abs_tol:
        warnings.warn(f"proper-time tail bound {tail:.3e} exceeds abs_tol={spec.abs_tol:.1e}",
                      TruncationWarning, stacklevel=2)
    sgn = bc.sign
    k = complex(p.p2 - m2, sgn * eps)

    def integrand(s):
        return np.exp(1j * s * k)

    interval = (0.0, T) if sgn > 0 else (-T, 0.0)
    # split so each panel holds only a few oscillations
    n_panels = max(1, int(math.ceil(T * (abs(k.real) + eps) / (2.0 * math.pi))))
    edges = np.linspace(interval[0], interval[1], n_panels + 1)
    panel_spec = QuadratureSpec(spec.rel_tol, spec.abs_tol / n_panels, spec.max_subdivisions)
    parts = [complex(adaptive_quad(integrand, (lo, hi), panel_spec))
             for lo, hi in zip(edges[:-1], edges[1:])]
    value = complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))
    return require_finite(-1j * sgn * value, "proper-time transform")


def free_kernel_1d(dx: float, s: float) -> complex:
    """``<x| exp(-i p^2 s) |y> = (1/2pi) sqrt(pi/(i s)) exp(i dx^2/(4s))``."""
    return (math.pi / (1j * s)) ** 0.5 / (2.0 * math.pi) * cmath.exp(1j * dx * dx / (4.0 * s))


def _coth_scaled(a: float, s: float) -> float:
    """a*coth(a s), tending to 1/s as a -> 0."""
    x = a * s
    if x < 1e-8:
        return (1.0 + x * x / 3.0) / s
    return a / math.tanh(x)


def oscillator_slice(x, y, s: float, a: float) -> complex:
    """(x0, x3) factor of the kernel in closed form (see module docstring)."""
    dt = x[0] - y[0]
    dz = x[3] - y[3]
    pref = float(x_over_sinh(a * s)) / (4.0 * math.pi * s)
    phase = -0.25 * _coth_scaled(a, s) * (dt * dt - dz * dz) + 0.5 * a * dt * (x[3] + y[3])
    return pref * cmath.exp(1j * phase)


def _conj_mehler(u, u_prime, s, a):
    """Continuation of conj(mehler_kernel) off the real axis: <u|exp(-i s H_osc)|u'>."""
    return np.conj(mehler_kernel(np.conj(u), np.conj(u_prime), s, a))


def oscillator_slice_quadrature(x, y, s: float, a: float,
                                spec: QuadratureSpec | None = None) -> complex:
    """Same factor as oscillator_slice, by quadrature over p0 = a(u - x3).

    ``(a/2pi) exp(i a x3 dt) int du exp(-i a u dt) <u|exp(-isH_osc)|u - dz>`` with u
    on the line rotated by +pi/4, where that kernel's Gaussian decays.
    """
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-16)
    dt = x[0] - y[0]
    dz = x[3] - y[3]
    d = cmath.exp(0.25j * math.pi)
    width = 1.0 / math.sqrt(a * math.tanh(a * s))
    # saddle of the Gaussian in u; it is real, so shifting the line is harmless
    centre = 0.5 * dz + 0.5 * dt / math.tanh(a * s)
    length = 12.0 * width

    def f(t):
        u = centre + d * t
        return np.exp(-1j * a * u * dt) * _conj_mehler(u, u - dz, s, a) * d

    value = complex(adaptive_quad(f, (-length, length), spec))
    return a / (2.0 * math.pi) * cmath.exp(1j * a * x[3] * dt) * value


def offshell_retarded_kernel(x, y, s: float, cfg: FieldConfig, strict: bool = False) -> complex:
    """``theta(s) <x| exp(iHs) |y>``; exactly 0 for s <= 0.

    With ``strict`` a non-positive s raises DomainError instead.
    """
    if s <= 0:
        if strict:
            raise DomainError("the retarded kernel is supported on s > 0")
        return 0j
    if 2.0 * cfg.a * s > 700.0:
        raise OverflowError("a*s beyond the representable range")
    transverse = free_kernel_1d(x[1] - y[1], s) * free_kernel_1d(x[2] - y[2], s)
    return require_finite(transverse * oscillator_slice(x, y, s, cfg.a), "kernel")


def offshell_advanced_kernel(x, y, s: float, cfg: FieldConfig) -> complex:
    """``theta(-s) <x| exp(iHs) |y>`` as conj of the retarded kernel at (y, x, -s)."""
    if s >= 0:
        return 0j
    return offshell_retarded_kernel(y, x, -s, cfg).conjugate()


def green_offshell(x, y, s: float, cfg: FieldConfig, bc: BoundaryCondition) -> OffshellKernelSample:
    """G_+-[x(s), y(0)] = -+i theta(+-s) <x|exp(iHs)|y>."""
    if bc is BoundaryCondition.FEYNMAN:
        value = -1j * offshell_retarded_kernel(x, y, s, cfg)
    else:
        value = 1j * offshell_advanced_kernel(x, y, s, cfg)
    return OffshellKernelSample(tuple(x), tuple(y), s, value)


def gamow_reconstruction_check(u: float, u_prime: float, s: float, cfg: FieldConfig,
                               trunc) -> float:
    """Relative error of the decaying-mode expansion against the Mehler kernel."""
    exact = mehler_kernel(u, u_prime, s, cfg.a)
    approx = spectral_kernel_sum(u, u_prime, s, cfg.a, trunc)
    return abs(approx - exact) / abs(exact)
