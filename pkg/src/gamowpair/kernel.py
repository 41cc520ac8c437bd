"""Proper-time kernel in a constant electric field and the effective Lagrangian.

Natural units (hbar = c = 1). ``a = eE`` has dimension mass^2; ``chi = eE/m^2``.

The effective Lagrangian is

    L = -1/(4 pi)^2 int_0^inf ds/s^3 [as/sinh(as) - 1 + (as)^2/6] exp(-i m^2 s)

where the two subtractions remove the field-independent vacuum term and the
charge-renormalization term. The s-integral is taken on a ray rotated into the
fourth quadrant, which is pole-free (the poles of 1/sinh sit on the imaginary
axis at s = +-i n pi/a), so the rotated integral equals the real-axis one with
its i*epsilon prescription.

Pair-creation rates: the vacuum decay rate is ``w = 2 Im L``; its expansion over
the poles below the real axis is

    w = (eE)^2/(8 pi^3) * sum_n (-1)^(n+1)/n^2 * exp(-n pi m^2/eE).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleProximity
from .gamow import spectral_trace
from .numerics import QuadratureSpec, RayContour, ray_quad, require_finite, \
    series_reciprocal_sinh_ratio

FOUR_PI_SQ = (4.0 * math.pi) ** 2
QUARTIC_COEFFICIENT = 7.0 / (5760.0 * math.pi ** 2)
DEFAULT_ANGLE = -math.pi / 4
_SERIES = series_reciprocal_sinh_ratio(24)
_SERIES_CUTOFF = 0.3
_MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class FieldConfig:
    e: float
    E: float
    m: float

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"mass must be positive, got {self.m}")
        if not (self.e > 0 and math.isfinite(self.e)):
            raise ValueError(f"charge must be positive, got {self.e}")
        if not (self.E >= 0 and math.isfinite(self.E)):
            raise ValueError(f"field strength must be finite and >= 0, got {self.E}")

    @classmethod
    def from_chi(cls, chi: float, m: float = 1.0) -> "FieldConfig":
        """Unit charge with the field chosen so that eE/m^2 = chi."""
        return cls(e=1.0, E=chi * m * m, m=m)

    @property
    def a(self) -> float:
        return self.e * self.E

    @property
    def chi(self) -> float:
        return self.a / (self.m * self.m)


class Method(enum.Enum):
    RESIDUE_SUM = "residue_sum"
    CONTOUR_QUADRATURE = "contour_quadrature"


@dataclass(frozen=True)
class EffLagResult:
    """Re L (renormalized) and Im L; ``rate`` is the vacuum decay rate 2 Im L."""

    real_renormalized: float
    imag: float
    method: Method
    terms_used: int

    @property
    def rate(self) -> float:
        return 2.0 * self.imag


@dataclass(frozen=True)
class RateSeries:
    terms: tuple
    partial_sums: tuple
    underflowed: tuple = field(default=())

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0


@dataclass(frozen=True)
class PoleCatalog:
    """Poles of the proper-time integrand and of the oscillator resolvent.

    ``integrand`` lists z_{+-n} = +-i n pi/a for n = 1..N ordered by modulus
    (upper pole first); ``resolvent`` lists +-i a(2n+1) for n = 0..N-1.
    """

    a: float
    integrand: tuple
    resolvent: tuple

    def integrand_pole(self, n: int) -> complex:
        """z_n for signed n != 0."""
        if n == 0 or abs(n) > len(self.integrand) // 2:
            raise IndexError(n)
        return self.integrand[2 * (abs(n) - 1) + (0 if n > 0 else 1)]


def x_over_sinh(x):
    """x/sinh(x) for real or complex x, with the removable point at 0 filled in."""
    x = np.asarray(x)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, safe / np.sinh(safe))


def kernel_diag(s: float, cfg: FieldConfig) -> complex:
    """``<x| exp(iHs) |x> = -i/(4 pi s)^2 * as/sinh(as)``."""
    if not s > 0:
        raise DomainError("the diagonal kernel needs s > 0")
    x = cfg.a * s
    if x > _MAX_EXPONENT:
        raise OverflowError(f"as = {x} beyond the representable range")
    return complex(0.0, -float(x_over_sinh(x)) / (4.0 * math.pi * s) ** 2)


def free_diag_factor(s: float) -> complex:
    """One transverse free factor ``(1/2pi) sqrt(pi/(i s))``."""
    return (math.pi / (1j * s)) ** 0.5 / (2.0 * math.pi)


def oscillator_diag(s: float, cfg: FieldConfig) -> float:
    """(x0, x3) diagonal: (a/2pi) * trace of the oscillator kernel = a/(4 pi sinh as)."""
    if cfg.a == 0.0:
        return 1.0 / (4.0 * math.pi * s)
    return cfg.a / (2.0 * math.pi) * spectral_trace(s, cfg.a)


def heisenberg_euler_quartic(cfg: FieldConfig) -> float:
    """Leading weak-field term ``7/360 (eE)^4/((4pi)^2 m^4) = 7/(5760 pi^2) m^4 chi^4``."""
    return QUARTIC_COEFFICIENT * cfg.m ** 4 * cfg.chi ** 4


def subtracted_integrand(s, a: float, m: float):
    """``[as/sinh(as) - 1 + (as)^2/6] / s^3 * exp(-i m^2 s)`` at complex s."""
    s = np.asarray(s, dtype=complex)
    x = a * s
    small = np.abs(x) < _SERIES_CUTOFF
    # series branch: sum_{k>=4} c_k x^k / s^3, free of cancellation
    xs = np.where(small, x, 0.0)
    tail = np.zeros_like(xs)
    for k in range(_SERIES.order, 3, -1):
        tail = tail * xs + _SERIES[k]
    series = tail * xs ** 4
    # Re x > 0 on every admissible ray; this form cannot overflow
    xd = np.where(small, 1.0, x)
    decay = np.exp(-xd)
    direct = 2.0 * xd * decay / (1.0 - decay * decay) - 1.0 + xd * xd / 6.0
    bracket = np.where(small, series, direct)
    return bracket / s ** 3 * np.exp(-1j * m * m * s)


def _ray_for(cfg: FieldConfig, angle: float, pole_clearance: float) -> RayContour:
    if not -math.pi / 2 < angle < 0:
        raise ValueError("the proper-time ray must lie in the open fourth quadrant")
    # distance from the ray to the nearest pole -i pi/a, relative to |pole|
    if math.cos(angle) < pole_clearance:
        raise PoleProximity(
            f"ray at angle {angle:.4f} passes within {math.cos(angle):.3g}*pi/a of z_-1")
    decay = cfg.m ** 2 * math.sin(-angle)
    return RayContour(angle, 48.0 / decay)


def effective_lagrangian(cfg: FieldConfig, spec: QuadratureSpec | None = None,
                         angle: float = DEFAULT_ANGLE,
                         pole_clearance: float = 0.05) -> EffLagResult:
    """Renormalized L_eff from one rotated-ray quadrature of the subtracted integrand."""
    spec = spec or QuadratureSpec()
    if cfg.a == 0.0:
        return EffLagResult(0.0, 0.0, Method.CONTOUR_QUADRATURE, 0)
    ray = _ray_for(cfg, angle, pole_clearance)
    # tolerances are stated for L; the raw integral is (4pi)^2 larger
    inner = QuadratureSpec(spec.rel_tol, spec.abs_tol * FOUR_PI_SQ, spec.max_subdivisions)
    value = ray_quad(lambda z: subtracted_integrand(z, cfg.a, cfg.m), ray, inner)
    lag = -value / FOUR_PI_SQ
    require_finite(lag, "effective Lagrangian")
    return EffLagResult(lag.real, lag.imag, Method.CONTOUR_QUADRATURE, 0)


def efflag_real_renormalized(cfg: FieldConfig, spec: QuadratureSpec | None = None) -> float:
    return effective_lagrangian(cfg, spec).real_renormalized


def efflag_imag_quadrature(cfg: FieldConfig, spec: QuadratureSpec | None = None,
                           angle: float = DEFAULT_ANGLE, pole_clearance: float = 0.05) -> float:
    """Pair-creation rate ``2 Im L_eff`` from direct contour quadrature.

    Independent of the residue expansion; the two agree to the size of the
    first neglected residue term.
    """
    return effective_lagrangian(cfg, spec, angle, pole_clearance).rate


def pair_rate_residues(cfg: FieldConfig, N: int) -> RateSeries:
    """Terms ``w_n = (eE)^2/(8 pi^3) (-1)^(n+1)/n^2 exp(-n pi m^2/eE)`` for n = 1..N.

    A term whose exponent falls below the double range is reported as 0 and
    flagged in ``underflowed``.
    """
    if N < 1:
        raise ValueError("need at least one term")
    a = cfg.a
    if a == 0.0:
        zeros = (0.0,) * N
        return RateSeries(zeros, zeros, (True,) * N)
    pref = a * a / (8.0 * math.pi ** 3)
    base = math.pi * cfg.m ** 2 / a
    terms, sums, flags = [], [], []
    acc = []
    for n in range(1, N + 1):
        exponent = n * base
        under = exponent > 745.0
        w = 0.0 if under else pref * (-1) ** (n + 1) / n ** 2 * math.exp(-exponent)
        terms.append(w)
        acc.append(w)
        sums.append(math.fsum(acc))
        flags.append(under)
    return RateSeries(tuple(terms), tuple(sums), tuple(flags))


def pair_rate_total(cfg: FieldConfig, rel_tol: float = 1e-16, max_terms: int = 10_000) -> float:
    """Converged alternating residue sum (stops once a term is below rel_tol of the sum)."""
    if cfg.a == 0.0:
        return 0.0
    series = pair_rate_residues(cfg, 1)
    n = 1
    while n < max_terms:
        n = min(2 * n, max_terms)
        series = pair_rate_residues(cfg, n)
        if abs(series.terms[-1]) <= rel_tol * abs(series.total):
            break
    return series.total


def residue_lagrangian(cfg: FieldConfig, N: int) -> EffLagResult:
    """Im L from the residue sum; the real part is not available by this route."""
    series = pair_rate_residues(cfg, N)
    return EffLagResult(math.nan, 0.5 * series.total, Method.RESIDUE_SUM, N)


def pole_catalog(cfg: FieldConfig, N: int) -> PoleCatalog:
    a = cfg.a
    if not a > 0:
        raise ValueError("pole catalog needs eE > 0")
    integrand = []
    for n in range(1, N + 1):
        z = n * math.pi / a
        integrand += [complex(0.0, z), complex(0.0, -z)]
    resolvent = []
    for n in range(N):
        r = a * (2 * n + 1)
        resolvent += [complex(0.0, r), complex(0.0, -r)]
    return PoleCatalog(a, tuple(integrand), tuple(resolvent))


def quartic_coefficient(m: float = 1.0, chi: float = 0.1,
                        spec: QuadratureSpec | None = None) -> float:
    """Richardson estimate of lim L/(m^4 chi^4) as chi -> 0 from chi and chi/2.

    L/chi^4 = c4 + c6 chi^2 + O(chi^4), so (4 g(chi/2) - g(chi))/3 removes c6.
    """
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-22)

    def g(c):
        return efflag_real_renormalized(FieldConfig.from_chi(c, m), spec) / (m ** 4 * c ** 4)

    return (4.0 * g(0.5 * chi) - g(chi)) / 3.0
