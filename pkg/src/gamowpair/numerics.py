"""Numerical primitives: adaptive Gauss-Kronrod quadrature on real intervals and
complex rays, truncated power series, and a fixed-step RK4 integrator.

Complex numbers are carried as the builtin ``complex``. Integrands are called
with numpy arrays of nodes; scalar-only callables are detected and evaluated
point by point.
"""

from __future__ import annotations

import cmath
import heapq
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NonConvergence, NonFiniteValue, StateBlowup, TruncationWarning

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full symmetric node set on [-1, 1]: -x_0..-x_6, 0, x_6..x_0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae x_1, x_3, x_5 and the centre
for i, w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[i] = w
    GAUSS_WEIGHTS[14 - i] = w
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class RayContour:
    """The ray ``t -> exp(i*angle)*t`` for ``t`` in ``[0, length]``."""

    angle: float
    length: float

    def __post_init__(self):
        if not (-math.pi / 2 < self.angle < math.pi / 2):
            raise ValueError("ray angle must lie strictly inside (-pi/2, pi/2)")
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValueError("ray length must be finite and positive")

    @property
    def direction(self) -> complex:
        return cmath.exp(1j * self.angle)


def require_finite(z, what="value"):
    """Return ``z`` unchanged, raising NonFiniteValue on NaN/inf components."""
    if isinstance(z, complex):
        ok = math.isfinite(z.real) and math.isfinite(z.imag)
    else:
        ok = math.isfinite(z)
    if not ok:
        raise NonFiniteValue(f"{what} is not finite: {z!r}")
    return z


def _evaluate(f, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x))
        if y.shape != x.shape:
            raise TypeError
    except TypeError:
        y = np.array([f(xi) for xi in x])
    if not np.all(np.isfinite(y)):
        raise NonFiniteValue("integrand returned a non-finite value")
    return y


def _gk15(f, lo: float, hi: float):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    y = _evaluate(f, centre + half * NODES)
    kronrod = half * np.dot(KRONROD_WEIGHTS, y)
    gauss = half * np.dot(GAUSS_WEIGHTS, y)
    return kronrod, abs(kronrod - gauss), np.iscomplexobj(y)


def adaptive_quad(f: Callable, interval: Sequence[float], spec: QuadratureSpec | None = None,
                  full_output: bool = False):
    """Integrate ``f`` over ``[lo, hi]`` with globally adaptive GK15 bisection.

    The error estimate of each panel is ``|K15 - G7|``. Panels with the largest
    estimate are bisected until the summed estimate drops below
    ``max(abs_tol, rel_tol*|result|)``.

    Returns a float for real integrands and a complex otherwise; with
    ``full_output`` the pair ``(value, error_estimate)``.

    Raises NonConvergence when ``spec.max_subdivisions`` bisections are not enough.
    """
    spec = spec or QuadratureSpec()
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")

    value, err, is_complex = _gk15(f, lo, hi)
    heap = [(-err, lo, hi, value)]
    total, total_err = value, err
    splits = 0
    while True:
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            # incremental updates drift; confirm with a fresh sum before stopping
            total = sum(item[3] for item in heap)
            total_err = sum(-item[0] for item in heap)
            if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
                break
        if splits >= spec.max_subdivisions:
            raise NonConvergence(
                f"adaptive_quad: error {total_err:.3e} after {splits} subdivisions "
                f"on [{lo}, {hi}]")
        neg_err, a, b, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            raise NonConvergence(f"adaptive_quad: panel width underflow near {mid}")
        v1, e1, c1 = _gk15(f, a, mid)
        v2, e2, c2 = _gk15(f, mid, b)
        is_complex = is_complex or c1 or c2
        heapq.heappush(heap, (-e1, a, mid, v1))
        heapq.heappush(heap, (-e2, mid, b, v2))
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        splits += 1

    total = complex(total) if is_complex else float(np.real(total))
    require_finite(total, "quadrature result")
    return (total, float(total_err)) if full_output else total


def ray_quad(f: Callable, contour: RayContour, spec: QuadratureSpec | None = None,
             full_output: bool = False):
    """Integrate an analytic ``f`` from 0 to ``exp(i*angle)*length`` along the ray.

    Computes ``int_0^T f(e^{i angle} t) e^{i angle} dt``. ``f`` must be analytic in the
    sector between the real axis and the ray; that is the caller's business.
    A TruncationWarning is issued when ``|f|`` at the far end exceeds ``abs_tol``.
    """
    spec = spec or QuadratureSpec()
    d = contour.direction

    def along(t):
        return f(d * t) * d

    tail = abs(complex(_evaluate(f, np.array([d * contour.length]))[0]))
    if tail > spec.abs_tol:
        warnings.warn(
            f"integrand magnitude {tail:.3e} at ray end T={contour.length} exceeds "
            f"abs_tol={spec.abs_tol:.1e}", TruncationWarning, stacklevel=2)
    value, err = adaptive_quad(along, (0.0, contour.length), spec, full_output=True)
    value = complex(value)
    return (value, err) if full_output else value


@dataclass(frozen=True)
class PowerSeries:
    """Real power series truncated at ``order``: sum of c_k x^k for k <= order."""

    coefficients: tuple = field(default=(0.0,))

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("a power series needs at least c_0")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k):
        return self.coefficients[k]

    def truncate(self, order: int) -> "PowerSeries":
        c = list(self.coefficients[: order + 1])
        c += [0.0] * (order + 1 - len(c))
        return PowerSeries(tuple(c))

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        K = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        return PowerSeries(tuple(
            math.fsum(a[j] * b[k - j] for j in range(k + 1)) for k in range(K + 1)))

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        """Series quotient; common leading zeros are cancelled first."""
        a, b = list(self.coefficients), list(other.coefficients)
        K = min(self.order, other.order)
        shift = 0
        while shift < len(b) and b[shift] == 0.0:
            if a[shift] != 0.0:
                raise ZeroDivisionError("quotient has a pole at x = 0")
            shift += 1
        if shift == len(b):
            raise ZeroDivisionError("division by the zero series")
        a, b = a[shift:], b[shift:]
        K -= shift
        q = []
        for k in range(K + 1):
            acc = math.fsum(b[j] * q[k - j] for j in range(1, min(k, len(b) - 1) + 1))
            q.append(((a[k] if k < len(a) else 0.0) - acc) / b[0])
        return PowerSeries(tuple(q))

    def __call__(self, x):
        out = 0.0
        for c in reversed(self.coefficients):
            out = out * x + c
        return out


def sinh_series(order: int) -> PowerSeries:
    """sinh(x) = sum x^(2j+1)/(2j+1)! truncated at ``order``."""
    return PowerSeries(tuple(
        1.0 / math.factorial(k) if k % 2 else 0.0 for k in range(order + 1)))


def sinhc_series(order: int) -> PowerSeries:
    """sinh(x)/x = sum x^(2j)/(2j+1)! truncated at ``order``."""
    return PowerSeries(tuple(
        0.0 if k % 2 else 1.0 / math.factorial(k + 1) for k in range(order + 1)))


def series_reciprocal_sinh_ratio(order: int = 16) -> PowerSeries:
    """Coefficients of x/sinh(x) through x^order, by dividing x by the sinh series.

    >>> series_reciprocal_sinh_ratio(4)[4] * 360
    7.0
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    # one extra term so that cancelling the common factor x keeps ``order`` terms
    x = PowerSeries((0.0, 1.0) + (0.0,) * order)
    return (x / sinh_series(order + 1)).truncate(order)


def ode_integrate(rhs: Callable, y0, s_range: Sequence[float], h: float,
                  max_abs: float = 1e12) -> list:
    """Classical RK4 with a fixed step; returns ``[(s_k, y_k), ...]`` including both ends.

    The step is adjusted to ``(s1 - s0)/n`` with ``n = round((s1 - s0)/h)`` so the
    last node lands on ``s1`` exactly.
    """
    if not h > 0:
        raise ValueError("step h must be positive")
    s0, s1 = float(s_range[0]), float(s_range[1])
    y = np.array(y0, dtype=float)
    out = [(s0, y.copy())]
    span = s1 - s0
    n = int(round(abs(span) / h))
    if n == 0:
        return out
    step = span / n
    for k in range(n):
        s = s0 + k * step
        k1 = np.asarray(rhs(s, y))
        k2 = np.asarray(rhs(s + 0.5 * step, y + 0.5 * step * k1))
        k3 = np.asarray(rhs(s + 0.5 * step, y + 0.5 * step * k2))
        k4 = np.asarray(rhs(s + step, y + step * k3))
        y = y + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > max_abs:
            raise StateBlowup(f"state exceeded {max_abs:.1e} at s = {s + step}")
        out.append((s0 + (k + 1) * step, y))
    return out
