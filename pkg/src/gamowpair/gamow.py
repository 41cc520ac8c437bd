"""Gamow resonances of the inverted oscillator ``H_osc = p^2 - a^2 u^2``.

The decaying family is the harmonic-oscillator eigenbasis continued to the
imaginary frequency ``omega = i a``::

    phi_n(u) = N_n H_n(sqrt(i a) u) exp(-i a u^2 / 2),   N_n = (i a / pi)^(1/4) / sqrt(2^n n!)

with ``H_osc phi_n = i a (2n+1) phi_n``. The growing family is the complex
conjugate, with eigenvalue ``-i a (2n+1)``. All roots use the principal branch.

Bras are formed the Hilbert-space way, ``<g|psi> = int conj(g(u)) psi(u) du``, and
then continued analytically; for a growing bra this turns the pairing into
``int phi_n(u) phi_m(u) du``, whose integrand decays like ``exp(-a t^2)`` on the
ray ``u = exp(-i pi/4) t``. That rotated integral is how pairings are defined.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import QuadratureSpec, RayContour, ray_quad, require_finite

HERMITE_MAX_ORDER = 60
PAIRING_ANGLE = -math.pi / 4


class Branch(enum.Enum):
    DECAYING = "decaying"
    GROWING = "growing"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.DECAYING else -1


@dataclass(frozen=True)
class GamowMode:
    n: int
    branch: Branch
    a: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"mode index must be a non-negative integer, got {self.n}")
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"oscillator scale must be positive, got {self.a}")
        if not isinstance(self.branch, Branch):
            raise TypeError("branch must be a Branch")


@dataclass(frozen=True)
class LadderFrame:
    """Shifted coordinate ``u = x3 + p0/a`` and the ladder variables built on it."""

    a: float
    p0: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("oscillator scale must be positive")

    def to_u(self, x3):
        return x3 + self.p0 / self.a

    def from_u(self, u):
        return u - self.p0 / self.a

    def ladder(self, x3, p3):
        """Classical values of ``(v, u_ladder)``; their product equals H_osc/(2a)."""
        r = math.sqrt(self.a)
        u = self.to_u(x3)
        v = (p3 / r + r * u) / math.sqrt(2.0)
        w = (p3 / r - r * u) / math.sqrt(2.0)
        return v, w


@dataclass(frozen=True)
class SpectralTruncation:
    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError("n_max must be a non-negative integer")


def gamow_eigenvalue(mode: GamowMode) -> complex:
    """``+i a(2n+1)`` on the decaying branch, ``-i a(2n+1)`` on the growing one."""
    return complex(0.0, mode.branch.sign * mode.a * (2 * mode.n + 1))


def normalized_hermite(n_max: int, z):
    """Rows ``H_k(z)/sqrt(2^k k!)`` for k = 0..n_max via the scaled three-term recurrence.

    Works on complex arrays. Orders above HERMITE_MAX_ORDER raise OverflowError.
    """
    if n_max > HERMITE_MAX_ORDER:
        raise OverflowError(
            f"Hermite order {n_max} beyond the stability bound {HERMITE_MAX_ORDER}")
    z = np.asarray(z, dtype=complex)
    out = np.empty((n_max + 1,) + z.shape, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * z
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * z * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def _continued(n_max: int, a: float, z, sign: int):
    """Analytic decaying (sign=+1) or growing (sign=-1) wavefunctions at complex z."""
    omega = 1j * sign * a
    root = cmath.sqrt(omega)
    norm = (omega / math.pi) ** 0.25
    z = np.asarray(z, dtype=complex)
    return norm * normalized_hermite(n_max, root * z) * np.exp(-0.5 * omega * z * z)


def gamow_wavefunction(mode: GamowMode, u):
    """phi_n(u) for decaying modes, conj(phi_n(u)) for growing ones (real ``u``)."""
    values = _continued(mode.n, mode.a, u, mode.branch.sign)[mode.n]
    if np.ndim(values) == 0:
        return require_finite(complex(values), "wavefunction")
    return values


def bra_function(mode: GamowMode, z):
    """Analytic continuation of ``conj(psi(u))`` for the mode's wavefunction psi."""
    # conj(psi(conj z)) of one branch is the continuation of the other branch
    return _continued(mode.n, mode.a, z, -mode.branch.sign)[mode.n]


def _full_line(f, angle: float, length: float, spec: QuadratureSpec) -> complex:
    """Integral of ``f`` over the whole rotated line ``exp(i angle) t``, t in R."""
    return ray_quad(lambda z: f(z) + f(-z), RayContour(angle, length), spec)


def _pairing_length(n: int, m: int, a: float) -> float:
    # exp(-a t^2) times a degree n+m polynomial is far below 1e-30 beyond this
    return (math.sqrt(n + m + 1.0) + 9.0) / math.sqrt(a)


def bilinear_pairing(bra: GamowMode, ket: GamowMode, contour: RayContour | None = None,
                     spec: QuadratureSpec | None = None) -> complex:
    """``<bra|ket>`` for a growing bra and a decaying ket; equals delta_nm.

    The integral runs over the line through the origin at ``contour.angle``
    (default -pi/4), truncated at ``+-contour.length``.
    """
    if bra.branch is not Branch.GROWING or ket.branch is not Branch.DECAYING:
        raise ValueError("pairing takes a growing bra and a decaying ket")
    if bra.a != ket.a:
        raise ValueError("bra and ket must share the oscillator scale")
    if contour is None:
        contour = RayContour(PAIRING_ANGLE, _pairing_length(bra.n, ket.n, bra.a))
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)

    def integrand(z):
        return bra_function(bra, z) * _continued(ket.n, ket.a, z, 1)[ket.n]

    return _full_line(integrand, contour.angle, contour.length, spec)


def evolve(mode: GamowMode, s: float) -> float:
    """Amplitude factor of the proper-time semigroup.

    Decaying modes evolve only forward (``s >= 0``), growing modes only backward.
    """
    if mode.branch.sign * s < 0:
        raise DomainError(
            f"{mode.branch.value} Gamow vectors are defined only for "
            f"{'s >= 0' if mode.branch is Branch.DECAYING else 's <= 0'}, got s = {s}")
    return math.exp(-mode.branch.sign * mode.a * (2 * mode.n + 1) * s)


def wigner_conjugate(mode: GamowMode) -> GamowMode:
    flipped = Branch.GROWING if mode.branch is Branch.DECAYING else Branch.DECAYING
    return GamowMode(mode.n, flipped, mode.a)


_MAX_EXPONENT = 700.0


def mehler_kernel(u, u_prime, s: float, a: float) -> complex:
    """``<u| exp(i s H_osc) |u'>`` in closed form.

    ``sqrt(i a/(2 pi sinh 2as)) * exp(-i a [(u^2+u'^2) cosh 2as - 2 u u'] / (2 sinh 2as))``

    The phase is the one that reduces to the free kernel ``sqrt(i/(4 pi s))
    exp(-i (u-u')^2/(4 s))`` as s -> 0 and whose trace is exactly ``1/(2 sinh as)``.
    Complex ``u``, ``u'`` are accepted (the kernel is entire in both).
    """
    if not s > 0:
        raise DomainError("the oscillator kernel is built for s > 0")
    x = 2.0 * a * s
    if x > _MAX_EXPONENT:
        raise OverflowError(f"2as = {x} beyond the representable range")
    sh = math.sinh(x)
    coth = 1.0 / math.tanh(x)
    pref = cmath.sqrt(1j * a / (2.0 * math.pi * sh))
    u = np.asarray(u, dtype=complex)
    up = np.asarray(u_prime, dtype=complex)
    phase = -0.5j * a * ((u * u + up * up) * coth - 2.0 * u * up / sh)
    out = pref * np.exp(phase)
    if out.ndim == 0:
        return require_finite(complex(out), "Mehler kernel")
    return out


def spectral_kernel_sum(u, u_prime, s: float, a: float, trunc) -> complex:
    """``sum_{n<=n_max} exp(-a(2n+1)s) phi_n(u) <phi~_n|u'>``.

    ``trunc`` is a SpectralTruncation or a bare int; ``-1`` gives the empty sum.
    """
    n_max = trunc.n_max if isinstance(trunc, SpectralTruncation) else int(trunc)
    if not s > 0:
        raise DomainError("the decaying expansion holds for s > 0 only")
    if n_max < 0:
        return 0j
    kets = _continued(n_max, a, u, 1)
    bras = _continued(n_max, a, u_prime, 1)  # bra of the growing mode at u'
    weights = np.exp(-a * (2 * np.arange(n_max + 1) + 1) * s)
    total = np.tensordot(weights, kets * bras, axes=1)
    if np.ndim(total) == 0:
        return require_finite(complex(total), "spectral sum")
    return total


def spectral_trace(s: float, a: float, n_max: int | None = None) -> float:
    """``sum_n exp(-a(2n+1)s)``: the closed form ``1/(2 sinh as)``, or the partial sum."""
    if not s > 0:
        raise DomainError("trace needs s > 0")
    x = a * s
    if n_max is not None:
        return math.fsum(math.exp(-x * (2 * n + 1)) for n in range(n_max + 1))
    if x > _MAX_EXPONENT:
        return math.exp(-x) / (1.0 - math.exp(-2.0 * x))
    return 0.5 / math.sinh(x)


def kernel_trace_quadrature(s: float, a: float, spec: QuadratureSpec | None = None) -> complex:
    """Diagonal of mehler_kernel integrated over the line rotated by -pi/4."""
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-15)
    # |integrand| ~ exp(-a tanh(as) t^2) on the ray
    length = 9.0 / math.sqrt(a * math.tanh(a * s))
    return _full_line(lambda z: mehler_kernel(z, z, s, a), PAIRING_ANGLE, length, spec)
