"""Schwinger pair creation in a constant electric field, by proper-time methods."""

from .errors import (DomainError, NonConvergence, NonFiniteValue, PoleHit, PoleProximity,
                     StateBlowup, TruncationWarning)
from .gamow import (Branch, GamowMode, LadderFrame, SpectralTruncation, bilinear_pairing,
                    evolve, gamow_eigenvalue, gamow_wavefunction, mehler_kernel,
                    spectral_kernel_sum, spectral_trace)
from .kernel import (EffLagResult, FieldConfig, PoleCatalog, RateSeries,
                     effective_lagrangian, efflag_imag_quadrature, efflag_real_renormalized,
                     heisenberg_euler_quartic, kernel_diag, pair_rate_residues,
                     pair_rate_total, pole_catalog, quartic_coefficient)
from .numerics import PowerSeries, QuadratureSpec, RayContour, adaptive_quad, ode_integrate, \
    ray_quad
from .propagators import (BoundaryCondition, MomentumPoint, free_resolvent, green_offshell,
                          offshell_retarded_kernel, onshell_from_proper_time,
                          onshell_green_momentum)
from .semiclassics import (TrajectoryState, TunnelingSetup, TurningPoints, integrate_trajectory,
                           overlap_scale, sauter_rate, turning_points, wkb_exponent)

__version__ = "0.1.0"
