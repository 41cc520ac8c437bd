"""Acceptance checks 1 to 11, one pass/fail line each.

Run with pytest (the lines are collected into the terminal summary) or directly:
``python3 tests/test_acceptance.py``.
"""

import math
import subprocess
import sys
import tempfile
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from gamowpair.cli import OutputTable, render_csv
from gamowpair.errors import DomainError
from gamowpair.gamow import (Branch, GamowMode, bilinear_pairing, evolve, gamow_wavefunction,
                             mehler_kernel, spectral_kernel_sum, wigner_conjugate)
from gamowpair.kernel import (QUARTIC_COEFFICIENT, FieldConfig, efflag_imag_quadrature,
                              free_diag_factor, kernel_diag, oscillator_diag,
                              pair_rate_residues, quartic_coefficient)
from gamowpair.numerics import series_reciprocal_sinh_ratio
from gamowpair.propagators import (BoundaryCondition, MomentumPoint, onshell_from_proper_time,
                                   onshell_green_momentum)
from gamowpair.semiclassics import (TunnelingSetup, hyperbola, hyperbolic_initial_state,
                                    integrate_trajectory, sauter_rate, wkb_exponent)

RESULTS = {}


def criterion_1():
    cfg = FieldConfig(1.0, 1.0, 1.0)
    w1 = pair_rate_residues(cfg, 1).terms[0]
    expected = math.exp(-math.pi) / (8 * math.pi ** 3)
    rel = abs(w1 / expected - 1)
    same = sauter_rate(cfg) == w1
    return rel < 1e-12 and same, f"w1={w1:.6e} rel_err={rel:.1e} sauter_identical={same}"


def criterion_2():
    start = time.perf_counter()
    worst = -math.inf
    for chi in (0.5, 1.0, 2.0):
        cfg = FieldConfig.from_chi(chi)
        six = pair_rate_residues(cfg, 6)
        gap = abs(efflag_imag_quadrature(cfg) - six.partial_sums[4])
        worst = max(worst, gap / (abs(six.terms[5]) + 1e-10))
    elapsed = time.perf_counter() - start
    return worst < 1 and elapsed < 5, f"max gap/(|w6|+1e-10)={worst:.3f} runtime={elapsed:.2f}s"


def criterion_3():
    cfg = FieldConfig.from_chi(1.0)
    closed = math.pi * cfg.m ** 2 / (2 * cfg.a)
    values = [wkb_exponent(TunnelingSetup(p0, cfg)) for p0 in (-3.0, 0.0, 1.5, 10.0)]
    rel = max(abs(v / closed - 1) for v in values)
    spread = max(values) - min(values)
    return rel < 1e-10 and spread < 1e-12, f"rel_err={rel:.1e} p0_spread={spread:.1e}"


def spectral_errors(u, a=1.0, s=0.5, n_values=range(5, 41)):
    exact = mehler_kernel(u, u, s, a)
    return np.array([abs(spectral_kernel_sum(u, u, s, a, n) - exact) / abs(exact)
                     for n in n_values])


def criterion_4():
    # the decay ratio is read as the fitted geometric rate of the errors over n_max = 5..40,
    # using only errors above the rounding floor
    a, s = 1.0, 0.5
    n = np.arange(5, 41)
    bound = math.exp(-2 * a * s)
    ok, parts = True, []
    for u in (0.0, 0.5):
        err = spectral_errors(u, a, s, n)
        keep = err > 1e-14
        rate = math.exp(np.polyfit(n[keep], np.log(err[keep]), 1)[0])
        ok &= bool(err[-1] < 1e-10 and rate <= bound)
        parts.append(f"u={u}: err40={err[-1]:.1e} rate={rate:.4f}")
    return ok, "; ".join(parts) + f" (bound {bound:.4f})"


def criterion_5():
    worst = 0.0
    for a in (0.5, 1.0):
        for s in (0.3, 1.0):
            cfg = FieldConfig.from_chi(a)
            product = free_diag_factor(s) ** 2 * oscillator_diag(s, cfg)
            worst = max(worst, abs(product / kernel_diag(s, cfg) - 1))
    return worst < 1e-12, f"max rel_err={worst:.1e}"


def criterion_6():
    worst = 0.0
    for a in (0.5, 1.0, 2.0):
        for n in range(11):
            for m in range(11):
                p = bilinear_pairing(GamowMode(n, Branch.GROWING, a),
                                     GamowMode(m, Branch.DECAYING, a))
                worst = max(worst, abs(p - (n == m)))
    return worst < 1e-8, f"max |pairing - delta|={worst:.1e}"


def criterion_7():
    mode = GamowMode(2, Branch.DECAYING, 1.0)
    try:
        evolve(mode, -0.1)
        rejects = False
    except DomainError:
        rejects = True
    # dyadic proper times keep every exponent exact, so only exp rounding remains
    steps = (0.0, 0.125, 0.25, 0.5, 1.5, 3.0)
    additive = max(abs(evolve(mode, s1) * evolve(mode, s2) / evolve(mode, s1 + s2) - 1)
                   for s1 in steps for s2 in steps)
    involution = all(wigner_conjugate(wigner_conjugate(GamowMode(n, b, 0.7))) ==
                     GamowMode(n, b, 0.7) for n in range(5) for b in Branch)
    maps = wigner_conjugate(mode).branch is Branch.GROWING
    u = np.linspace(-5, 5, 101)
    conj_err = max(float(np.max(np.abs(
        gamow_wavefunction(wigner_conjugate(GamowMode(n, Branch.DECAYING, a)), u)
        - np.conj(gamow_wavefunction(GamowMode(n, Branch.DECAYING, a), u)))))
        for n in range(11) for a in (0.5, 1.0, 2.0))
    ok = rejects and additive < 4e-16 and involution and maps and conj_err == 0.0
    return ok, (f"rejects_s<0={rejects} additivity_err={additive:.1e} involution={involution} "
                f"conj_err={conj_err:.1e}")


def criterion_8():
    cfg = FieldConfig.from_chi(1.0)
    r = cfg.m / cfg.a
    path = integrate_trajectory(hyperbolic_initial_state(cfg), (0.0, 5 * r), 1e-3, cfg)
    s = np.array([p[0] for p in path])
    t_ref, z_ref = hyperbola(s, cfg)
    pos = max(float(np.max(np.abs([p[1].x[0] for p in path] - t_ref))),
              float(np.max(np.abs([p[1].x[3] for p in path] - z_ref))))
    drift = max(abs(p[1].norm - 1) for p in path)
    return pos < 1e-8 and drift < 1e-10, f"max position err={pos:.1e} norm drift={drift:.1e}"


def criterion_9():
    # T satisfies the transform's precondition exp(-eps T) < abs_tol = 1e-12 for both eps;
    # at T = 400 the exact on-shell tail exp(-eps T)/eps = 20 exp(-eps T) would exceed the bound
    T, m2 = 600.0, 1.0
    ok, worst = True, 0.0
    for eps in (0.1, 0.05):
        assert math.exp(-eps * T) < 1e-12
        bound = 10 * math.exp(-eps * T) + 1e-8
        for bc in BoundaryCondition:
            for d in np.linspace(-2, 2, 9):
                q2 = m2 + d
                comps = (math.sqrt(q2), 0, 0, 0) if q2 >= 0 else (0, 0, 0, math.sqrt(-q2))
                p = MomentumPoint(comps)
                # the criterion's own bound prices the truncated tail
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    value = onshell_from_proper_time(p, m2, bc, eps, T)
                gap = abs(value - onshell_green_momentum(p, m2, bc, eps))
                ok &= bool(gap < bound)
                worst = max(worst, gap / bound)
    return ok, f"max gap/bound={worst:.1e} over 9 x 2 x 2 points, T={T:g}"


def criterion_10():
    c4 = series_reciprocal_sinh_ratio(16)[4]
    exact_series = c4 == 7 / 360
    rel = abs(quartic_coefficient(1.0, 0.1) / QUARTIC_COEFFICIENT - 1)
    return rel < 1e-3 and exact_series, f"Richardson rel_err={rel:.1e} c4==7/360: {exact_series}"


def _cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "gamowpair", *args], capture_output=True,
                          cwd=cwd)


def criterion_11():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "sweep.cfg"
        cfg.write_text("chi = 2.0, 0.5, 1.0\nterms = 6\n")
        runs = [_cli(["efflag", "--config", str(cfg)], tmp) for _ in range(2)]
        runs += [_cli(["rate", "--config", str(cfg)], tmp) for _ in range(2)]
        identical = runs[0].stdout == runs[1].stdout and runs[2].stdout == runs[3].stdout
        codes = (
            runs[0].returncode,
            _cli(["rate", "--set", "chi=abc"], tmp).returncode,
            _cli(["efflag", "--set", "chi=1", "--set", "rel_tol=1e-300", "--set",
                  "abs_tol=1e-300", "--out", str(Path(tmp) / "never.csv")], tmp).returncode,
        )
        nothing_written = not (Path(tmp) / "never.csv").exists()
    rng = np.random.default_rng(11)
    values = rng.integers(0, 2 ** 64, size=4000, dtype=np.uint64).view(np.float64)
    values = values[np.isfinite(values)][:1000]
    text = render_csv(OutputTable(("x",), [(float(v),) for v in values]))
    back = np.array([float(x) for x in text.splitlines()[1:]])
    round_trip = values.size == 1000 and np.array_equal(back.view(np.uint64),
                                                        values.view(np.uint64))
    ok = identical and codes == (0, 1, 2) and nothing_written and round_trip
    return ok, (f"byte_identical={identical} exit_codes={codes} no_partial_output="
                f"{nothing_written} round_trip_1000={round_trip}")


CRITERIA = {
    1: ("one-pair rate", criterion_1),
    2: ("residue/quadrature duality", criterion_2),
    3: ("WKB exponent", criterion_3),
    4: ("kernel spectral reconstruction", criterion_4),
    5: ("diagonal factorization", criterion_5),
    6: ("biorthonormality", criterion_6),
    7: ("semigroup split and conjugation", criterion_7),
    8: ("hyperbolic trajectories", criterion_8),
    9: ("propagator transform", criterion_9),
    10: ("Heisenberg-Euler quartic", criterion_10),
    11: ("CLI contract", criterion_11),
}


def report_line(number):
    name, check = CRITERIA[number]
    ok, detail = check()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {name}: {detail}"
    RESULTS[number] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, line = report_line(number)
    assert ok, line


if __name__ == "__main__":
    failures = sum(not report_line(k)[0] for k in sorted(CRITERIA))
    sys.exit(1 if failures else 0)
