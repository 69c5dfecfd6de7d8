"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS/FAIL`` line with the measured
quantity and its tolerance. The lines are repeated in the pytest terminal
summary, so they show up without ``-s``.
"""

import time

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from sbf.bvp import decomposition_error
from sbf.evolution import (EvolutionState, SchemeConfig, _grid_size, evolve, main_part_step,
                           mean_tangent_axis, weighted_energy)
from sbf.geometry import (FourierCurve, compute_length, periodicized_frame,
                          rescale_to_unit_length)
from sbf.multipliers import ntd_eigen
from sbf.verify import (boundary_integral_errors, geometry_checks, inverse_identity_errors, null_identity_check,
                        straight_quadrature_errors, suite_bessel, theta_identity_errors,
                        wronskian_error)

pytestmark = pytest.mark.slow


RESULTS = {}


def report(n, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, detail


def test_criterion_01_boundary_integral_matches_eigenvalues():
    t0 = time.perf_counter()
    errs = boundary_integral_errors(50)
    dt = time.perf_counter() - t0
    worst = max(errs.values())
    report(1, worst <= 1e-10 and dt < 1.0,
           f"max rel err {worst:.2e} <= 1e-10 over 50 z in [0.01, 10], both directions; {dt:.3f}s < 1s")


def test_criterion_02_wronskian():
    err = wronskian_error(n=200, lo=1e-3, hi=50.0)
    report(2, err <= 1e-12, f"max |z(K1 I0 + K0 I1) - 1| = {err:.2e} <= 1e-12 on 200 points")


def test_criterion_03_bessel_bounds():
    checks = [c for c in suite_bessel() if not c.name.startswith("wronskian")]
    failed = [c.name for c in checks if not c.passed]
    detail = "; ".join(f"{c.name}: {c.measured:.6g}" for c in checks)
    report(3, not failed, f"{len(checks) - len(failed)}/{len(checks)} bound checks hold ({detail})"
           + (f"; failed: {failed}" if failed else ""))


def test_criterion_04_inverse_identities():
    errs = inverse_identity_errors()
    worst = max(errs.values())
    report(4, worst <= 1e-10, f"max |forward @ inverse - I| = {worst:.2e} <= 1e-10 (t and n)")


def test_criterion_05_theta_identities():
    worst = max(theta_identity_errors().values())
    report(5, worst <= 1e-8, f"max |LHS - RHS| = {worst:.2e} <= 1e-8, 6 identities at z = 0.5, 2, 10")


def test_criterion_06_quadrature_vs_symbols():
    t0 = time.perf_counter()
    fine = straight_quadrature_errors(ns=256, ntheta=32)
    coarse = straight_quadrature_errors(ns=128, ntheta=16)
    dt = time.perf_counter() - t0
    worst = max(fine.values())
    ratio = max(coarse.values()) / worst
    report(6, worst <= 1e-3 and ratio >= 2 and dt < 60,
           f"max rel err {worst:.2e} <= 1e-3 at 256x32; refinement ratio {ratio:.1f} >= 2; "
           f"{dt:.1f}s < 60s")


def test_criterion_07_null_identities():
    kd, pd = null_identity_check()
    report(7, max(kd, pd) <= 1e-6,
           f"stresslet {kd:.2e}, pressure {pd:.2e} <= 1e-6 at 128x32")


def _decomposition_velocity(s):
    w = 2 * np.pi * s
    return np.stack([np.sin(w), np.cos(2 * w), 0.5 * np.sin(w) + 0.3 * np.cos(w)], axis=1)


def test_criterion_08_decomposition_convergence():
    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=0.08))
    rows = decomposition_error(curve, [0.08, 0.04, 0.02], _decomposition_velocity)
    ratios = [r.ratio for r in rows[1:]]
    errs = ", ".join(f"{r.error:.3g}" for r in rows)
    report(8, min(ratios) >= 1.5,
           f"e(eps) = {errs} for eps = 0.08, 0.04, 0.02; ratios "
           f"{', '.join(f'{x:.2f}' for x in ratios)} >= 1.5")


def test_criterion_09_circle_law():
    eps = 0.05
    t0 = time.perf_counter()
    slope = (2 * np.pi) ** 3 * ntd_eigen("n", eps, 1)
    r0 = 1 / (2 * np.pi)
    horizon = 0.05 * r0 / slope
    steps = 50
    dt = horizon / steps
    arg = dt * (2 * np.pi) ** 4 * ntd_eigen("n", eps, 1)
    traj = evolve(FourierCurve.circle(eps=eps), SchemeConfig(dt=dt, steps=steps, ns=16))
    ts = np.array([s.t for s in traj.states])
    radii = []
    high = 0.0
    for st in traj.states:
        x = st.curve.samples(64)
        radii.append(np.linalg.norm(x - x.mean(axis=0), axis=1).mean())
        spec = np.fft.fft(x, axis=0) / 64
        k = np.abs(np.fft.fftfreq(64, 1 / 64))
        high = max(high, float(np.abs(spec[k >= 2]).max()))
    fitted = -np.polyfit(ts, radii, 1)[0]
    rel = abs(fitted / slope - 1)
    elapsed = time.perf_counter() - t0
    report(9, rel <= 0.01 and high <= 1e-10 and arg <= 0.1 and elapsed < 10,
           f"slope rel err {rel:.1e} <= 1e-2 (R: {radii[0]:.5f} -> {radii[-1]:.5f}); "
           f"|k|>=2 max {high:.1e} <= 1e-10; step argument {arg:.3f} <= 0.1; {elapsed:.2f}s < 10s")


def _random_curve(seed, modes=4, eps=0.05):
    rng = np.random.default_rng(seed)
    n = 64
    s = np.arange(n) / n
    pts = np.zeros((n, 3))
    for k in range(1, modes + 1):
        a, b = rng.normal(size=3) / k**2, rng.normal(size=3) / k**2
        pts += np.outer(np.cos(2 * np.pi * k * s), a) + np.outer(np.sin(2 * np.pi * k * s), b)
    c = FourierCurve.from_samples(pts, modes, eps)
    return c.transformed(scale=1 / compute_length(c))


def test_criterion_10_scheme_consistency():
    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=0.05))
    semigroup = 0.0
    for variant in ("frame-spectral", "cartesian"):
        one = SchemeConfig(variant=variant, dt=2e-5, ns=25)
        half = SchemeConfig(variant=variant, dt=1e-5, ns=25)
        st = EvolutionState(0.0, curve, compute_length(curve))
        n = _grid_size(curve, one)
        frozen = {"lam": st.lam, "frame": periodicized_frame(curve, n, steps=32 * n),
                  "axis": mean_tangent_axis(curve, n)}
        a = main_part_step(st, one, frozen)
        b = main_part_step(main_part_step(st, half, frozen), half, frozen)
        semigroup = max(semigroup, float(np.abs(a.curve.samples(n) - b.curve.samples(n)).max()))

    st = EvolutionState(0.0, _random_curve(1), 1.0)
    cfg = SchemeConfig(variant="cartesian", dt=1e-6)
    energy = [weighted_energy(st.curve)]
    for _ in range(1000):
        st = main_part_step(st, cfg)
        energy.append(weighted_energy(st.curve))
    increase = float(np.max(np.diff(energy)))

    rot = Rotation.from_euler("zyx", [0.7, -0.4, 1.3]).as_matrix()
    cfg = SchemeConfig(dt=2e-5, ns=25)
    plain = main_part_step(EvolutionState(0.0, curve, compute_length(curve)), cfg)
    turned = curve.transformed(rotation=rot)
    moved = main_part_step(EvolutionState(0.0, turned, compute_length(turned)), cfg)
    equiv = float(np.abs(moved.curve.samples(64) - plain.curve.samples(64) @ rot.T).max())

    report(10, semigroup <= 1e-12 and increase <= 0 and equiv <= 1e-8,
           f"two half steps vs one step {semigroup:.1e} <= 1e-12; weighted energy "
           f"{energy[0]:.3f} -> {energy[-1]:.3f}, max increment {increase:.1e} <= 0 over 1000 steps; "
           f"rotation equivariance {equiv:.1e} <= 1e-8")


def test_criterion_11_geometry():
    g = geometry_checks()
    ok = (g["ode_residual"] <= 1e-6 and g["kappa3"] <= np.pi and g["circle_kappa3"] <= 1e-8
          and g["circle_kappa1"] <= 1e-8)
    report(11, ok, f"frame ODE residual {g['ode_residual']:.1e} <= 1e-6; |kappa3| = {g['kappa3']:.4f} "
           f"<= pi; circle kappa3 {g['circle_kappa3']:.1e}, |kappa1 - 2 pi| {g['circle_kappa1']:.1e} <= 1e-8")
