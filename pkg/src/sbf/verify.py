"""Self-checks grouped into suites; each check reports a measured value and its bound."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import multipliers as mp_
from .specfun import bessel_i, bessel_k, ratio, ratio_derivative

SUITES = ("bessel", "symbols", "quadrature", "identities", "geometry")

# fitted by a sweep over z in [1e-8, 1) (see tests/test_specfun.py)
SMALL_Z_LOWER = 0.99
SMALL_Z_UPPER = 1.30
# the printed lower bound on K0/K1 stops holding near z = 41.6
K0K1_BOUND_LIMIT = 40.0


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    passed: bool

    def as_dict(self):
        return {"name": self.name, "status": "pass" if self.passed else "fail",
                "measured": self.measured, "bound": self.bound}


def _le(name, measured, bound):
    measured = float(measured)
    return Check(name, measured, float(bound), bool(np.isfinite(measured) and measured <= bound))


def _ge(name, measured, bound):
    measured = float(measured)
    return Check(name, measured, float(bound), bool(np.isfinite(measured) and measured >= bound))


# ---------------------------------------------------------------- bessel

def wronskian_error(n=200, lo=1e-3, hi=50.0):
    z = np.geomspace(lo, hi, n)
    k0, k1 = bessel_k(0, z, scaled=True), bessel_k(1, z, scaled=True)
    i0, i1 = bessel_i(0, z, scaled=True), bessel_i(1, z, scaled=True)
    return float(np.max(np.abs(z * (k1 * i0 + k0 * i1) - 1.0)))


def k_ratio_bound_margins(z):
    """Signed margins (>= 0 when the bound holds) of the large-z ratio bounds."""
    r10 = ratio("K1K0", z)
    r01 = ratio("K0K1", z)
    a = r10 - 1 - 1 / (2 * z) + 1 / (8 * z**2)
    b = r01 - 1 + 1 / (2 * z) - 3 / (8 * z**2)
    return {"K1/K0 lower": a, "K1/K0 upper": 1 / (8 * z**3) - a,
            "K0/K1 lower": b + 4 / (11 * z**3), "K0/K1 upper": -b}


def small_z_ratio_constants(z):
    """``z K1/K0 |log(z/3)|`` and ``z K1/K0 |log(z/2)|`` for ``0 < z < 1``."""
    r = ratio("K1K0", z)
    return z * r * np.abs(np.log(z / 3)), z * r * np.abs(np.log(z / 2))


def i_ratio_quantities(z):
    big = ratio("I0I1", z)
    small = ratio("I1I0", z)
    b = z * (big - small)
    g = 2 / z + (1 - z * big) * (big - small)
    return b, g


def ratio_derivative_fd_error(kinds=("K1K0", "K0K1", "I1I0", "I0I1")):
    z = np.geomspace(0.05, 30, 60)
    worst = 0.0
    for kind in kinds:
        h = 1e-5 * z
        fd = (ratio(kind, z + h) - ratio(kind, z - h)) / (2 * h)
        an = ratio_derivative(kind, z)
        worst = max(worst, float(np.max(np.abs(fd - an) / np.maximum(1.0, np.abs(an)))))
    return worst


def suite_bessel():
    out = [_le("wronskian |z(K1 I0 + K0 I1) - 1|", wronskian_error(), 1e-12)]
    z = np.linspace(1.0, K0K1_BOUND_LIMIT, 400)
    for name, margin in k_ratio_bound_margins(z).items():
        strict = name in ("K1/K0 lower", "K0/K1 upper")
        m = float(np.min(margin))
        out.append(Check(f"{name} bound on [1, {K0K1_BOUND_LIMIT:g}]", m, 0.0, m > 0 if strict else m >= 0))
    zz = np.geomspace(1e-4, 200, 500)
    diff = ratio("K1K0", zz) - ratio("K0K1", zz)
    out.append(_ge("K1/K0 - K0/K1 >= 0", np.min(diff), 0.0))
    out.append(_ge("1/z - (K1/K0 - K0/K1) >= 0", np.min(1 / zz - diff), 0.0))
    zi = np.geomspace(0.1, 200, 500)
    b, g = i_ratio_quantities(zi)
    out.append(_ge("z(I0/I1 - I1/I0) >= 1", np.min(b), 1.0))
    out.append(Check("z(I0/I1 - I1/I0) < 2", float(np.max(b)), 2.0, bool(np.max(b) < 2.0)))
    out.append(Check("2/z + (1 - z I0/I1)(I0/I1 - I1/I0) < 0", float(np.max(g)), 0.0, bool(np.max(g) < 0)))
    zs = np.geomspace(1e-8, 0.999, 400)
    lo, hi = small_z_ratio_constants(zs)
    out.append(Check("small-z lower constant", float(np.min(lo)), SMALL_Z_LOWER, bool(np.min(lo) > SMALL_Z_LOWER)))
    out.append(Check("small-z upper constant", float(np.max(hi)), SMALL_Z_UPPER, bool(np.max(hi) < SMALL_Z_UPPER)))
    out.append(_le("ratio derivatives vs finite differences", ratio_derivative_fd_error(), 1e-6))
    z2 = np.geomspace(1e-3, 50, 100)
    rec = bessel_k(2, z2) - bessel_k(0, z2) - 2 * bessel_k(1, z2) / z2
    out.append(_le("K2 = K0 + 2 K1/z", np.max(np.abs(rec) / bessel_k(2, z2)), 1e-13))
    return out


# ---------------------------------------------------------------- symbols

def boundary_integral_errors(n=50):
    """Max relative mismatch of the boundary-integral DtN against the eigenvalues."""
    z = np.geomspace(0.01, 10, n)
    eps = 0.01
    k = z / (2 * np.pi * eps)
    out = {}
    for d in ("t", "n"):
        direct = mp_.dtn_eigen(d, eps, k)
        bi = mp_.dtn_via_boundary_integral(d, eps, k)
        out[d] = float(np.max(np.abs(bi - direct) / np.abs(direct)))
    return out


def inverse_identity_errors(n=50):
    z = np.geomspace(0.01, 10, n)
    eps = 0.01
    k = z / (2 * np.pi * eps)
    out = {}
    for d, fwd in (("t", mp_.single_layer_forward_tangential), ("n", mp_.single_layer_forward_normal)):
        err = 0.0
        for sign in (1, -1):
            prod = fwd(eps, sign * k) @ mp_.single_layer_inverse_matrix(d, eps, sign * k)
            err = max(err, float(np.max(np.abs(prod - np.eye(prod.shape[-1])))))
        out[d] = err
    return out


def suite_symbols():
    t0 = time.perf_counter()
    fig = boundary_integral_errors()
    elapsed = time.perf_counter() - t0
    inv = inverse_identity_errors()
    return [_le("boundary-integral vs eigenvalue, tangential", fig["t"], 1e-10),
            _le("boundary-integral vs eigenvalue, normal", fig["n"], 1e-10),
            _le("symbol check runtime [s]", elapsed, 1.0),
            _le("forward x inverse - I, tangential", inv["t"], 1e-10),
            _le("forward x inverse - I, normal", inv["n"], 1e-10)]


# ---------------------------------------------------------------- quadrature

_NORMAL_BASIS = np.diag([0.5, -0.5j, 0.5])    # theta-mode 1 coefficients of the normal basis
_EX = np.array([1.0, -1.0, 0.0])             # e_x = cos e_r - sin e_theta


def exact_mode_response(kind, data, eps, k):
    """Analytic symbol response to ``exp(2 pi i k s) e_z`` or ``e_x`` (``k > 0``).

    Tangential responses are coefficient pairs on ``(e_z, e_r)``; normal ones on
    ``(cos e_r, sin e_theta, cos e_z)``.
    """
    z = mp_.symbol_argument(eps, k)
    if kind == "single":
        if data == "ez":
            return mp_.single_layer_forward_tangential(eps, k)[:, 0]
        return mp_.single_layer_forward_normal(eps, k) @ _EX
    if data == "ez":
        q_e, q_f = mp_.double_layer_tangential(z)
        return np.array([q_e, 1j * q_f])
    q_n, q_o, q_p = mp_.double_layer_normal(z)
    return np.array([q_n, -q_o, 1j * q_p])


def discrete_mode_response(op, data, k):
    """Response of a :class:`~sbf.layers.FourierBlockOperator` in the same bases."""
    if data == "ez":
        col = op.blocks[k, 0] @ np.array([0.0, 0.0, 1.0])
        return np.array([col[2], col[0]])
    m = np.linalg.solve(_NORMAL_BASIS, op.blocks[k, 1] @ _NORMAL_BASIS)
    return m @ _EX


def straight_quadrature_errors(eps=0.05, ns=256, ntheta=32, kmax=4):
    """Relative errors of the discrete single/double layers against their symbols."""
    from .geometry import straight_surface_grid
    from .layers import LayerQuadrature

    q = LayerQuadrature(straight_surface_grid(eps, ns, ntheta))
    out = {}
    for kind in ("single", "double"):
        op = q.operator(kind)
        for data in ("ez", "ex"):
            for k in range(1, kmax + 1):
                ex = exact_mode_response(kind, data, eps, k)
                dv = discrete_mode_response(op, data, k)
                out[(kind, data, k)] = float(np.linalg.norm(dv - ex) / np.linalg.norm(ex))
    return out


def suite_quadrature():
    t0 = time.perf_counter()
    fine = straight_quadrature_errors(ns=256, ntheta=32)
    coarse = straight_quadrature_errors(ns=128, ntheta=16)
    elapsed = time.perf_counter() - t0
    out = [_le("max relative error at 256x32", max(fine.values()), 1e-3)]
    # the ratio compares worst-case errors; single entries can sit at a ~1e-7 floor
    ratio = max(coarse.values()) / max(fine.values())
    out.append(_ge("max-error ratio 128x16 -> 256x32", ratio, 2.0))
    out.append(_le("quadrature runtime [s]", elapsed, 60.0))
    return out


# ---------------------------------------------------------------- identities

def theta_identity_errors(zs=(0.5, 2.0, 10.0)):
    from .layers import bessel_theta_identity

    return {(i, z): abs(np.subtract(*bessel_theta_identity(i, z))) for i in range(1, 7) for z in zs}


def null_identity_check(ns=128, ntheta=32, eps=0.05):
    from .geometry import FourierCurve, rescale_to_unit_length, surface_grid
    from .layers import null_identity_residuals

    curve = rescale_to_unit_length(FourierCurve.perturbed_circle(0.05, 3, eps=eps))
    grid = surface_grid(curve, ns, ntheta)
    # exterior probes: off the tube by 3 eps along the normal, far field, and the center
    idx = [(0, 0), (ns // 3, ntheta // 4), (2 * ns // 3, ntheta // 2)]
    pts = [grid.centerline[i] + 3 * eps * grid.normals[i, j] for i, j in idx]
    pts += [np.array([0.0, 0.0, 0.5]), np.array([0.4, -0.3, 0.1])]
    return null_identity_residuals(grid, np.array(pts))


def suite_identities():
    errs = theta_identity_errors()
    kd, pd = null_identity_check()
    return [_le("theta-integral identities (6 x 3)", max(errs.values()), 1e-8),
            _le("exterior integral of the stresslet", kd, 1e-6),
            _le("exterior integral of the double-layer pressure", pd, 1e-6)]


# ---------------------------------------------------------------- geometry

def nonplanar_curve(eps=0.05):
    """Asymmetric closed curve with nonzero frame holonomy."""
    from .geometry import FourierCurve

    n = 64
    s = np.arange(n) / n
    tp = 2 * np.pi * s
    pts = np.stack([np.cos(tp) + 0.3 * np.cos(2 * tp), np.sin(tp),
                    0.3 * np.sin(tp) + 0.2 * np.cos(2 * tp)], axis=1)
    return FourierCurve.from_samples(pts, 2, eps)


def geometry_checks():
    from .geometry import FourierCurve, frame_ode_residual, periodicized_frame

    curve = nonplanar_curve()
    fr = periodicized_frame(curve, 512)
    circle = periodicized_frame(FourierCurve.circle(), 256)
    return {"ode_residual": frame_ode_residual(curve, fr), "kappa3": abs(fr.kappa3),
            "circle_kappa3": abs(circle.kappa3),
            "circle_kappa1": float(np.max(np.abs(circle.kappa1 - 2 * np.pi))),
            "circle_kappa2": float(np.max(np.abs(circle.kappa2)))}


def suite_geometry():
    g = geometry_checks()
    return [_le("frame ODE residual", g["ode_residual"], 1e-6),
            _le("|kappa3| <= pi", g["kappa3"], np.pi),
            _le("circle kappa3 = 0", g["circle_kappa3"], 1e-8),
            _le("circle kappa1 = 2 pi", g["circle_kappa1"], 1e-8),
            _le("circle kappa2 = 0", g["circle_kappa2"], 1e-8)]


_RUNNERS = {"bessel": suite_bessel, "symbols": suite_symbols, "quadrature": suite_quadrature,
            "identities": suite_identities, "geometry": suite_geometry}


def run_suite(name: str) -> dict:
    """Run one suite (or ``all``) and return the JSON-ready report."""
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        for c in _RUNNERS[n]():
            d = c.as_dict()
            d["suite"] = n
            checks.append(d)
    return {"suite": name, "checks": checks, "pass": all(c["status"] == "pass" for c in checks)}
