"""Closed filament centerlines, frames and the tubular surface around them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import GeometryError

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------- curves

@dataclass(frozen=True, eq=False)
class FourierCurve:
    """Closed curve ``X(s) = sum_k c_k exp(2 pi i k s)`` with ``k = -K..K``.

    Parameters
    ----------
    coeffs : ndarray, shape (2K+1, 3), complex
        Row ``j`` holds the coefficient of mode ``k = j - K``.
    eps : float
        Radius-to-length ratio of the tube around the curve.
    """

    coeffs: np.ndarray
    eps: float = 0.01

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[1] != 3 or c.shape[0] % 2 != 1:
            raise GeometryError("coeffs must have shape (2K+1, 3)")
        if np.max(np.abs(c - np.conj(c[::-1]))) > 1e-10 * max(1.0, np.max(np.abs(c))):
            raise GeometryError("coefficients are not conjugate-symmetric (curve not real)")
        # enforce exact symmetry
        c = 0.5 * (c + np.conj(c[::-1]))
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "eps", float(self.eps))

    @property
    def modes(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(-self.modes, self.modes + 1)

    def evaluate(self, s, derivative: int = 0) -> np.ndarray:
        """Evaluate ``d^n X / ds^n`` at parameter values ``s``; shape ``(len(s), 3)``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = self.wavenumbers
        mult = (2j * np.pi * k) ** derivative
        phase = np.exp(2j * np.pi * np.outer(s, k))
        return np.real(phase @ (mult[:, None] * self.coeffs))

    def samples(self, n: int, derivative: int = 0) -> np.ndarray:
        return self.evaluate(np.arange(n) / n, derivative)

    def with_modes(self, modes: int) -> "FourierCurve":
        """Zero-pad or truncate to ``modes``."""
        return FourierCurve(_resize_modes(self.coeffs, modes), self.eps)

    def with_eps(self, eps: float) -> "FourierCurve":
        return FourierCurve(self.coeffs, eps)

    def transformed(self, rotation=None, scale: float = 1.0, shift=None) -> "FourierCurve":
        """Rigidly rotate, uniformly scale and shift the curve."""
        c = self.coeffs * scale
        if rotation is not None:
            c = c @ np.asarray(rotation, dtype=float).T
        if shift is not None:
            c = c.copy()
            c[self.modes] += np.asarray(shift, dtype=float)
        return FourierCurve(c, self.eps)

    # constructors

    @classmethod
    def from_samples(cls, values, modes: int | None = None, eps: float = 0.01) -> "FourierCurve":
        """Build from ``N`` equispaced samples, truncating at ``modes``."""
        values = np.asarray(values, dtype=float)
        n = values.shape[0]
        if modes is None:
            modes = (n - 1) // 2
        if 2 * modes + 1 > n:
            raise GeometryError("not enough samples for the requested mode count")
        spec = np.fft.fft(values, axis=0) / n
        k = np.arange(-modes, modes + 1)
        return cls(spec[k % n], eps)

    @classmethod
    def circle(cls, radius: float = 1.0 / TWO_PI, eps: float = 0.01, center=(0.0, 0.0, 0.0)):
        """Planar circle in the xy-plane traversed once counterclockwise."""
        c = np.zeros((3, 3), dtype=complex)
        c[2] = radius * np.array([0.5, -0.5j, 0.0])
        c[0] = np.conj(c[2])
        c[1] = np.asarray(center, dtype=float)
        return cls(c, eps)

    @classmethod
    def perturbed_circle(cls, amplitude: float = 0.05, mode: int = 3, eps: float = 0.01,
                         out_of_plane: float = 0.0):
        """Unit-circumference circle with a radial mode-``mode`` perturbation.

        ``X = R(1 + a cos(2 pi m s))(cos, sin, 0) + (0, 0, b R sin(2 pi m s))``
        with ``R = 1/(2 pi)``. Not arclength-parameterized.
        """
        radius = 1.0 / TWO_PI
        n = 8 * (mode + 2)
        s = np.arange(n) / n
        r = radius * (1 + amplitude * np.cos(TWO_PI * mode * s))
        pts = np.stack([r * np.cos(TWO_PI * s), r * np.sin(TWO_PI * s),
                        out_of_plane * radius * np.sin(TWO_PI * mode * s)], axis=1)
        return cls.from_samples(pts, mode + 1, eps)

    @classmethod
    def ellipse(cls, a: float = 1.0, b: float = 0.5, eps: float = 0.01):
        c = np.zeros((3, 3), dtype=complex)
        c[2] = np.array([0.5 * a, -0.5j * b, 0.0])
        c[0] = np.conj(c[2])
        return cls(c, eps)

    # serialization

    def to_json(self) -> str:
        return json.dumps({
            "modes": self.modes,
            "eps": self.eps,
            "coeffs": [[[float(v.real), float(v.imag)] for v in row] for row in self.coeffs],
        })

    @classmethod
    def from_json(cls, text: str) -> "FourierCurve":
        try:
            data = json.loads(text)
            modes = int(data["modes"])
            coeffs = np.array([[complex(re, im) for re, im in row] for row in data["coeffs"]])
            eps = float(data["eps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed curve JSON: {exc}") from exc
        if coeffs.shape != (2 * modes + 1, 3):
            raise GeometryError("curve JSON: coeffs length does not match modes")
        return cls(coeffs, eps)


def _resize_modes(coeffs, modes):
    k_old = (coeffs.shape[0] - 1) // 2
    out = np.zeros((2 * modes + 1, 3), dtype=complex)
    m = min(k_old, modes)
    out[modes - m: modes + m + 1] = coeffs[k_old - m: k_old + m + 1]
    return out


def _default_grid(curve: FourierCurve, minimum: int = 256) -> int:
    n = max(minimum, 16 * curve.modes)
    return 1 << int(np.ceil(np.log2(n)))


# ---------------------------------------------------------------- length and arclength

def compute_length(curve: FourierCurve) -> float:
    """Length ``int_0^1 |X'(s)| ds`` by the periodic trapezoid rule, refined until stable."""
    n = _default_grid(curve, 64)
    prev = None
    while True:
        speed = np.linalg.norm(curve.samples(n, 1), axis=1)
        val = float(np.mean(speed))
        if prev is not None and abs(val - prev) <= 1e-15 * val:
            return val
        if n >= 1 << 17:
            return val
        prev = val
        n *= 2


def _check_regular(speed):
    if np.min(speed) <= 1e-12 * max(np.max(speed), 1e-300):
        raise GeometryError("curve is not regular (vanishing speed)")


def _reparameterize_once(curve: FourierCurve, modes: int, nfine: int) -> FourierCurve:
    speed = np.linalg.norm(curve.samples(nfine, 1), axis=1)
    _check_regular(speed)
    length = np.mean(speed)
    ghat = np.fft.fft(speed / length) / nfine
    kf = np.fft.fftfreq(nfine, 1.0 / nfine)
    nz = kf != 0
    anti = np.zeros_like(ghat)
    anti[nz] = ghat[nz] / (2j * np.pi * kf[nz])

    def arc(sig):
        ph = np.exp(2j * np.pi * np.outer(sig, kf[nz]))
        return sig + np.real((ph - 1.0) @ anti[nz])

    m = max(4 * modes + 4, 64)
    target = np.arange(m) / m
    sig = target.copy()
    for _ in range(50):
        resid = arc(sig) - target
        sp = np.linalg.norm(curve.evaluate(sig, 1), axis=1) / length
        step = resid / sp
        sig = sig - step
        if np.max(np.abs(step)) < 1e-15:
            break
    return FourierCurve.from_samples(curve.evaluate(sig), modes, curve.eps)


def speed_deviation(curve: FourierCurve, n: int | None = None) -> float:
    """``max | |X'| / lambda - 1 |`` on an ``n``-point grid."""
    n = n or max(4 * curve.modes, 64)
    speed = np.linalg.norm(curve.samples(n, 1), axis=1)
    return float(np.max(np.abs(speed / compute_length(curve) - 1.0)))


def arclength_reparameterize(curve: FourierCurve, tol: float = 1e-10,
                             max_modes: int = 1024) -> FourierCurve:
    """Constant-speed reparameterization preserving the point at ``s = 0``.

    The mode count is increased from ``curve.modes`` by doubling until the
    resampled curve has uniform speed to ``tol`` (relative to its length);
    constant-speed parameterizations of non-circular curves are generally not
    band-limited, so the input mode count is a lower bound.

    Raises
    ------
    GeometryError
        If the curve is not regular or ``max_modes`` is not enough.
    """
    modes = max(curve.modes, 1)
    while True:
        nfine = max(_default_grid(curve, 512), 8 * modes)
        out = curve
        for _ in range(50):
            out = _reparameterize_once(out, modes, nfine)
            dev = speed_deviation(out, max(8 * modes, 64))
            if dev <= tol:
                return out
            nfine = max(nfine, _default_grid(out, 512))
            if dev > 1e-3:
                break
        if modes >= max_modes:
            raise GeometryError(f"arclength reparameterization did not reach {tol:g} "
                                f"with {max_modes} modes (deviation {dev:.2e})")
        modes = min(2 * modes, max_modes)


def rescale_to_unit_length(curve: FourierCurve, **kwargs) -> FourierCurve:
    """Uniformly rescale about ``X(0)`` to unit length, then reparameterize by arclength."""
    length = compute_length(curve)
    if not length > 0:
        raise GeometryError("curve has zero length")
    base = curve.evaluate(0.0)[0]
    c = curve.coeffs / length
    c[curve.modes] += base * (1.0 - 1.0 / length)
    return arclength_reparameterize(FourierCurve(c, curve.eps), **kwargs)


# ---------------------------------------------------------------- curvature and separation

def curvature(curve: FourierCurve, s) -> np.ndarray:
    """Curvature ``|X' x X''| / |X'|^3`` (parameterization independent)."""
    d1 = curve.evaluate(s, 1)
    d2 = curve.evaluate(s, 2)
    sp = np.linalg.norm(d1, axis=1)
    return np.linalg.norm(np.cross(d1, d2), axis=1) / sp**3


def max_curvature(curve: FourierCurve) -> float:
    """Maximum curvature, grid search refined by a bounded scalar search."""
    n = _default_grid(curve, 512)
    s = np.arange(n) / n
    kap = curvature(curve, s)
    i = int(np.argmax(kap))
    res = minimize_scalar(lambda t: -curvature(curve, [t])[0],
                          bounds=(s[i] - 1.0 / n, s[i] + 1.0 / n), method="bounded",
                          options={"xatol": 1e-13})
    return float(max(kap[i], -res.fun))


def min_separation(curve: FourierCurve, n: int | None = None) -> float:
    """Chord-arc constant ``inf |X(s) - X(s')| / |s - s'|_T`` over distinct parameters.

    Pairs closer than two grid cells are excluded (their ratio is the local
    speed). The grid minimum is polished by a Nelder-Mead search.
    """
    n = n or _default_grid(curve, 256)
    s = np.arange(n) / n
    x = curve.evaluate(s)
    ds = np.abs(s[:, None] - s[None, :])
    ds = np.minimum(ds, 1.0 - ds)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=2) / ds
    ratio[ds < 2.0 / n - 1e-14] = np.inf
    i, j = np.unravel_index(np.argmin(ratio), ratio.shape)
    best = float(ratio[i, j])

    def f(p):
        d = abs(p[0] - p[1]) % 1.0
        d = min(d, 1.0 - d)
        if d < 2.0 / n:
            return np.inf
        return float(np.linalg.norm(curve.evaluate(p[0])[0] - curve.evaluate(p[1])[0]) / d)

    res = minimize(f, [s[i], s[j]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000})
    return float(min(best, res.fun))


def max_radius_ratio(curve: FourierCurve) -> float:
    """Largest admissible ``eps`` for a unit-length curve: ``min(1/kappa_*, |X|_*/2)``."""
    return min(1.0 / max_curvature(curve), 0.5 * min_separation(curve))


# ---------------------------------------------------------------- frames

@dataclass(frozen=True, eq=False)
class FrameField:
    """Orthonormal frame sampled at ``s_i = i/N``.

    Derivatives are with respect to arclength. For a periodicized frame,
    ``e_n1' = -kappa1 e_t + kappa3 e_n2`` and ``e_n2' = -kappa2 e_t - kappa3 e_n1``.
    ``holonomy`` is the signed rotation of the transported normal after one loop.
    """

    s: np.ndarray
    e_t: np.ndarray
    e_n1: np.ndarray
    e_n2: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    kappa3: float
    length: float
    holonomy: float = 0.0
    periodic: bool = True

    @property
    def size(self) -> int:
        return len(self.s)

    def matrix(self) -> np.ndarray:
        """Columns ``(e_n1, e_n2, e_t)`` per sample: maps straight-tube components
        ``(x, y, z)`` to Cartesian vectors. Shape ``(N, 3, 3)``."""
        return np.stack([self.e_n1, self.e_n2, self.e_t], axis=2)

    def orthonormality_error(self) -> float:
        m = self.matrix()
        gram = np.einsum("nij,nik->njk", m, m)
        return float(np.max(np.abs(gram - np.eye(3))))


def straight_frame(n: int) -> FrameField:
    """Constant frame ``(e_z, e_x, e_y)`` of the straight tube."""
    s = np.arange(n) / n
    ones = np.ones((n, 1))
    return FrameField(s, ones * [0, 0, 1.0], ones * [1.0, 0, 0], ones * [0, 1.0, 0],
                      np.zeros(n), np.zeros(n), 0.0, 1.0)


def _tangent_and_derivative(curve, sig):
    d1 = curve.evaluate(sig, 1)
    d2 = curve.evaluate(sig, 2)
    sp = np.linalg.norm(d1, axis=1)
    t = d1 / sp[:, None]
    # d e_t / d sigma
    dt = (d2 - np.sum(d2 * t, axis=1)[:, None] * t) / sp[:, None]
    return t, dt, sp


def _transport(curve, steps, e1_start=None):
    sig = np.arange(2 * steps + 1) / (2 * steps)
    t, dt, _ = _tangent_and_derivative(curve, sig)
    if e1_start is None:
        # principal normal when defined, so a circle gets kappa1 = +curvature
        if np.linalg.norm(dt[0]) > 1e-8 * np.linalg.norm(dt, axis=1).max(initial=1e-300):
            e1_start = dt[0]
        else:
            e1_start = np.eye(3)[int(np.argmin(np.abs(t[0])))]
    e1 = np.asarray(e1_start, dtype=float)
    e1 = e1 - np.dot(e1, t[0]) * t[0]
    e1 /= np.linalg.norm(e1)
    h = 1.0 / steps
    out = np.empty((steps + 1, 3))
    out[0] = e1

    def rhs(e, j):
        return -np.dot(e, dt[j]) * t[j]

    for i in range(steps):
        j = 2 * i
        k1 = rhs(e1, j)
        k2 = rhs(e1 + 0.5 * h * k1, j + 1)
        k3 = rhs(e1 + 0.5 * h * k2, j + 1)
        k4 = rhs(e1 + h * k3, j + 2)
        e1 = e1 + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        tn = t[j + 2]
        e1 = e1 - np.dot(e1, tn) * tn
        e1 /= np.linalg.norm(e1)
        out[i + 1] = e1
    return out, t[::2]


def _frame_steps(curve, n):
    steps = max(32 * curve.modes, 2048, n)
    steps = int(np.ceil(steps / n) * n)
    return steps


def bishop_frame(curve: FourierCurve, n: int | None = None, steps: int | None = None,
                 e1_start=None) -> FrameField:
    """Parallel-transport (rotation-minimizing) frame sampled at ``n`` points.

    The transport ODE ``e1' = -(e1 . e_t') e_t`` is integrated with classical
    RK4 and re-projected onto the normal plane after every step. The returned
    frame is generally not periodic; its ``holonomy`` is the signed angle from
    the transported normal at ``s = 1`` back to the initial one, positive in the
    ``(e1, e2)`` orientation with ``e2 = e_t x e1``.
    """
    n = n or _default_grid(curve, 256)
    steps = steps or _frame_steps(curve, n)
    if steps % n:
        raise GeometryError("steps must be a multiple of n")
    e1, t = _transport(curve, steps, e1_start)
    e2 = np.cross(t, e1)
    mismatch_cos = float(np.clip(np.dot(e1[-1], e1[0]), -1.0, 1.0))
    mismatch_sin = float(np.dot(e1[-1], e2[0]))
    holonomy = float(np.arctan2(mismatch_sin, mismatch_cos))
    stride = steps // n
    sig = np.arange(n) / n
    tt, dt, sp = _tangent_and_derivative(curve, sig)
    length = compute_length(curve)
    e1s, e2s = e1[:-1:stride], e2[:-1:stride]
    dts = dt / sp[:, None]
    return FrameField(sig, tt, e1s, e2s, np.sum(dts * e1s, axis=1), np.sum(dts * e2s, axis=1),
                      0.0, length, holonomy, periodic=False)


def periodicized_frame(curve: FourierCurve, n: int | None = None, steps: int | None = None,
                       e1_start=None) -> FrameField:
    """Periodic frame obtained by rotating the Bishop normals at a constant rate.

    With transport holonomy ``phi`` the normals are rotated by ``-phi * l(s)/L``
    so they close up after one loop. The constant ``kappa3`` is the coupling in
    the frame ODE, ``kappa3 = -phi / L`` (``|kappa3| <= pi`` for unit length).
    """
    bf = bishop_frame(curve, n, steps, e1_start)
    sig = bf.s
    # arclength fraction l(s)/L from the spectral antiderivative of the speed
    nfine = max(_default_grid(curve, 512), 4 * len(sig))
    speed = np.linalg.norm(curve.samples(nfine, 1), axis=1)
    ghat = np.fft.fft(speed / np.mean(speed)) / nfine
    kf = np.fft.fftfreq(nfine, 1.0 / nfine)
    nz = kf != 0
    frac = sig + np.real((np.exp(2j * np.pi * np.outer(sig, kf[nz])) - 1.0)
                         @ (ghat[nz] / (2j * np.pi * kf[nz])))
    rate = bf.holonomy
    ang = frac * rate
    c, s_ = np.cos(ang)[:, None], np.sin(ang)[:, None]
    en1 = c * bf.e_n1 - s_ * bf.e_n2
    en2 = s_ * bf.e_n1 + c * bf.e_n2
    c1, s1 = c[:, 0], s_[:, 0]
    k1 = c1 * bf.kappa1 - s1 * bf.kappa2
    k2 = s1 * bf.kappa1 + c1 * bf.kappa2
    return FrameField(sig, bf.e_t, en1, en2, k1, k2, -rate / bf.length, bf.length,
                      bf.holonomy, periodic=True)


def frame_ode_residual(curve: FourierCurve, frame: FrameField) -> float:
    """Max residual of the frame ODE, with derivatives of the sampled frame taken spectrally."""
    n = frame.size
    sp = np.linalg.norm(curve.evaluate(frame.s, 1), axis=1)[:, None]
    k = np.fft.fftfreq(n, 1.0 / n)

    def d(v):
        return np.real(np.fft.ifft(2j * np.pi * k[:, None] * np.fft.fft(v, axis=0), axis=0)) / sp

    k1, k2, k3 = frame.kappa1[:, None], frame.kappa2[:, None], frame.kappa3
    r_t = d(frame.e_t) - (k1 * frame.e_n1 + k2 * frame.e_n2)
    r_1 = d(frame.e_n1) - (-k1 * frame.e_t + k3 * frame.e_n2)
    r_2 = d(frame.e_n2) - (-k2 * frame.e_t - k3 * frame.e_n1)
    return float(max(np.max(np.abs(r_t)), np.max(np.abs(r_1)), np.max(np.abs(r_2))))


def interpolate_frame(frame: FrameField, s) -> FrameField:
    """Spectrally interpolate a periodic frame to new parameter values."""
    if not frame.periodic:
        raise GeometryError("only periodic frames can be interpolated")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    n = frame.size
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0  # drop the unpaired Nyquist mode
    ph = np.exp(2j * np.pi * np.outer(s, k)) / n

    def interp(v):
        return np.real(ph @ np.fft.fft(v, axis=0))

    et = interp(frame.e_t)
    et /= np.linalg.norm(et, axis=1)[:, None]
    e1 = interp(frame.e_n1)
    e1 -= np.sum(e1 * et, axis=1)[:, None] * et
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(et, e1)
    return FrameField(s, et, e1, e2, interp(frame.kappa1[:, None])[:, 0],
                      interp(frame.kappa2[:, None])[:, 0], frame.kappa3, frame.length,
                      frame.holonomy, True)


# ---------------------------------------------------------------- surface

@dataclass(frozen=True, eq=False)
class SurfaceGrid:
    """Tensor grid on the tube ``x = X(s) + eps e_r(s, theta)``.

    Arrays are indexed ``[i, j]`` with ``s_i = (i + s_shift)/Ns`` and
    ``theta_j = 2 pi (j + theta_shift)/Ntheta``. ``weights`` are the trapezoid
    weights of the surface measure (Jacobian, curve speed and cell sizes).
    """

    ns: int
    ntheta: int
    eps: float
    s: np.ndarray
    theta: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    e_theta: np.ndarray
    jacobian: np.ndarray
    weights: np.ndarray
    centerline: np.ndarray
    frame: FrameField
    curve: FourierCurve | None = None
    periodic_axis: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.ns * self.ntheta

    def flat(self, arr):
        """Flatten ``(Ns, Ntheta, ...)`` arrays to ``(N, ...)``."""
        return np.asarray(arr).reshape((self.size,) + np.shape(arr)[2:])

    def area(self) -> float:
        return float(np.sum(self.weights))


def _build_surface(eps, s, theta, xc, frame, speed, ns, ntheta, curve, axis):
    ct, st = np.cos(theta)[None, :, None], np.sin(theta)[None, :, None]
    er = ct * frame.e_n1[:, None, :] + st * frame.e_n2[:, None, :]
    eth = -st * frame.e_n1[:, None, :] + ct * frame.e_n2[:, None, :]
    pts = xc[:, None, :] + eps * er
    khat = frame.kappa1[:, None] * np.cos(theta)[None, :] + frame.kappa2[:, None] * np.sin(theta)[None, :]
    jac = eps * (1.0 - eps * khat)
    if np.any(jac <= 0):
        raise GeometryError("surface Jacobian is not positive: eps too large for the curvature")
    w = jac * speed[:, None] * (1.0 / ns) * (2 * np.pi / ntheta)
    return SurfaceGrid(ns, ntheta, eps, s, theta, pts, er, eth, jac, w, xc, frame, curve, axis)


def surface_grid(curve: FourierCurve, ns: int, ntheta: int, frame: FrameField | None = None,
                 eps: float | None = None, s_shift: float = 0.0, theta_shift: float = 0.0,
                 check: bool = True) -> SurfaceGrid:
    """Surface nodes, normals and Jacobian of the tube around ``curve``.

    Parameters
    ----------
    frame : FrameField, optional
        Periodic frame sampled on the ``Ns`` grid; computed if omitted.
    eps : float, optional
        Defaults to ``curve.eps``.
    check : bool
        Reject ``eps`` beyond :func:`max_radius_ratio` (scaled by the length).
    """
    eps = curve.eps if eps is None else float(eps)
    if frame is None:
        frame = periodicized_frame(curve, ns)
    if frame.size != ns:
        raise GeometryError("frame grid does not match Ns")
    if s_shift:
        frame = interpolate_frame(frame, (np.arange(ns) + s_shift) / ns)
    if check:
        length = compute_length(curve)
        limit = max_radius_ratio(curve.transformed(scale=1.0 / length)) * length
        if eps >= limit:
            raise GeometryError(f"eps={eps:g} exceeds the admissible radius {limit:.4g}")
    s = frame.s
    theta = 2 * np.pi * (np.arange(ntheta) + theta_shift) / ntheta
    xc = curve.evaluate(s)
    speed = np.linalg.norm(curve.evaluate(s, 1), axis=1)
    return _build_surface(eps, s, theta, xc, frame, speed, ns, ntheta, curve, None)


def straight_surface_grid(eps: float, ns: int, ntheta: int, s_shift: float = 0.0,
                          theta_shift: float = 0.0) -> SurfaceGrid:
    """Grid on the straight tube of radius ``eps`` around the unit-period ``z``-axis."""
    frame = straight_frame(ns)
    s = (np.arange(ns) + s_shift) / ns
    frame = FrameField(s, frame.e_t, frame.e_n1, frame.e_n2, frame.kappa1, frame.kappa2, 0.0, 1.0)
    theta = 2 * np.pi * (np.arange(ntheta) + theta_shift) / ntheta
    xc = np.stack([np.zeros(ns), np.zeros(ns), s], axis=1)
    return _build_surface(eps, s, theta, xc, frame, np.ones(ns), ns, ntheta, None, 1.0)
