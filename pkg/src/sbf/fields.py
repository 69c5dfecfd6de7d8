"""Vector fields on the centerline and on the tube surface."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .geometry import FrameField, SurfaceGrid, interpolate_frame


@dataclass(frozen=True, eq=False)
class PeriodicVectorField:
    """Real R^3-valued 1-periodic field sampled at ``s_i = i/N``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise GeometryError("field values must have shape (N, 3)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def s(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.fft.fftfreq(self.n, 1.0 / self.n)

    def spectrum(self) -> np.ndarray:
        """Fourier coefficients ``c_k`` in FFT order, normalised so ``v = sum c_k e^{2 pi i k s}``."""
        return np.fft.fft(self.values, axis=0) / self.n

    @classmethod
    def from_spectrum(cls, spec) -> "PeriodicVectorField":
        spec = np.asarray(spec)
        return cls(np.real(np.fft.ifft(spec * spec.shape[0], axis=0)))

    @classmethod
    def from_function(cls, func, n: int) -> "PeriodicVectorField":
        s = np.arange(n) / n
        return cls(np.asarray(func(s), dtype=float).reshape(n, 3))

    @classmethod
    def zeros(cls, n: int) -> "PeriodicVectorField":
        return cls(np.zeros((n, 3)))

    def mean(self) -> np.ndarray:
        return self.values.mean(axis=0)

    def __add__(self, other):
        return PeriodicVectorField(self.values + _vals(other))

    def __sub__(self, other):
        return PeriodicVectorField(self.values - _vals(other))

    def __mul__(self, scalar):
        return PeriodicVectorField(self.values * scalar)

    __rmul__ = __mul__

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def resample(self, n: int) -> "PeriodicVectorField":
        """Spectral interpolation (or truncation) to ``n`` points."""
        return PeriodicVectorField(resample_spectral(self.values, n))

    def evaluate(self, s) -> np.ndarray:
        """Trigonometric interpolant at arbitrary ``s``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = _symmetric_wavenumbers(self.n)
        return np.real(np.exp(2j * np.pi * np.outer(s, k)) @ self.spectrum())

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "values": self.values.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PeriodicVectorField":
        try:
            data = json.loads(text)
            n = int(data["n"])
            vals = np.asarray(data["values"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed field JSON: {exc}") from exc
        if vals.shape != (n, 3):
            raise GeometryError("field JSON: values length does not match n")
        return cls(vals)


def _vals(x):
    return x.values if isinstance(x, PeriodicVectorField) else np.asarray(x)


def _symmetric_wavenumbers(n):
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0  # unpaired Nyquist mode is dropped by interpolation
    return k


def resample_spectral(values, n):
    """Resample periodic samples (axis 0) to ``n`` points by zero padding or truncation."""
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    if m == n:
        return values.copy()
    spec = np.fft.fft(values, axis=0) / m
    k = np.rint(np.fft.fftfreq(m, 1.0 / m)).astype(int)
    keep = 2 * np.abs(k) < min(m, n)
    out = np.zeros((n,) + values.shape[1:], dtype=complex)
    out[k[keep] % n] = spec[keep]
    return np.real(np.fft.ifft(out * n, axis=0))


def spectral_derivative(f: PeriodicVectorField, order: int = 1) -> PeriodicVectorField:
    """Apply the multiplier ``(2 pi i k)^order``; the Nyquist mode is dropped."""
    if order < 1 or order > 4:
        raise ValueError("order must be 1..4")
    k = _symmetric_wavenumbers(f.n)
    mult = (2j * np.pi * k) ** order
    out = PeriodicVectorField.from_spectrum(mult[:, None] * f.spectrum())
    vals = out.values - out.values.mean(axis=0)
    return PeriodicVectorField(vals)


# ---------------------------------------------------------------- frame identification

def _check_frame(frame: FrameField, n: int):
    if frame.size != n:
        raise GeometryError(f"frame has {frame.size} samples, field has {n}")


def _frame_product(frame, comps, n, dealias, inverse):
    if not dealias:
        m = frame.matrix()
        if inverse:
            return np.einsum("nji,nj->ni", m, comps)
        return np.einsum("nij,nj->ni", m, comps)
    fine = 2 * n
    ff = interpolate_frame(frame, np.arange(fine) / fine)
    m = ff.matrix()
    g = resample_spectral(comps, fine)
    prod = np.einsum("nji,nj->ni", m, g) if inverse else np.einsum("nij,nj->ni", m, g)
    return resample_spectral(prod, n)


def phi_forward(frame: FrameField, g: PeriodicVectorField, dealias: bool = False) -> PeriodicVectorField:
    """Map straight-tube components ``(x, y, z)`` to ``x e_n1 + y e_n2 + z e_t``.

    With ``dealias`` the product is formed on a twice finer grid and truncated.
    """
    _check_frame(frame, g.n)
    return PeriodicVectorField(_frame_product(frame, g.values, g.n, dealias, False))


def phi_inverse(frame: FrameField, h: PeriodicVectorField, dealias: bool = False) -> PeriodicVectorField:
    """Frame components ``(h.e_n1, h.e_n2, h.e_t)`` returned as an ``(x, y, z)`` field."""
    _check_frame(frame, h.n)
    return PeriodicVectorField(_frame_product(frame, h.values, h.n, dealias, True))


def subtract_phi_mean(frame: FrameField, h: PeriodicVectorField):
    """Split ``h = h0 + Phi(mean)`` with ``Phi^{-1} h0`` mean-zero.

    Returns
    -------
    h0 : PeriodicVectorField
    mean : ndarray, shape (3,)
        s-mean of ``Phi^{-1} h`` in ``(x, y, z)`` components.
    """
    g = phi_inverse(frame, h)
    mean = g.mean()
    h0 = phi_forward(frame, PeriodicVectorField(g.values - mean))
    return h0, mean


# ---------------------------------------------------------------- surface fields

@dataclass(frozen=True, eq=False)
class SurfaceField:
    """Real R^3-valued field on an ``(Ns, Ntheta)`` grid, Cartesian components."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 3 or v.shape[2] != 3:
            raise GeometryError("surface field values must have shape (Ns, Ntheta, 3)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape[:2]

    @classmethod
    def lift(cls, v: PeriodicVectorField, ntheta: int) -> "SurfaceField":
        """Replicate a centerline field across theta."""
        return cls(np.repeat(v.values[:, None, :], ntheta, axis=1))

    def __add__(self, other):
        return SurfaceField(self.values + other.values)

    def __sub__(self, other):
        return SurfaceField(self.values - other.values)

    def __mul__(self, scalar):
        return SurfaceField(self.values * scalar)

    __rmul__ = __mul__


def _check_grid(grid: SurfaceGrid, w: SurfaceField):
    if w.shape != (grid.ns, grid.ntheta):
        raise GeometryError(f"surface field shape {w.shape} does not match grid "
                            f"({grid.ns}, {grid.ntheta})")


def local_components(grid: SurfaceGrid, w: SurfaceField) -> np.ndarray:
    """Components along ``(e_r, e_theta, e_t)``; shape ``(Ns, Ntheta, 3)``."""
    _check_grid(grid, w)
    et = np.broadcast_to(grid.frame.e_t[:, None, :], w.values.shape)
    return np.stack([np.sum(w.values * grid.normals, axis=2),
                     np.sum(w.values * grid.e_theta, axis=2),
                     np.sum(w.values * et, axis=2)], axis=2)


def from_local_components(grid: SurfaceGrid, comps) -> SurfaceField:
    et = grid.frame.e_t[:, None, :]
    c = np.asarray(comps)
    return SurfaceField(c[..., 0:1] * grid.normals + c[..., 1:2] * grid.e_theta + c[..., 2:3] * et)


def project_p01(w: SurfaceField, grid: SurfaceGrid) -> SurfaceField:
    """Keep the theta zero modes of the ``e_r``, ``e_t`` components and all one modes.

    The zero mode of the ``e_theta`` component and all modes ``|l| >= 2`` are
    removed. This is an orthogonal projection for the discrete theta inner
    product.
    """
    comps = local_components(grid, w)
    spec = np.fft.fft(comps, axis=1)
    keep = np.zeros(spec.shape[1:], dtype=bool)
    keep[1, :] = True
    keep[-1, :] = True
    keep[0, [0, 2]] = True
    spec = spec * keep[None, :, :]
    return from_local_components(grid, np.real(np.fft.ifft(spec, axis=1)))


def angle_average_traction(w: SurfaceField, grid: SurfaceGrid) -> PeriodicVectorField:
    """Force per unit length ``f(s) = int w J dtheta`` by the trapezoid rule in theta."""
    _check_grid(grid, w)
    dtheta = 2 * np.pi / grid.ntheta
    return PeriodicVectorField(np.sum(w.values * grid.jacobian[:, :, None], axis=1) * dtheta)
