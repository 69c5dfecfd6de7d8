"""Stokes kernels and their corrected quadrature on filament surfaces.

Kernels use ``R = x - y`` with ``x`` the target and ``y`` the source.

On-surface quadrature
---------------------
A locally corrected Nystrom rule on the ``(s, theta)`` grid of a
:class:`~sbf.geometry.SurfaceGrid`::

    Op[phi](x_t) = sum_{t' != t} K(x_t, x_t') phi_t' w_t' + C_t phi_t

The 3x3 correction ``C_t`` makes the rule exact for densities frozen at the
target inside a smooth band ``chi(s - s_t)`` around it. Its accurate part is
split into a radial cutoff integrated in polar coordinates (which removes the
``1/r`` singularity) and a smooth remainder on a fine tensor grid. The traction
of the double layer uses the same machinery with a local quadratic model of the
density instead of a frozen value.

Closed filaments give dense matrices (:class:`DenseOperator`). The straight
periodic tube is translation and rotation invariant, so its operators are
block-diagonal in Fourier space (:class:`FourierBlockOperator`); periodic images
are summed with a smooth window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from .errors import DomainError, GeometryError, SingularityError, SolverError
from .fields import SurfaceField
from .geometry import SurfaceGrid, periodicized_frame
from .specfun import bessel_i, bessel_k

INV_8PI = 1.0 / (8.0 * np.pi)


# ---------------------------------------------------------------- kernels

def _outer(a, b):
    return a[..., :, None] * b[..., None, :]


def _norm(r):
    return np.sqrt(np.sum(r * r, axis=-1))


def _g(r_vec):
    r = _norm(r_vec)[..., None, None]
    return INV_8PI * (np.eye(3) / r + _outer(r_vec, r_vec) / r**3)


def _k_double(r_vec, ny):
    r = _norm(r_vec)
    fac = 3.0 / (4 * np.pi) * np.sum(r_vec * ny, axis=-1) / r**5
    return _outer(r_vec, r_vec) * fac[..., None, None]


def _skew(v):
    out = np.zeros(v.shape + (3,))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def _k_completion(rc, q):
    # G(R_c) phi + (1/8pi) l_R x (q x phi), l_R = -R_c/|R_c|^3
    lr = -rc / _norm(rc)[..., None] ** 3
    return _g(rc) + INV_8PI * (_skew(lr) @ _skew(q))


def _k_completion_traction(rc, nx, q):
    # (3/8pi)[-2 (R.n)(R.phi) R + (R.n) R x (q x phi) + R n.(R x (q x phi))] / |R|^5
    r5 = _norm(rc) ** 5
    rn = np.sum(rc * nx, axis=-1)
    a = -2.0 * _outer(rc, rc) * rn[..., None, None]
    rxq = _skew(rc) @ _skew(q)                       # phi -> R x (q x phi)
    b = rxq * rn[..., None, None]
    c = _outer(rc, np.einsum("...i,...ij->...j", nx, rxq))
    return 3.0 * INV_8PI * (a + b + c) / r5[..., None, None]


def _k_hyper(r_vec, nx, ny):
    r = _norm(r_vec)
    rnx = np.sum(r_vec * nx, axis=-1)
    rny = np.sum(r_vec * ny, axis=-1)
    nn = np.sum(nx * ny, axis=-1)
    r3, r5, r7 = (r**3)[..., None, None], (r**5)[..., None, None], (r**7)[..., None, None]
    eye = np.eye(3)
    t1 = 2.0 * _outer(nx, ny) / r3
    t2 = 3.0 * (rny[..., None, None] * _outer(r_vec, nx) + nn[..., None, None] * _outer(r_vec, r_vec)) / r5
    t3 = 3.0 * (rnx[..., None, None] * rny[..., None, None] * eye + rnx[..., None, None] * _outer(ny, r_vec)) / r5
    t4 = -30.0 * (rnx * rny)[..., None, None] * _outer(r_vec, r_vec) / r7
    return (t1 + t2 + t3 + t4) / (4 * np.pi)


def _separation(x, y):
    r_vec = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    if np.any(_norm(r_vec) == 0):
        raise SingularityError("kernel evaluated at coincident points")
    return r_vec


def stokeslet(x, y) -> np.ndarray:
    """Free-space Stokes Green's function ``(1/8 pi)(I/r + R R^T / r^3)``."""
    return _g(_separation(x, y))


def stresslet(x, y, n_y) -> np.ndarray:
    """Double-layer kernel ``(3/4 pi) R R^T (R . n_y) / r^5``."""
    return _k_double(_separation(x, y), np.asarray(n_y, dtype=float))


def rotlet(x, y) -> np.ndarray:
    """Point-torque kernel vector ``-R / r^3``."""
    r_vec = _separation(x, y)
    return -r_vec / _norm(r_vec)[..., None] ** 3


def pressure_kernel(x, y, n_y) -> np.ndarray:
    """Pressure of the double layer: ``p = pressure_kernel . psi``.

    ``(1/2 pi)(-n_y / r^3 + 3 R (R . n_y) / r^5)``.
    """
    r_vec = _separation(x, y)
    n_y = np.asarray(n_y, dtype=float)
    r = _norm(r_vec)[..., None]
    return (-n_y / r**3 + 3 * r_vec * np.sum(r_vec * n_y, axis=-1)[..., None] / r**5) / (2 * np.pi)


def hypersingular_kernel(x, y, n_x, n_y) -> np.ndarray:
    """Traction ``sigma[D] n_x`` of the double-layer kernel at ``x``."""
    return _k_hyper(_separation(x, y), np.asarray(n_x, dtype=float), np.asarray(n_y, dtype=float))


def completion_kernel(x, y, c_y) -> np.ndarray:
    """Completion-flow kernel: Stokeslet plus rotlet at the centerline point ``c_y``.

    Returns the 3x3 matrix mapping the density at surface point ``y`` to the
    velocity at ``x``; the rotlet carries the moment ``(y - c_y) x phi``.
    """
    rc = _separation(x, c_y)
    return _k_completion(rc, np.asarray(y, dtype=float) - np.asarray(c_y, dtype=float))


def completion_traction_kernel(x, n_x, y, c_y) -> np.ndarray:
    """Traction of the completion-flow kernel at ``x`` with normal ``n_x``."""
    rc = _separation(x, c_y)
    return _k_completion_traction(rc, np.asarray(n_x, dtype=float),
                                  np.asarray(y, dtype=float) - np.asarray(c_y, dtype=float))


# kernel(x, nx, y, ny, cy) -> (..., 3, 3)
_KERNELS = {
    "single": lambda x, nx, y, ny, cy: _g(x - y),
    "double": lambda x, nx, y, ny, cy: _k_double(x - y, ny),
    "completion": lambda x, nx, y, ny, cy: _k_completion(x - cy, y - cy),
    "completion_traction": lambda x, nx, y, ny, cy: _k_completion_traction(x - cy, nx, y - cy),
    "double_traction": lambda x, nx, y, ny, cy: _k_hyper(x - y, nx, ny),
}
# density model of the local correction: None (smooth kernel), "frozen" (replaced by
# QuadratureConfig.density_model) or "taylor" (subtraction plus derivative terms)
_SINGULAR = {"single": "frozen", "double": "frozen", "double_traction": "taylor",
             "completion": None, "completion_traction": None}


# ---------------------------------------------------------------- geometry sampling

def _smooth_step(t):
    """1 at t=0, 0 for t>=1, C-infinity and flat at both ends."""
    t = np.minimum(np.abs(t), 1.0)

    def f(u):
        return np.where(u > 0, np.exp(-1.0 / np.maximum(u, 1e-300)), 0.0)

    return f(1 - t) / (f(1 - t) + f(t))


class _Sampler:
    """Surface points at ``(s_i + ds, theta_j + dth)`` for all rows ``i`` and columns ``j``."""

    def __init__(self, grid: SurfaceGrid, rows=None):
        self.grid = grid
        self.rows = np.arange(grid.ns) if rows is None else np.asarray(rows)
        self.straight = grid.periodic_axis is not None
        self._cache = {}
        if not self.straight:
            curve = grid.curve
            if curve is None:
                raise GeometryError("curved surface grid has no curve")
            ratio = max(1, int(np.ceil(max(256, 8 * curve.modes) / grid.ns)))
            self.nf = grid.ns * ratio
            self.ratio = ratio
            fr = periodicized_frame(curve, self.nf)
            vals = np.concatenate([fr.e_t, fr.e_n1, fr.e_n2, fr.kappa1[:, None],
                                   fr.kappa2[:, None]], axis=1)
            self._frame_hat = np.fft.fft(vals, axis=0)
            kf = np.fft.fftfreq(self.nf, 1.0 / self.nf)
            kf[self.nf // 2] = 0.0
            self._kf = kf
            self._nyq = np.ones(self.nf)
            self._nyq[self.nf // 2] = 0.0
            self._curve = curve
            self._s0 = grid.s[0]

    def _centerline(self, ds):
        key = round(float(ds), 15)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g = self.grid
        if self.straight:
            s = g.s[self.rows] + ds
            n = len(s)
            out = (np.stack([np.zeros(n), np.zeros(n), s], axis=1),
                   np.tile([0.0, 0.0, 1.0], (n, 1)), np.tile([1.0, 0.0, 0.0], (n, 1)),
                   np.tile([0.0, 1.0, 0.0], (n, 1)), np.zeros(n), np.zeros(n), np.ones(n))
        else:
            shift = self._s0 + ds
            ph = np.exp(2j * np.pi * self._kf * shift) * self._nyq
            vals = np.real(np.fft.ifft(self._frame_hat * ph[:, None], axis=0))[::self.ratio][self.rows]
            s = g.s[self.rows] + ds
            xc = self._curve.evaluate(s)
            speed = np.linalg.norm(self._curve.evaluate(s, 1), axis=1)
            out = (xc, vals[:, 0:3], vals[:, 3:6], vals[:, 6:9], vals[:, 9], vals[:, 10], speed)
        if len(self._cache) > 4096:
            self._cache.clear()
        self._cache[key] = out
        return out

    def at(self, ds, dth):
        """Points, normals, surface density ``dS/(ds dtheta)`` and centerline points."""
        xc, _, e1, e2, k1, k2, speed = self._centerline(ds)
        th = self.grid.theta[None, :] + dth
        c, s = np.cos(th)[..., None], np.sin(th)[..., None]
        er = c * e1[:, None, :] + s * e2[:, None, :]
        eps = self.grid.eps
        y = xc[:, None, :] + eps * er
        khat = k1[:, None] * c[..., 0] + k2[:, None] * s[..., 0]
        dens = eps * (1.0 - eps * khat) * speed[:, None]
        cy = np.broadcast_to(xc[:, None, :], y.shape)
        return y, er, dens, cy


@dataclass(frozen=True)
class QuadratureConfig:
    """Parameters of the corrected on-surface rule.

    Attributes
    ----------
    band : float
        Half-width of the s-band cutoff in units of ``max(h_s, eps h_theta)``.
    disk : float
        Radius of the polar disk as a fraction of ``min(band width, pi eps)``.
    n_rho, n_phi : int
        Gauss-Legendre nodes in radius and uniform nodes in angle (even).
    tensor : int
        Fine tensor grid points per disk radius.
    images : int
        Periodic images on each side for the straight tube (window half-length).
    density_model : {"quadratic", "frozen"}
        Local model of the density in the single/double-layer corrections.
    """

    band: float = 12.0
    disk: float = 0.8
    n_rho: int = 24
    n_phi: int = 48
    tensor: int = 24
    images: int = 32
    density_model: str = "quadratic"


def _local_rule(grid: SurfaceGrid, cfg: QuadratureConfig):
    hs = 1.0 / grid.ns
    ht = 2 * np.pi / grid.ntheta
    eps = grid.eps
    band = cfg.band * max(hs, eps * ht)
    band = min(band, 0.45)
    rd = cfg.disk * min(band, np.pi * eps)
    # polar part, measure d(ds) d(dtheta) = rho drho dphi / eps
    g, gw = np.polynomial.legendre.leggauss(cfg.n_rho)
    rho = (g + 1) / 2 * rd
    wr = gw / 2 * rd
    phi = np.arange(cfg.n_phi) * 2 * np.pi / cfg.n_phi
    rr, pp = np.meshgrid(rho, phi, indexing="ij")
    polar = (rr * np.cos(pp), rr * np.sin(pp) / eps,
             (wr[:, None] * (2 * np.pi / cfg.n_phi)) * rr / eps * _smooth_step(rr / rd))
    # tensor remainder
    nsf = int(np.ceil(band / (rd / cfg.tensor)))
    hsf = band / nsf
    ntf = int(np.ceil(2 * np.pi * eps / hsf))
    ntf += ntf % 2
    htf = 2 * np.pi / ntf
    ds_t, dt_t = np.meshgrid(np.arange(-nsf, nsf + 1) * hsf, (np.arange(ntf) - ntf // 2) * htf,
                             indexing="ij")
    w_t = (_smooth_step(ds_t / band) - _smooth_step(np.hypot(ds_t, eps * dt_t) / rd)) * hsf * htf
    keep = np.abs(w_t) > 0
    tensor = (ds_t[keep], dt_t[keep], w_t[keep])
    # band nodes of the grid itself (punctured)
    m = int(np.ceil(band / hs))
    jj = np.arange(grid.ntheta)
    ds_b, dt_b = np.meshgrid(np.arange(-m, m + 1) * hs, jj * ht, indexing="ij")
    w_b = _smooth_step(ds_b / band) * hs * ht
    w_b[m, 0] = 0.0
    keep = w_b > 0
    bandset = (ds_b[keep], dt_b[keep], w_b[keep])
    return (polar[0].ravel(), polar[1].ravel(), polar[2].ravel()), tensor, bandset


def _monomials(ds, dth, model):
    """Local density model: constant, quadratic Taylor terms, or both."""
    terms = [np.ones(np.shape(ds))] if model in ("frozen", "quadratic") else []
    if model in ("quadratic", "taylor"):
        terms += [ds, np.sin(dth), 0.5 * ds**2, ds * np.sin(dth), 1.0 - np.cos(dth)]
    return np.stack(terms)


def _corrections(grid, kernel, model, cfg, rows=None):
    """Correction matrices, shape ``(n_models, len(rows), Ntheta, 3, 3)``."""
    sampler = _Sampler(grid, rows)
    rows = sampler.rows
    x = grid.points[rows]
    nx = grid.normals[rows]
    polar, tensor, bandset = _local_rule(grid, cfg)
    nmod = {"frozen": 1, "quadratic": 6, "taylor": 5}[model]
    acc = np.zeros((nmod, len(rows), grid.ntheta, 3, 3))
    for sign, (dss, dts, ws) in ((1.0, polar), (1.0, tensor), (-1.0, bandset)):
        mono = _monomials(dss, dts, model)
        for q in range(len(dss)):
            y, ny, dens, cy = sampler.at(dss[q], dts[q])
            kv = kernel(x, nx, y, ny, cy) * (dens * (sign * ws[q]))[..., None, None]
            acc += mono[:, q, None, None, None, None] * kv[None]
    return acc


# ---------------------------------------------------------------- operators

def _rotation_z(theta):
    c, s = np.cos(theta), np.sin(theta)
    out = np.zeros(np.shape(theta) + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


class DenseOperator:
    """Linear map on surface fields stored as a ``(3N, 3N)`` matrix (node-major)."""

    def __init__(self, grid: SurfaceGrid, matrix: np.ndarray):
        self.grid = grid
        self.matrix = matrix

    @classmethod
    def identity(cls, grid):
        return cls(grid, np.eye(3 * grid.size))

    def apply(self, w: SurfaceField) -> SurfaceField:
        vec = np.asarray(w.values).reshape(-1)
        return SurfaceField((self.matrix @ vec).reshape(self.grid.ns, self.grid.ntheta, 3))

    def __add__(self, other):
        return DenseOperator(self.grid, self.matrix + other.matrix)

    def __sub__(self, other):
        return DenseOperator(self.grid, self.matrix - other.matrix)

    def __mul__(self, c):
        return DenseOperator(self.grid, self.matrix * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return DenseOperator(self.grid, self.matrix @ other.matrix)

    def solve(self, w: SurfaceField) -> SurfaceField:
        rhs = np.asarray(w.values).reshape(-1)
        try:
            sol = sla.solve(self.matrix, rhs)
        except sla.LinAlgError as exc:
            raise SolverError(str(exc)) from exc
        return SurfaceField(sol.reshape(self.grid.ns, self.grid.ntheta, 3))


class FourierBlockOperator:
    """Translation/rotation-invariant operator on the straight tube.

    Acts on the Fourier coefficients of the local ``(e_r, e_theta, e_z)``
    components through 3x3 blocks indexed by ``(k, l)`` in FFT order.
    """

    def __init__(self, grid: SurfaceGrid, blocks: np.ndarray):
        self.grid = grid
        self.blocks = blocks

    @classmethod
    def identity(cls, grid):
        return cls(grid, np.broadcast_to(np.eye(3, dtype=complex),
                                         (grid.ns, grid.ntheta, 3, 3)).copy())

    def _to_local_hat(self, w):
        rot = _rotation_z(self.grid.theta)
        loc = np.einsum("jba,ijb->ija", rot, np.asarray(w.values))
        return np.fft.fft2(loc, axes=(0, 1))

    def _from_local_hat(self, hat):
        loc = np.real(np.fft.ifft2(hat, axes=(0, 1)))
        rot = _rotation_z(self.grid.theta)
        return SurfaceField(np.einsum("jab,ijb->ija", rot, loc))

    def apply(self, w: SurfaceField) -> SurfaceField:
        hat = self._to_local_hat(w)
        return self._from_local_hat(np.einsum("klab,klb->kla", self.blocks, hat))

    def __add__(self, other):
        return FourierBlockOperator(self.grid, self.blocks + other.blocks)

    def __sub__(self, other):
        return FourierBlockOperator(self.grid, self.blocks - other.blocks)

    def __mul__(self, c):
        return FourierBlockOperator(self.grid, self.blocks * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return FourierBlockOperator(self.grid, self.blocks @ other.blocks)

    def solve(self, w: SurfaceField, skip_zero_mode: bool = True) -> SurfaceField:
        """Blockwise solve; the ``k = 0`` blocks are skipped (set to zero) by default."""
        hat = self._to_local_hat(w)
        out = np.zeros_like(hat)
        ks = range(1, self.grid.ns) if skip_zero_mode else range(self.grid.ns)
        for k in ks:
            out[k] = np.linalg.solve(self.blocks[k], hat[k][..., None])[..., 0]
        return self._from_local_hat(out)

    def mode_response(self, k: int, vector_local) -> np.ndarray:
        """Response to ``exp(2 pi i k s)`` times a theta-independent local vector (l = 0)."""
        return self.blocks[k % self.grid.ns, 0] @ np.asarray(vector_local, dtype=complex)


def _derivative_matrix(n, order):
    k = np.fft.fftfreq(n, 1.0 / n)
    k[n // 2] = 0.0 if n % 2 == 0 else k[n // 2]
    sym = (2j * np.pi * k) ** order
    eye = np.eye(n)
    return np.real(np.fft.ifft(sym[:, None] * np.fft.fft(eye, axis=0), axis=0))


class LayerQuadrature:
    """Builds discrete layer operators on one surface grid, caching the results.

    Parameters
    ----------
    grid : SurfaceGrid
        Closed-filament grid or straight periodic tube grid.
    config : QuadratureConfig, optional
    max_nodes : int
        Guard on ``Ns * Ntheta`` for dense assembly.
    """

    def __init__(self, grid: SurfaceGrid, config: QuadratureConfig | None = None,
                 max_nodes: int = 16384):
        self.grid = grid
        self.config = config or QuadratureConfig()
        self.straight = grid.periodic_axis is not None
        if not self.straight and grid.size > max_nodes:
            raise GeometryError(f"grid has {grid.size} nodes, above the dense cap {max_nodes}")
        self._ops = {}

    def operator(self, name: str):
        """Discrete operator ``single``, ``double``, ``completion``,
        ``completion_traction`` or ``double_traction``."""
        if name not in _KERNELS:
            raise DomainError(f"unknown layer operator {name!r}")
        if name not in self._ops:
            build = self._straight if self.straight else self._dense
            self._ops[name] = build(name)
        return self._ops[name]

    def _model(self, name):
        model = _SINGULAR[name]
        if model == "frozen":
            return self.config.density_model
        return model

    # -- closed filaments

    def _dense(self, name):
        g = self.grid
        n = g.size
        kernel = _KERNELS[name]
        x = g.flat(g.points)
        nx = g.flat(g.normals)
        w = g.flat(g.weights)
        cy = np.repeat(g.centerline, g.ntheta, axis=0)
        mat = np.zeros((n, 3, n, 3))
        chunk = max(1, 2_000_000 // n)
        for a in range(0, n, chunk):
            b = min(n, a + chunk)
            xs = x[a:b, None, :]
            rr = xs - x[None, :, :]
            idx = np.arange(a, b)
            if _SINGULAR[name] is not None:
                rr[idx - a, idx] = 1.0  # placeholder, zeroed below
            kv = kernel(xs, nx[a:b, None, :], x[None], nx[None], cy[None]) if _SINGULAR[name] is None \
                else kernel(xs, nx[a:b, None, :], xs - rr, nx[None], cy[None])
            kv = kv * w[None, :, None, None]
            if _SINGULAR[name] is not None:
                kv[idx - a, idx] = 0.0
            mat[a:b] = np.transpose(kv, (0, 2, 1, 3))
        model = self._model(name)
        if model is not None:
            if model == "taylor":
                mat[np.arange(n), :, np.arange(n), :] -= mat.sum(axis=2)
            corr = _corrections(g, kernel, model, self.config).reshape(-1, n, 3, 3)
            if model != "taylor":
                mat[np.arange(n), :, np.arange(n), :] += corr[0]
                corr = corr[1:]
            if len(corr):
                ds1 = _derivative_matrix(g.ns, 1)
                ds2 = _derivative_matrix(g.ns, 2)
                dt1 = _derivative_matrix(g.ntheta, 1) / (2 * np.pi)
                dt2 = _derivative_matrix(g.ntheta, 2) / (2 * np.pi) ** 2
                it, is_ = np.eye(g.ntheta), np.eye(g.ns)
                diffs = [np.kron(ds1, it), np.kron(is_, dt1), np.kron(ds2, it),
                         np.kron(ds1, dt1), np.kron(is_, dt2)]
                for c_m, d_m in zip(corr, diffs):
                    mat += np.einsum("tab,tu->taub", c_m, d_m)
        return DenseOperator(g, mat.reshape(3 * n, 3 * n))

    # -- straight periodic tube

    def _straight(self, name):
        g = self.grid
        cfg = self.config
        kernel = _KERNELS[name]
        model = self._model(name)
        # target (0, 0) against all nodes and images
        x0 = g.points[0, 0]
        n0 = g.normals[0, 0]
        row = np.zeros((g.ns, g.ntheta, 3, 3))
        half = cfg.images
        for m in range(-half, half + 1):
            y = g.points + np.array([0.0, 0.0, float(m)])
            cy = g.centerline[:, None, :] + np.array([0.0, 0.0, float(m)])
            cy = np.broadcast_to(cy, y.shape)
            dz = y[..., 2] - x0[2]
            win = _smooth_step(np.maximum(np.abs(dz) - half / 2.0, 0.0) / (half / 2.0))
            r = x0 - y
            if m == 0 and model is not None:
                r[0, 0] = [1.0, 0.0, 0.0]
            kv = kernel(x0, n0, x0 - r, g.normals, cy) * (win * g.weights)[..., None, None]
            if m == 0 and model is not None:
                kv[0, 0] = 0.0
            row += kv
        # convert to local components of target (theta_0) and source (theta_j)
        q_t = _rotation_z(g.theta[0])
        q_s = _rotation_z(g.theta)
        loc = np.einsum("ba,ijbc,jcd->ijad", q_t, row, q_s)
        extra = np.zeros((g.ns, g.ntheta, 3, 3), dtype=complex)
        if model is not None:
            if model == "taylor":
                loc[0, 0] -= q_t.T @ row.sum(axis=(0, 1)) @ q_t
            corr = _corrections(g, kernel, model, cfg, rows=[0])[:, 0, 0]
            if model != "taylor":
                loc[0, 0] += q_t.T @ corr[0] @ q_t
                corr = corr[1:]
            k = np.fft.fftfreq(g.ns, 1.0 / g.ns)
            if g.ns % 2 == 0:
                k[g.ns // 2] = 0.0
            ell = np.fft.fftfreq(g.ntheta, 1.0 / g.ntheta)
            if g.ntheta % 2 == 0:
                ell[g.ntheta // 2] = 0.0
            gen = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
            d_s = np.broadcast_to((2j * np.pi * k)[:, None, None, None] * np.eye(3), extra.shape)
            d_t = np.broadcast_to(1j * ell[None, :, None, None] * np.eye(3) + gen, extra.shape)
            derivs = [d_s, d_t, d_s @ d_s, d_s @ d_t, d_t @ d_t]
            for c_m, d_m in zip(corr, derivs):
                extra += (q_t.T @ c_m @ q_t) @ d_m
        # correlation in (s, theta): out[i,j] = sum loc[a,b] phi[i+a, j+b]
        blocks = np.conj(np.fft.fft2(loc, axes=(0, 1))) + extra
        return FourierBlockOperator(g, blocks)


# ---------------------------------------------------------------- convenience API

def _plain_sum(grid, kernel_name, density, targets, target_normals=None):
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    tn = np.zeros_like(targets) if target_normals is None else np.atleast_2d(target_normals)
    y = grid.flat(grid.points)
    ny = grid.flat(grid.normals)
    w = grid.flat(grid.weights)
    cy = np.repeat(grid.centerline, grid.ntheta, axis=0)
    phi = grid.flat(np.asarray(density.values))
    kernel = _KERNELS[kernel_name]
    shifts = [0.0]
    if grid.periodic_axis is not None:
        shifts = range(-32, 33)
    out = np.zeros((len(targets), 3))
    for m in shifts:
        off = np.array([0.0, 0.0, float(m)])
        ys, cs = y + off, cy + off
        dz = ys[None, :, 2] - targets[:, None, 2]
        win = _smooth_step(np.maximum(np.abs(dz) - 16.0, 0.0) / 16.0) if shifts != [0.0] else 1.0
        r = targets[:, None, :] - (cs[None] if kernel_name.startswith("completion") else ys[None])
        if np.any(_norm(r) == 0):
            raise SingularityError("target coincides with a source node")
        kv = kernel(targets[:, None, :], tn[:, None, :], ys[None], ny[None], cs[None])
        out += np.einsum("tsab,tsb->ta", kv, (w * win)[..., None] * phi[None])
    return out


def single_layer_apply(grid: SurfaceGrid, phi: SurfaceField, targets=None,
                       quadrature: LayerQuadrature | None = None):
    """Single-layer potential: on-surface (corrected rule) or at off-surface points.

    Parameters
    ----------
    targets : array_like, shape (M, 3), optional
        Off-surface evaluation points; on-surface nodes when omitted.
    """
    if targets is not None:
        return _plain_sum(grid, "single", phi, targets)
    q = quadrature or LayerQuadrature(grid)
    return q.operator("single").apply(phi)


def double_layer_apply(grid: SurfaceGrid, psi: SurfaceField, targets=None,
                       side: str = "on-surface", quadrature: LayerQuadrature | None = None):
    """Double-layer potential.

    ``side="on-surface"`` gives the principal value at the nodes;
    ``side="exterior-limit"`` adds ``psi / 2``.
    """
    if targets is not None:
        return _plain_sum(grid, "double", psi, targets)
    if side not in ("on-surface", "exterior-limit"):
        raise DomainError(f"unknown side {side!r}")
    q = quadrature or LayerQuadrature(grid)
    out = q.operator("double").apply(psi)
    if side == "exterior-limit":
        out = out + 0.5 * psi
    return out


def completion_flow_apply(grid: SurfaceGrid, phi: SurfaceField, targets=None,
                          quadrature: LayerQuadrature | None = None):
    """Completion flow (centerline Stokeslets and rotlets) driven by ``phi``."""
    if targets is not None:
        targets = np.atleast_2d(targets)
        if grid.periodic_axis is None:
            _require_off_centerline(grid, targets)
        return _plain_sum(grid, "completion", phi, targets)
    q = quadrature or LayerQuadrature(grid)
    return q.operator("completion").apply(phi)


def _require_off_centerline(grid, targets, tol=0.0):
    s = np.arange(16 * grid.ns) / (16 * grid.ns)
    xc = grid.curve.evaluate(s)
    d = np.min(np.linalg.norm(targets[:, None, :] - xc[None], axis=2), axis=1)
    if np.any(d <= tol):
        raise SingularityError("target lies on the centerline")
    return d


def distance_to_centerline(grid: SurfaceGrid, points) -> np.ndarray:
    """Distance from points to the centerline (dense sampling, refined locally)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if grid.periodic_axis is not None:
        return np.hypot(points[:, 0], points[:, 1])
    n = 16 * grid.ns
    s = np.arange(n) / n
    xc = grid.curve.evaluate(s)
    d = np.linalg.norm(points[:, None, :] - xc[None], axis=2)
    i = np.argmin(d, axis=1)
    out = d[np.arange(len(points)), i]
    for p in range(len(points)):
        ss = s[i[p]] + np.linspace(-1.0 / n, 1.0 / n, 65)
        out[p] = min(out[p], np.min(np.linalg.norm(grid.curve.evaluate(ss) - points[p], axis=1)))
    return out


def exterior_velocity(grid: SurfaceGrid, phi: SurfaceField, x) -> np.ndarray:
    """Velocity ``D[phi](x) + V[phi](x)`` of the completed double layer at exterior points."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if np.any(distance_to_centerline(grid, x) < grid.eps):
        raise DomainError("evaluation point lies inside the filament")
    return _plain_sum(grid, "double", phi, x) + _plain_sum(grid, "completion", phi, x)


def hypersingular_traction(grid: SurfaceGrid, phi: SurfaceField,
                           quadrature: LayerQuadrature | None = None) -> SurfaceField:
    """Traction ``T[phi] = -sigma[D[phi]] n - sigma[V[phi]] n`` at the surface nodes."""
    q = quadrature or LayerQuadrature(grid)
    out = q.operator("double_traction").apply(phi) + q.operator("completion_traction").apply(phi)
    return out * -1.0


def null_identity_residuals(grid: SurfaceGrid, points) -> tuple[float, float]:
    """Max over exterior points of ``|int K_D dS|`` and ``|int p^D dS|`` (should vanish)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    y = grid.flat(grid.points)
    ny = grid.flat(grid.normals)
    w = grid.flat(grid.weights)
    kd = _k_double(points[:, None, :] - y[None], ny[None])
    rr = points[:, None, :] - y[None]
    r = _norm(rr)[..., None]
    pd = (-ny[None] / r**3 + 3 * rr * np.sum(rr * ny[None], axis=-1)[..., None] / r**5) / (2 * np.pi)
    res_k = np.einsum("tsab,s->tab", kd, w)
    res_p = np.einsum("tsa,s->ta", pd, w)
    return float(np.max(np.abs(res_k))), float(np.max(np.abs(res_p)))


# ---------------------------------------------------------------- theta identities

def _theta_integrand(index, z, theta):
    u = np.sin(theta / 2)
    m = index - 1
    return u**m * bessel_k(m % 2, z * u)


def _theta_rhs(index, z):
    h = z / 2
    i0, i1 = bessel_i(0, h), bessel_i(1, h)
    k0, k1 = bessel_k(0, h), bessel_k(1, h)
    a = i0 * k0 - i1 * k1
    b = i0 * k1 - i1 * k0
    p = np.pi
    if index == 1:
        return 2 * p * i0 * k0
    if index == 2:
        return p * b
    if index == 3:
        return p * a
    if index == 4:
        return p * b - 2 * p / z * i1 * k1
    if index == 5:
        return p * a + p / z * b - 4 * p / z**2 * i1 * k1
    return (p * b + p / z * (i0 * k0 - 3 * i1 * k1) + 4 * p / z**2 * b
            - 16 * p / z**3 * i1 * k1)


def bessel_theta_identity(index: int, z: float) -> tuple[float, float]:
    """Quadrature of ``int_0^{2 pi} sin^m(theta/2) K_j(z sin(theta/2)) dtheta`` and its closed form.

    Index ``n`` uses ``m = n - 1`` and ``j = m mod 2``.

    Parameters
    ----------
    index : int in 1..6
    z : float
        Positive argument.
    """
    if index not in range(1, 7):
        raise DomainError("identity index must be in 1..6")
    if not z > 0:
        raise DomainError("z must be positive")
    from scipy.integrate import quad

    def f(t):
        return float(_theta_integrand(index, z, t)) if t > 0 else 0.0

    # symmetric about pi; log singularity at 0 for index 1
    lhs = 2 * quad(f, 0.0, np.pi, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    return float(lhs), float(_theta_rhs(index, z))
