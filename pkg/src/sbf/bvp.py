"""Static slender-body solves: Dirichlet-to-Neumann and Neumann-to-Dirichlet maps.

Straight tube: Fourier multipliers. Curved filament: dense boundary integral
systems built by :mod:`sbf.layers`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

from .errors import GeometryError, SolverError, ZeroModeError
from .fields import (PeriodicVectorField, SurfaceField, angle_average_traction, phi_forward,
                     phi_inverse, subtract_phi_mean)
from .geometry import FourierCurve, SurfaceGrid, surface_grid
from .layers import DenseOperator, FourierBlockOperator, LayerQuadrature, QuadratureConfig
from .multipliers import dtn_eigen

ZERO_MODE_POLICIES = ("reject", "drop", "nearest")
MAX_NODES = 16384


# ---------------------------------------------------------------- straight tube

def _straight_multiplier(eps, v, zero_mode, inverse):
    if zero_mode not in ZERO_MODE_POLICIES:
        raise ValueError(f"zero_mode must be one of {ZERO_MODE_POLICIES}")
    spec = v.spectrum()
    k = np.rint(v.wavenumbers).astype(int)
    scale = max(1.0, v.norm_inf())
    if zero_mode == "reject" and np.max(np.abs(spec[0])) > 1e-12 * scale:
        raise ZeroModeError("data has a nonzero mean; use zero_mode='drop' or 'nearest'")
    kk = np.where(k == 0, 1, np.abs(k))
    m_t = dtn_eigen("t", eps, kk)
    m_n = dtn_eigen("n", eps, kk)
    if inverse:
        m_t, m_n = 1.0 / m_t, 1.0 / m_n
    mult = np.stack([m_n, m_n, m_t], axis=1)
    if zero_mode != "nearest":
        mult[k == 0] = 0.0
    return PeriodicVectorField.from_spectrum(spec * mult)


def dtn_straight(eps: float, v: PeriodicVectorField, zero_mode: str = "reject") -> PeriodicVectorField:
    """Force per unit length on the straight tube for surface velocity ``v(s)``.

    The ``z`` component is multiplied by the tangential DtN eigenvalue and the
    ``x, y`` components by the normal one, mode by mode.

    Parameters
    ----------
    zero_mode : {"reject", "drop", "nearest"}
        Treatment of the mean: raise :class:`ZeroModeError`, discard it, or use
        the ``|k| = 1`` eigenvalue.
    """
    return _straight_multiplier(eps, v, zero_mode, inverse=False)


def ntd_straight(eps: float, f: PeriodicVectorField, zero_mode: str = "reject") -> PeriodicVectorField:
    """Velocity on the straight tube for force per unit length ``f`` (reciprocal symbols)."""
    return _straight_multiplier(eps, f, zero_mode, inverse=True)


# ---------------------------------------------------------------- curved filaments

@dataclass
class DtnSystem:
    """Discrete single layer and ``(1/2 I - D)`` on one surface grid, factorized once.

    Attributes
    ----------
    grid : SurfaceGrid
    single, rhs_operator : DenseOperator or FourierBlockOperator
        ``rhs_operator`` is ``1/2 I - D``.
    eta : float
        Weight of the rank-one normal term added to the single layer (dense case).
    factor : tuple or None
        LU factors of the regularized single layer.
    quadrature : LayerQuadrature
    """

    grid: SurfaceGrid
    single: object
    rhs_operator: object
    eta: float
    factor: tuple | None
    quadrature: LayerQuadrature
    meta: dict = field(default_factory=dict)

    @property
    def dense(self) -> bool:
        return isinstance(self.single, DenseOperator)

    def normal_vector(self) -> np.ndarray:
        return self.grid.normals.reshape(-1)

    def regularized_single(self) -> np.ndarray:
        g = self.grid
        n = self.normal_vector()
        nw = (g.normals * g.weights[..., None]).reshape(-1)
        return self.single.matrix + self.eta * np.outer(n, nw)

    def solve_single(self, rhs: SurfaceField) -> SurfaceField:
        """Solve the (regularized) single-layer equation."""
        if not self.dense:
            return self.single.solve(rhs)
        b = np.asarray(rhs.values).reshape(-1)
        x = sla.lu_solve(self.factor, b)
        res = np.linalg.norm(self.regularized_single() @ x - b) / max(np.linalg.norm(b), 1e-300)
        if not np.isfinite(res) or res > 1e-8:
            raise SolverError(f"single-layer solve residual {res:.3e}", residual=res)
        self.meta["last_residual"] = float(res)
        return SurfaceField(x.reshape(self.grid.ns, self.grid.ntheta, 3))


def assemble_dtn_system(grid: SurfaceGrid, config: QuadratureConfig | None = None,
                        max_nodes: int = MAX_NODES) -> DtnSystem:
    """Assemble and factorize the single layer and ``1/2 I - D``.

    The single layer annihilates the normal field on a closed surface; the
    dense block gets ``eta n <n, w>`` added with ``eta = trace(S) / (3 N area)``.
    """
    if grid.size > max_nodes:
        raise GeometryError(f"{grid.size} surface nodes exceed the cap of {max_nodes}")
    quad = LayerQuadrature(grid, config, max_nodes=max_nodes)
    single = quad.operator("single")
    double = quad.operator("double")
    if isinstance(single, FourierBlockOperator):
        rhs = FourierBlockOperator.identity(grid) * 0.5 - double
        return DtnSystem(grid, single, rhs, 0.0, None, quad, {"regularization": "k=0 skipped"})
    rhs = DenseOperator.identity(grid) * 0.5 - double
    eta = float(np.trace(single.matrix)) / (3 * grid.size * grid.area())
    sys = DtnSystem(grid, single, rhs, eta, None, quad, {"regularization": "rank-one normal"})
    try:
        sys.factor = sla.lu_factor(sys.regularized_single(), check_finite=True)
    except (sla.LinAlgError, ValueError) as exc:
        raise SolverError(f"factorization failed: {exc}") from exc
    return sys


def lift(v: PeriodicVectorField, grid: SurfaceGrid) -> SurfaceField:
    """Theta-independent surface field from centerline samples."""
    if v.n != grid.ns:
        raise GeometryError(f"field has {v.n} samples, grid has Ns={grid.ns}")
    return SurfaceField.lift(v, grid.ntheta)


def normal_moment(sys: DtnSystem, w: SurfaceField) -> float:
    """``<n, w>`` over the surface, the component the regularization controls."""
    g = sys.grid
    return float(np.sum(np.sum(np.asarray(w.values) * g.normals, axis=2) * g.weights))


def dtn_curved(sys: DtnSystem, v: PeriodicVectorField):
    """Angle-averaged traction ``f`` and surface traction ``w`` for velocity ``v(s)``.

    Solves ``S[w] = (1/2 I - D)[v]`` and returns ``(f, w)`` with
    ``f(s) = int w J dtheta``.
    """
    rhs = sys.rhs_operator.apply(lift(v, sys.grid))
    w = sys.solve_single(rhs)
    sys.meta["normal_moment"] = normal_moment(sys, w) if sys.dense else 0.0
    return angle_average_traction(w, sys.grid), w


def ntd_curved(sys: DtnSystem, f: PeriodicVectorField):
    """Velocity ``v(s)`` and traction ``w`` for prescribed angle-averaged traction ``f``.

    Square system in ``(w, v)``: ``S[w] - (1/2 I - D)[v] = 0`` at every node and
    ``sum_j w J dtheta = f`` at every ``s`` node.
    """
    g = sys.grid
    if f.n != g.ns:
        raise GeometryError(f"force has {f.n} samples, grid has Ns={g.ns}")
    if not sys.dense:
        raise GeometryError("ntd_curved needs a dense (closed filament) system")
    n3 = 3 * g.size
    ns3 = 3 * g.ns
    lift_mat = np.kron(np.eye(g.ns), np.kron(np.ones((g.ntheta, 1)), np.eye(3)))
    avg = np.zeros((ns3, n3))
    dth = 2 * np.pi / g.ntheta
    for i in range(g.ns):
        for j in range(g.ntheta):
            t = i * g.ntheta + j
            avg[3 * i:3 * i + 3, 3 * t:3 * t + 3] = np.eye(3) * g.jacobian[i, j] * dth
    big = np.zeros((n3 + ns3, n3 + ns3))
    big[:n3, :n3] = sys.regularized_single()
    big[:n3, n3:] = -sys.rhs_operator.matrix @ lift_mat
    big[n3:, :n3] = avg
    b = np.concatenate([np.zeros(n3), np.asarray(f.values).reshape(-1)])
    try:
        x = sla.solve(big, b)
        res = np.linalg.norm(big @ x - b) / max(np.linalg.norm(b), 1e-300)
        if not np.isfinite(res) or res > 1e-8:
            raise sla.LinAlgError(f"residual {res:.2e}")
    except (sla.LinAlgError, ValueError) as exc:
        warnings.warn(f"coupled NtD system is rank deficient ({exc}); using least squares",
                      RuntimeWarning, stacklevel=2)
        x = np.linalg.lstsq(big, b, rcond=1e-12)[0]
        res = np.linalg.norm(big @ x - b) / max(np.linalg.norm(b), 1e-300)
    sys.meta["last_residual"] = float(res)
    w = SurfaceField(x[:n3].reshape(g.ns, g.ntheta, 3))
    return PeriodicVectorField(x[n3:].reshape(g.ns, 3)), w


def neumann_data_completed(grid: SurfaceGrid, v: PeriodicVectorField,
                           quadrature: LayerQuadrature | None = None) -> SurfaceField:
    """Traction from the completed double layer: ``w = T[(1/2 I + D + V)^-1 v]``."""
    q = quadrature or LayerQuadrature(grid)
    ident = (DenseOperator if q.operator("double").__class__ is DenseOperator
             else FourierBlockOperator).identity(grid)
    system = ident * 0.5 + q.operator("double") + q.operator("completion")
    density = system.solve(lift(v, grid))
    traction = q.operator("double_traction").apply(density) + q.operator("completion_traction").apply(density)
    return traction * -1.0


# ---------------------------------------------------------------- decomposition study

def straight_prediction(grid: SurfaceGrid, v: PeriodicVectorField):
    """Main term ``Phi dtnStraight(Phi^-1 v0)`` with ``v0`` the Phi-mean-free part of ``v``.

    Returns
    -------
    prediction : PeriodicVectorField
    v0 : PeriodicVectorField
    mean : ndarray
        Removed mean in frame components.
    """
    v0, mean = subtract_phi_mean(grid.frame, v)
    g = phi_inverse(grid.frame, v0)
    g = PeriodicVectorField(g.values - g.mean())
    f = dtn_straight(grid.eps, g, zero_mode="drop")
    return phi_forward(grid.frame, f), v0, mean


def default_resolution(eps: float, ntheta: int = 8, ratio: float = 2.56, minimum: int = 64):
    """Grid size with ``h_s / eps`` held near ``1/ratio``; ``Ns`` a multiple of 8."""
    ns = max(minimum, int(np.ceil(ratio / eps / 8.0)) * 8)
    return ns, ntheta


@dataclass
class DecompositionRow:
    eps: float
    error: float
    ratio: float
    relative: float
    mean_part: float
    ns: int
    ntheta: int


def decomposition_error(curve: FourierCurve, eps_list, v_func, resolution=None,
                        config: QuadratureConfig | None = None) -> list[DecompositionRow]:
    """Remainder of the straight-tube decomposition of the curved DtN map.

    For each ``eps``: ``e = ||dtnCurved(v0) - Phi dtnStraight(Phi^-1 v0)||_inf``
    where ``v0`` is ``v`` with its frame mean removed. ``mean_part`` is the sup
    norm of ``dtnCurved`` applied to the removed mean, reported separately.

    Parameters
    ----------
    v_func : callable
        ``v_func(s) -> (N, 3)`` Cartesian velocity samples.
    resolution : callable, optional
        ``eps -> (Ns, Ntheta)``; defaults to :func:`default_resolution`.
    """
    resolution = resolution or default_resolution
    rows = []
    prev = None
    for eps in eps_list:
        ns, nt = resolution(eps)
        grid = surface_grid(curve.with_eps(eps), ns, nt)
        v = PeriodicVectorField.from_function(v_func, ns)
        pred, v0, mean = straight_prediction(grid, v)
        sys = assemble_dtn_system(grid, config)
        f0, _ = dtn_curved(sys, v0)
        err = (f0 - pred).norm_inf()
        mean_field = phi_forward(grid.frame, PeriodicVectorField(np.tile(mean, (ns, 1))))
        fm, _ = dtn_curved(sys, mean_field)
        rows.append(DecompositionRow(float(eps), err, np.nan if prev is None else prev / err,
                                     err / max(pred.norm_inf(), 1e-300), fm.norm_inf(), ns, nt))
        prev = err
        del sys
    return rows
