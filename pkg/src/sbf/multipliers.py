"""Fourier symbols of the layer potentials and DtN/NtD maps on a straight periodic tube.

The tube has radius ``eps`` around the unit-period ``z``-axis. A Fourier mode
``exp(2 pi i k s)`` is characterised by the Bessel argument
``z = 2 pi eps |k|``.

Conventions
-----------
* Matrices act on column vectors of coefficients. The tangential block uses
  the basis ``(e_z, e_r)`` of θ-independent fields; the normal block uses
  ``(cos θ e_r, sin θ e_θ, cos θ e_z)``.
* Off-diagonal couplings (``m_tB``, ``m_nC``, ``m_nE``, ``Q_tF``, ``Q_nP`` and
  the forward entries ``Q_J``, ``Q_L``) are returned as real magnitudes computed
  at ``|k|``. The imaginary unit that multiplies them is listed in
  :data:`IMAGINARY_COUPLINGS`; it belongs to ``k > 0`` and is conjugated for
  ``k < 0`` because the kernels are real.
* The k = 0 mode is rejected by every DtN/NtD symbol (:class:`ZeroModeError`).
  Tables fill the k = 0 row according to an explicit zero-mode convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularSymbolError, ZeroModeError
from .specfun import bessel_table

SINGULAR_THRESHOLD = 1e-14

#: Placement of the imaginary unit for each coupling stored as a real magnitude
#: (value for k > 0; conjugate for k < 0). The entry names the matrix slot.
IMAGINARY_COUPLINGS = {
    "m_tB": {"(z,r)": -1j, "(r,z)": +1j},
    "Q_tF": {"(r<-z)": +1j},
    "m_nC": {"(r,z)": +1j, "(z,r)": -1j},
    "m_nE": {"(theta,z)": -1j, "(z,theta)": +1j},
    "Q_nP": {"(z<-x)": +1j},
    "Q_J": {"(r,z)": -1j, "(z,r)": +1j},
    "Q_L": {"(theta,z)": -1j, "(z,theta)": +1j},
}

DIRECTIONS = ("tangential", "normal")

ZERO_MODE_CONVENTIONS = ("nearest", "reject")


def _direction(direction):
    if direction in ("t", "tangential"):
        return "tangential"
    if direction in ("n", "normal"):
        return "normal"
    raise DomainError(f"unknown direction {direction!r}")


def _mode_argument(eps, k):
    if not eps > 0:
        raise DomainError("eps must be positive")
    kk = np.asarray(k)
    if np.any(kk == 0):
        raise ZeroModeError("the k = 0 mode has no DtN/NtD symbol (data must be mean-zero)")
    return 2.0 * np.pi * eps * np.abs(kk).astype(float)


def _positive(z):
    zz = np.asarray(z, dtype=float)
    if np.any(~(zz > 0)):
        raise DomainError("symbol argument z must be positive")
    return zz


def _ret(val, like):
    return float(val) if np.ndim(like) == 0 else val


def symbol_argument(eps: float, k) -> np.ndarray | float:
    """Return ``z = 2 pi eps |k|``."""
    return _ret(_mode_argument(eps, k), k)


# ---------------------------------------------------------------- DtN / NtD

def dtn_eigen_tangential(eps: float, k):
    """DtN eigenvalue for tangential (``e_z``) data at mode ``k``."""
    z = _mode_argument(eps, k)
    _, _, k0, k1, _ = bessel_table(z)
    val = 4.0 * np.pi * z * k1**2 / (2.0 * k0 * k1 + z * (k0**2 - k1**2))
    return _ret(val, k)


def dtn_eigen_normal(eps: float, k):
    """DtN eigenvalue for normal (``e_x`` or ``e_y``) data at mode ``k``."""
    z = _mode_argument(eps, k)
    _, _, k0, k1, k2 = bessel_table(z)
    num = 4.0 * k1**2 * k2 + z * k1 * (k1**2 - k0 * k2)
    den = 2.0 * k0 * k1 * k2 + z * (k1**2 * (k0 + k2) - 2.0 * k0**2 * k2)
    return _ret(2.0 * np.pi * z * num / den, k)


def dtn_eigen(direction: str, eps: float, k):
    """DtN eigenvalue in the given direction."""
    if _direction(direction) == "tangential":
        return dtn_eigen_tangential(eps, k)
    return dtn_eigen_normal(eps, k)


def ntd_eigen(direction: str, eps: float, k):
    """NtD eigenvalue (mobility), the reciprocal of :func:`dtn_eigen`."""
    return 1.0 / dtn_eigen(direction, eps, k)


# ---------------------------------------------------------------- double layer

def double_layer_tangential(z):
    """Double-layer coefficients ``(Q_tE, Q_tF)`` for ``exp(2 pi i k s) e_z``.

    The potential equals ``Q_tE e_z + i Q_tF e_r`` times the mode (k > 0).
    """
    zz = _positive(z)
    i0, i1, k0, k1, _ = bessel_table(zz)
    q_e = zz**2 * (i0 * k0 - i1 * k1) - zz / 2 * (i0 * k1 - i1 * k0)
    q_f = -(zz**2) * (i1 * k0 - i0 * k1) - zz * i1 * k1
    return _ret(q_e, z), _ret(q_f, z)


def double_layer_normal(z):
    """Double-layer coefficients ``(Q_nN, Q_nO, Q_nP)`` for ``exp(2 pi i k s) e_x``.

    The potential equals ``Q_nN cos θ e_r - Q_nO sin θ e_θ + i Q_nP cos θ e_z``
    times the mode (k > 0), where ``e_x = cos θ e_r - sin θ e_θ``.
    """
    zz = _positive(z)
    i0, i1, k0, k1, _ = bessel_table(zz)
    q_n = zz**2 * (i1 * k1 - i0 * k0) + 1.5 * zz * (i1 * k0 - i0 * k1) + 2 * i1 * k1
    q_o = -zz / 2 * (i1 * k0 - i0 * k1) - 2 * i1 * k1
    q_p = zz**2 * (i0 * k1 - i1 * k0) - zz * i1 * k1
    return _ret(q_n, z), _ret(q_o, z), _ret(q_p, z)


# ---------------------------------------------------------------- single layer

def _odd_sign(k):
    return np.where(np.asarray(k) < 0, -1.0, 1.0)


def single_layer_forward_tangential(eps: float, k) -> np.ndarray:
    """Single-layer symbol on ``(e_z, e_r)``; shape ``(2, 2)`` or ``(..., 2, 2)``."""
    z = _mode_argument(eps, k)
    i0, i1, k0, k1, _ = bessel_table(z)
    half = z / 2
    cross = i1 * k0 - i0 * k1
    off = half * (i0 * k0 - i1 * k1) * _odd_sign(k)
    out = np.empty(np.shape(z) + (2, 2), dtype=complex)
    out[..., 0, 0] = i0 * k0 + half * cross
    out[..., 0, 1] = 1j * off
    out[..., 1, 0] = -1j * off
    out[..., 1, 1] = i1 * k1 + half * cross
    return eps * out


def single_layer_inverse_tangential(eps: float, k):
    """Components ``(m_tA, m_tB, m_tC)`` of the inverse tangential single layer.

    The inverse symbol is ``eps^-1 [[m_tA, -i m_tB], [i m_tB, m_tC]]`` for k > 0.
    """
    z = _mode_argument(eps, k)
    i0, i1, k0, k1, _ = bessel_table(z)
    a, big_a = i1 / i0, i0 / i1
    b, big_b = k1 / k0, k0 / k1
    q_a = 1.0 / (i0 * k0) * (1 + z / 2 * (big_b - big_a))
    q_c = 1.0 / (i1 * k1) * (1 + z / 2 * (a - b))
    q_b = z / 2 * (1.0 / (i1 * k1) - 1.0 / (i0 * k0))
    q_d = (1 + z / 2 * (a - big_a)) * (1 + z / 2 * (big_b - b))
    if np.any(np.abs(q_d) < SINGULAR_THRESHOLD):
        raise SingularSymbolError("Q_tD vanished")
    return _ret(q_a / q_d, k), _ret(q_b / q_d, k), _ret(q_c / q_d, k)


def _forward_normal_entries(z):
    i0, i1, k0, k1, _ = bessel_table(z)
    half = z / 2
    cross = i1 * k0 - i0 * k1
    diff = i0 * k0 - i1 * k1
    p11 = i1 * k1
    q_h = -3 / (2 * z) * cross - 3 / z**2 * p11 - half * cross + diff
    q_i = -3 / (2 * z) * cross - 3 / z**2 * p11 + 0.5 * diff
    q_j = -half * diff + 0.5 * cross + p11 / z
    q_k = -(3 / (2 * z) * cross + 3 / z**2 * p11 - i0 * k0)
    q_l = 0.5 * cross + p11 / z
    q_m = -half * cross
    return q_h, q_i, q_j, q_k, q_l, q_m


def single_layer_forward_normal(eps: float, k) -> np.ndarray:
    """Single-layer symbol on ``(cos θ e_r, sin θ e_θ, cos θ e_z)``; shape ``(3, 3)``."""
    z = _mode_argument(eps, k)
    q_h, q_i, q_j, q_k, q_l, q_m = _forward_normal_entries(z)
    sgn = _odd_sign(k)
    out = np.empty(np.shape(z) + (3, 3), dtype=complex)
    out[..., 0, 0] = q_h
    out[..., 0, 1] = q_i
    out[..., 0, 2] = -1j * sgn * q_j
    out[..., 1, 0] = q_i
    out[..., 1, 1] = q_k
    out[..., 1, 2] = -1j * sgn * q_l
    out[..., 2, 0] = 1j * sgn * q_j
    out[..., 2, 1] = 1j * sgn * q_l
    out[..., 2, 2] = q_m
    return eps * out


def single_layer_inverse_normal(eps: float, k):
    """Components ``(m_nA, ..., m_nF)`` of the inverse normal single layer.

    The inverse symbol is
    ``eps^-1 [[m_nA, m_nB, i m_nC], [m_nB, m_nD, -i m_nE], [-i m_nC, i m_nE, m_nF]]``
    for k > 0.
    """
    z = _mode_argument(eps, k)
    i0, i1, k0, k1, _ = bessel_table(z)
    a, big_a = i1 / i0, i0 / i1
    b, big_b = k1 / k0, k0 / k1
    p = 1.0 / (i1 * k1)
    q_a = p * (4 + 4 / z**2 * a * b + 2 / z * (b - a) - 2 * z * (big_a - big_b)
               - 2 * (big_a * b + a * big_b))
    q_b = p * (2 * b * (big_a - a) + 2 * (a * big_b - 1) + 2 / z * (a - b) - 4 / z**2 * a * b)
    q_c = 2 * p * (2 / z * a * b + 2 * (big_a - big_b) + (a - b) + z * big_a * big_b - z - 4 / z)
    q_d = p * (4 / z**2 * a * b + 2 / z * (b - a) + 2 * (2 * a * b - a * big_b - big_a * b)
               + z**2 * (big_a - a) * (big_b - b))
    q_e = p * (4 / z * a * b - 4 / z + 2 * (big_a - big_b) + z * (big_a - a) * (big_b - b))
    q_f = p * (12 / z**2 + 6 / z * (big_b - big_a + b - a) - 3 * (big_a * (big_b + b) + a * big_b)
               + (a * b + 8) + 2 * z * (big_b - big_a))
    q_g = (2 / z + (1 - z * big_a) * (big_a - a)) * (2 / z - (1 + z * big_b) * (big_b - b))
    if np.any(np.abs(q_g) < SINGULAR_THRESHOLD):
        raise SingularSymbolError("Q_nG vanished")
    return tuple(_ret(q / q_g, k) for q in (q_a, q_b, q_c, q_d, q_e, q_f))


def single_layer_inverse_matrix(direction: str, eps: float, k) -> np.ndarray:
    """Assembled inverse single-layer symbol (including the ``1/eps`` factor)."""
    sgn = _odd_sign(k)
    if _direction(direction) == "tangential":
        m_a, m_b, m_c = single_layer_inverse_tangential(eps, k)
        out = np.empty(np.shape(m_a) + (2, 2), dtype=complex)
        out[..., 0, 0] = m_a
        out[..., 0, 1] = -1j * sgn * m_b
        out[..., 1, 0] = 1j * sgn * m_b
        out[..., 1, 1] = m_c
        return out / eps
    n_a, n_b, n_c, n_d, n_e, n_f = single_layer_inverse_normal(eps, k)
    out = np.empty(np.shape(n_a) + (3, 3), dtype=complex)
    out[..., 0, 0] = n_a
    out[..., 0, 1] = n_b
    out[..., 0, 2] = 1j * sgn * n_c
    out[..., 1, 0] = n_b
    out[..., 1, 1] = n_d
    out[..., 1, 2] = -1j * sgn * n_e
    out[..., 2, 0] = -1j * sgn * n_c
    out[..., 2, 1] = 1j * sgn * n_e
    out[..., 2, 2] = n_f
    return out / eps


def angle_averaged(direction: str, eps: float, k):
    """Angle-averaged inverse single-layer components.

    Returns
    -------
    tuple of complex
        Tangential data: ``(m_z, m_r, m_theta) = (2 m_tA, -2i m_tB, 0)``.
        Normal data: ``(m_r, m_theta, m_z) = (m_nA - m_nB, m_nB - m_nD, i (m_nC + m_nE))``.
        The imaginary parts carry ``sign(k)``.
    """
    sgn = _odd_sign(k)
    if _direction(direction) == "tangential":
        m_a, m_b, _ = single_layer_inverse_tangential(eps, k)
        out = (2 * np.asarray(m_a) + 0j, -2j * sgn * m_b, np.zeros_like(sgn) + 0j)
    else:
        n_a, n_b, n_c, n_d, n_e, _ = single_layer_inverse_normal(eps, k)
        out = (np.asarray(n_a - n_b) + 0j, np.asarray(n_b - n_d) + 0j, 1j * sgn * (n_c + n_e))
    if np.ndim(k) == 0:
        return tuple(complex(v) for v in out)
    return out


def dtn_via_boundary_integral(direction: str, eps: float, k):
    """DtN eigenvalue recomposed from single- and double-layer symbols.

    Applies the angle-averaged inverse single layer to ``(1/2 - D)`` of the
    mode. The ``1/eps`` of the inverse cancels against the surface Jacobian.
    """
    z = _mode_argument(eps, k)
    if _direction(direction) == "tangential":
        q_e, q_f = double_layer_tangential(z)
        m_a, m_b, _ = single_layer_inverse_tangential(eps, k)
        val = np.pi * (m_a * (1 - 2 * q_e) - 2 * m_b * q_f)
    else:
        q_n, q_o, q_p = double_layer_normal(z)
        n_a, n_b, n_c, n_d, n_e, _ = single_layer_inverse_normal(eps, k)
        val = np.pi * ((n_a - n_b) * (0.5 - q_n) - (n_b - n_d) * (0.5 - q_o) + (n_c + n_e) * q_p)
    return _ret(np.asarray(val), k)


# ---------------------------------------------------------------- semigroup

def semigroup_factor(direction: str, eps: float, k, tau: float, zero_mode_k: int | None = None):
    """Per-mode factor ``exp(-tau (2 pi k)^4 m(k))`` of the linear semigroup.

    Parameters
    ----------
    direction : {"tangential", "normal"}
    eps : float
    k : int or array_like of int
    tau : float
        Nonnegative time (already divided by the filament length).
    zero_mode_k : int, optional
        Unused for the factor itself (k = 0 gives 1 since ``k^4 = 0``); kept so
        callers can document the convention they apply elsewhere.
    """
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    kk = np.asarray(k)
    out = np.ones(np.shape(kk))
    nz = kk != 0
    if np.any(nz):
        kn = kk[nz] if kk.ndim else kk
        m = ntd_eigen(direction, eps, kn)
        out_nz = np.exp(-tau * (2 * np.pi * kn) ** 4 * m)
        if kk.ndim:
            out[nz] = out_nz
        else:
            out = np.asarray(out_nz)
    return _ret(out, k)


# ---------------------------------------------------------------- tables

@dataclass(frozen=True, eq=False)
class MultiplierTable:
    """Per-mode values of one symbol family for k in [-kmax, kmax]."""

    family: str
    eps: float
    k: np.ndarray
    values: np.ndarray
    zero_mode: str
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, mode: int):
        idx = int(mode) + (len(self.k) - 1) // 2
        if not 0 <= idx < len(self.k):
            raise KeyError(mode)
        return self.values[idx]


def _family_values(family, eps, k):
    z = 2 * np.pi * eps * np.abs(k)
    table = {
        "dtn_t": lambda: dtn_eigen_tangential(eps, k),
        "dtn_n": lambda: dtn_eigen_normal(eps, k),
        "ntd_t": lambda: ntd_eigen("tangential", eps, k),
        "ntd_n": lambda: ntd_eigen("normal", eps, k),
        "bi_t": lambda: dtn_via_boundary_integral("tangential", eps, k),
        "bi_n": lambda: dtn_via_boundary_integral("normal", eps, k),
        "Q_tE": lambda: double_layer_tangential(z)[0],
        "Q_tF": lambda: double_layer_tangential(z)[1],
        "Q_nN": lambda: double_layer_normal(z)[0],
        "Q_nO": lambda: double_layer_normal(z)[1],
        "Q_nP": lambda: double_layer_normal(z)[2],
    }
    for i, name in enumerate("ABC"):
        table[f"m_t{name}"] = (lambda i=i: single_layer_inverse_tangential(eps, k)[i])
    for i, name in enumerate("ABCDEF"):
        table[f"m_n{name}"] = (lambda i=i: single_layer_inverse_normal(eps, k)[i])
    if family not in table:
        raise DomainError(f"unknown multiplier family {family!r}")
    return np.asarray(table[family](), dtype=float)


TABLE_FAMILIES = (
    "dtn_t", "dtn_n", "ntd_t", "ntd_n", "bi_t", "bi_n",
    "Q_tE", "Q_tF", "Q_nN", "Q_nO", "Q_nP",
    "m_tA", "m_tB", "m_tC", "m_nA", "m_nB", "m_nC", "m_nD", "m_nE", "m_nF",
)


def build_table(family: str, eps: float, kmax: int, zero_mode: str = "nearest") -> MultiplierTable:
    """Tabulate a symbol family over ``k = -kmax..kmax``.

    Parameters
    ----------
    zero_mode : {"nearest", "reject"}
        ``"nearest"`` fills k = 0 with the |k| = 1 value (the mobility
        regularization used by the evolution); ``"reject"`` stores NaN.
    """
    if kmax < 1:
        raise DomainError("kmax must be at least 1")
    if zero_mode not in ZERO_MODE_CONVENTIONS:
        raise DomainError(f"unknown zero-mode convention {zero_mode!r}")
    k = np.arange(-kmax, kmax + 1)
    pos = np.arange(1, kmax + 1)
    half = _family_values(family, eps, pos)
    zero = half[0] if zero_mode == "nearest" else np.nan
    values = np.concatenate([half[::-1], [zero], half])
    return MultiplierTable(family, float(eps), k, values, zero_mode,
                           {"zero_mode": zero_mode, "kmax": int(kmax)})
