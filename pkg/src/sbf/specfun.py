"""Modified Bessel functions of orders 0, 1, 2 and the ratios built from them.

Evaluation strategy
-------------------
* ``I_n``: ascending power series for ``z <= 20`` (all terms positive, so no
  cancellation), Hankel asymptotic expansion above that.
* ``K_0, K_1``: ascending series with the logarithmic term for ``z <= 2``;
  Steed's continued fraction (Temme's CF2) for ``z > 2``, which returns the
  exponentially scaled pair ``e^z K_0``, ``e^z K_1`` directly.
* ``K_2`` from the recurrence ``K_2 = K_0 + 2 K_1 / z``.

Every routine accepts scalars or arrays and returns the same shape.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061

_I_SERIES_MAX = 20.0
_K_SERIES_MAX = 2.0
_SERIES_TERMS = 80
_ASYMPTOTIC_TERMS = 45
_CF_MAXITER = 200

RATIO_KINDS = ("K1K0", "K0K1", "I1I0", "I0I1")


def _prepare(z, allow_zero):
    arr = np.asarray(z, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError("Bessel argument is NaN")
    if allow_zero:
        if np.any(arr < 0):
            raise DomainError("Bessel argument must be nonnegative")
    elif np.any(arr <= 0):
        raise DomainError("Bessel K argument must be positive")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _check_order(order):
    if order not in (0, 1, 2):
        raise DomainError(f"only orders 0, 1, 2 are supported, got {order!r}")


# ---------------------------------------------------------------- I_n

def _i_series(order, z):
    # sum_k (z/2)^(2k+n) / (k! (k+n)!)
    q = 0.25 * z * z
    term = (0.5 * z) ** order / math.factorial(order)
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
        if np.all(term <= 1e-18 * total):
            break
    return total


def _i_asymptotic_scaled(order, z):
    # e^{-z} I_n(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(n) / z^k
    mu = 4.0 * order * order
    term = np.ones_like(z)
    total = term.copy()
    for k in range(1, _ASYMPTOTIC_TERMS):
        term = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total / np.sqrt(2.0 * np.pi * z)


def bessel_i(order: int, z, scaled: bool = False):
    """Modified Bessel function of the first kind.

    Parameters
    ----------
    order : {0, 1, 2}
    z : float or array_like
        Nonnegative argument; ``z = 0`` returns the series limit.
    scaled : bool
        If True return ``exp(-z) * I_order(z)``.

    Returns
    -------
    float or ndarray
    """
    _check_order(order)
    arr = _prepare(z, allow_zero=True)
    flat = np.atleast_1d(arr).ravel()
    res = np.empty_like(flat)
    lo = flat <= _I_SERIES_MAX
    if np.any(lo):
        v = _i_series(order, flat[lo])
        res[lo] = v * np.exp(-flat[lo]) if scaled else v
    hi = ~lo
    if np.any(hi):
        v = _i_asymptotic_scaled(order, flat[hi])
        res[hi] = v if scaled else v * np.exp(flat[hi])
    return _out(res.reshape(np.shape(arr)), z)


# ---------------------------------------------------------------- K_0, K_1

def _k01_series(z):
    """Unscaled K_0, K_1 from the ascending series (intended for z <= 2)."""
    q = 0.25 * z * z
    log_half = np.log(0.5 * z)
    # psi(k+1) = -gamma + H_k
    psi_k = -EULER_GAMMA
    psi_k1 = 1.0 - EULER_GAMMA
    t0 = np.ones_like(z)          # q^k / (k!)^2
    t1 = np.ones_like(z)          # q^k / (k!(k+1)!)
    s0 = psi_k * t0
    s1 = (psi_k + psi_k1) * t1
    i0 = t0.copy()
    i1 = t1.copy()
    for k in range(1, _SERIES_TERMS):
        t0 = t0 * q / (k * k)
        t1 = t1 * q / (k * (k + 1))
        psi_k = psi_k1
        psi_k1 = psi_k1 + 1.0 / (k + 1)
        s0 += psi_k * t0
        s1 += (psi_k + psi_k1) * t1
        i0 += t0
        i1 += t1
        if np.all(t0 <= 1e-18 * i0):
            break
    i1 = 0.5 * z * i1
    k0 = -log_half * i0 + s0
    k1 = 1.0 / z + log_half * i1 - 0.25 * z * s1
    return k0, k1


def _k01_cf_scaled(z):
    """Scaled pair e^z K_0, e^z K_1 via Steed's continued fraction (z >= 2)."""
    a1 = 0.25
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(z)
    q2 = np.ones_like(z)
    q = np.full_like(z, a1)
    c = np.full_like(z, a1)
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, _CF_MAXITER):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        if np.all(np.abs(dels) <= 1e-17 * np.abs(s)):
            break
    k0 = np.sqrt(np.pi / (2.0 * z)) / s
    k1 = k0 * (z + 0.5 - a1 * h) / z
    return k0, k1


def _k01(z, scaled):
    flat = np.atleast_1d(z).ravel()
    k0 = np.empty_like(flat)
    k1 = np.empty_like(flat)
    lo = flat <= _K_SERIES_MAX
    if np.any(lo):
        a, b = _k01_series(flat[lo])
        if scaled:
            e = np.exp(flat[lo])
            a, b = a * e, b * e
        k0[lo], k1[lo] = a, b
    hi = ~lo
    if np.any(hi):
        a, b = _k01_cf_scaled(flat[hi])
        if not scaled:
            e = np.exp(-flat[hi])
            a, b = a * e, b * e
        k0[hi], k1[hi] = a, b
    return k0.reshape(np.shape(z)), k1.reshape(np.shape(z))


def bessel_k(order: int, z, scaled: bool = False):
    """Modified Bessel function of the second kind.

    Parameters
    ----------
    order : {0, 1, 2}
    z : float or array_like
        Strictly positive argument.
    scaled : bool
        If True return ``exp(z) * K_order(z)``.
    """
    _check_order(order)
    arr = _prepare(z, allow_zero=False)
    k0, k1 = _k01(arr, scaled)
    if order == 0:
        res = k0
    elif order == 1:
        res = k1
    else:
        res = k0 + 2.0 * k1 / arr
    return _out(res, z)


def bessel_table(z):
    """Scaled values ``(e^-z I0, e^-z I1, e^z K0, e^z K1, e^z K2)`` in one pass.

    Products ``I_j K_l`` formed from these are unscaled, which is what the
    straight-cylinder symbols need.
    """
    arr = _prepare(z, allow_zero=False)
    i0 = np.asarray(bessel_i(0, arr, scaled=True))
    i1 = np.asarray(bessel_i(1, arr, scaled=True))
    k0, k1 = _k01(arr, scaled=True)
    k2 = k0 + 2.0 * k1 / arr
    return i0, i1, k0, k1, k2


# ---------------------------------------------------------------- ratios

def ratio(kind: str, z):
    """Ratio of Bessel functions evaluated from scaled values.

    Parameters
    ----------
    kind : {"K1K0", "K0K1", "I1I0", "I0I1"}
        Numerator and denominator, e.g. ``"K1K0"`` is ``K_1(z) / K_0(z)``.
    z : float or array_like
        Strictly positive argument.
    """
    if kind not in RATIO_KINDS:
        raise DomainError(f"unknown ratio kind {kind!r}")
    arr = _prepare(z, allow_zero=False)
    if kind[0] == "K":
        k0, k1 = _k01(arr, scaled=True)
        res = k1 / k0 if kind == "K1K0" else k0 / k1
    else:
        i0 = np.asarray(bessel_i(0, arr, scaled=True))
        i1 = np.asarray(bessel_i(1, arr, scaled=True))
        res = i1 / i0 if kind == "I1I0" else i0 / i1
    return _out(np.asarray(res), z)


def ratio_derivative(kind: str, z):
    """Closed-form derivative of :func:`ratio` with respect to ``z``.

    Uses ``K_0' = -K_1``, ``K_1' = -K_0 - K_1/z``, ``I_0' = I_1`` and
    ``I_1' = I_0 - I_1/z``, which give for instance
    ``(K_1/K_0)' = (K_1/K_0)^2 - K_1/(z K_0) - 1``.
    """
    r = np.asarray(ratio(kind, z))
    zz = np.asarray(z, dtype=float)
    if kind == "K1K0":
        res = r * r - r / zz - 1.0
    elif kind == "K0K1":
        res = r * r + r / zz - 1.0
    elif kind == "I1I0":
        res = -r * r - r / zz + 1.0
    else:
        res = -r * r + r / zz + 1.0
    return _out(res, z)
