import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import sbf.multipliers as mp_
from oracles import DOUBLE_RESPONSE, DTN, SINGLE_FORWARD
from sbf.errors import DomainError, ZeroModeError
from sbf.verify import boundary_integral_errors, inverse_identity_errors, run_suite

eps_st = st.floats(min_value=1e-4, max_value=0.24)
k_st = st.integers(min_value=1, max_value=2000)


@pytest.mark.parametrize("key", sorted(DTN))
def test_dtn_eigen_against_mpmath(key):
    d, z = key
    eps = z / (2 * np.pi)  # k = 1
    assert mp_.dtn_eigen(d, eps, 1) == pytest.approx(DTN[key], rel=1e-12)
    assert mp_.ntd_eigen(d, eps, 1) == pytest.approx(1 / DTN[key], rel=1e-12)


@pytest.mark.parametrize("key", sorted(SINGLE_FORWARD))
def test_single_layer_forward_against_quadrature(key):
    eps, k = key
    tan, nor = SINGLE_FORWARD[key]
    assert np.allclose(mp_.single_layer_forward_tangential(eps, k), np.array(tan), rtol=0, atol=1e-12 * eps)
    assert np.allclose(mp_.single_layer_forward_normal(eps, k), np.array(nor), rtol=0, atol=1e-12 * eps)


@pytest.mark.parametrize("key", sorted(DOUBLE_RESPONSE))
def test_double_layer_against_quadrature(key):
    eps, k = key
    ez, ex = DOUBLE_RESPONSE[key]
    z = 2 * np.pi * eps * k
    q_e, q_f = mp_.double_layer_tangential(z)
    q_n, q_o, q_p = mp_.double_layer_normal(z)
    # D[e_z] = Q_tE e_z + i Q_tF e_r;  D[e_x] = Q_nN cos e_r - Q_nO sin e_theta + i Q_nP cos e_z
    assert np.allclose([q_e, 1j * q_f], ez, rtol=0, atol=1e-12)
    assert np.allclose([q_n, -q_o, 1j * q_p], ex, rtol=0, atol=1e-12)


@given(eps_st, k_st)
def test_symbols_even_positive_and_reciprocal(eps, k):
    for d in ("t", "n"):
        a, b = mp_.dtn_eigen(d, eps, k), mp_.dtn_eigen(d, eps, -k)
        assert a == b and a > 0
        assert a * mp_.ntd_eigen(d, eps, k) == pytest.approx(1.0, abs=1e-14)
        assert mp_.dtn_via_boundary_integral(d, eps, k) == mp_.dtn_via_boundary_integral(d, eps, -k)


def test_normal_dtn_positive_sweep():
    for eps in (0.1, 0.01, 0.001):
        k = np.arange(1, 5000)
        assert np.all(mp_.dtn_eigen("n", eps, k) > 0)


@pytest.mark.parametrize("d,expected", [("t", 1.0), ("n", 1.0)])
def test_large_mode_growth_slope(d, expected):
    eps = 0.01
    k = np.arange(int(np.ceil(4 / (2 * np.pi * eps))), int(64 / (2 * np.pi * eps)) + 1)
    slope = np.polyfit(np.log(k), np.log(mp_.dtn_eigen(d, eps, k)), 1)[0]
    assert slope == pytest.approx(expected, abs=0.05)
    slope = np.polyfit(np.log(k), np.log(mp_.ntd_eigen(d, eps, k)), 1)[0]
    assert slope == pytest.approx(-expected, abs=0.05)


def test_low_mode_log_scaling():
    vals = [mp_.dtn_eigen("n", eps, 1) * abs(np.log(eps)) for eps in (1e-2, 1e-3, 1e-4)]
    assert 14 < min(vals) and max(vals) < 18


def test_zero_mode_rejected():
    for f in (lambda: mp_.dtn_eigen("t", 0.01, 0), lambda: mp_.ntd_eigen("n", 0.01, [1, 0]),
              lambda: mp_.single_layer_forward_normal(0.01, 0),
              lambda: mp_.angle_averaged("t", 0.01, 0)):
        with pytest.raises(ZeroModeError):
            f()


def test_bad_arguments():
    with pytest.raises(DomainError):
        mp_.dtn_eigen("t", -0.1, 1)
    with pytest.raises(DomainError):
        mp_.dtn_eigen("x", 0.1, 1)
    with pytest.raises(DomainError):
        mp_.double_layer_tangential(0.0)
    with pytest.raises(DomainError):
        mp_.semigroup_factor("t", 0.1, 1, -1.0)


def test_double_layer_small_z_limit():
    _, q_f = mp_.double_layer_tangential(1e-8)
    _, _, q_p = mp_.double_layer_normal(1e-8)
    assert abs(q_f) < 1e-7 and abs(q_p) < 1e-7


@given(eps_st, st.integers(min_value=1, max_value=200))
def test_forward_tangential_hermitian_positive(eps, k):
    m = mp_.single_layer_forward_tangential(eps, k)
    assert np.allclose(m, m.conj().T, atol=1e-15)
    assert np.all(np.linalg.eigvalsh(m) > 0)
    assert m[0, 0].imag == 0 and m[1, 1].imag == 0
    assert m[0, 1].real == 0 and m[1, 0].real == 0


@given(eps_st, st.integers(min_value=1, max_value=200))
def test_forward_normal_structure(eps, k):
    m = mp_.single_layer_forward_normal(eps, k)
    assert np.allclose(m, m.conj().T, atol=1e-15)
    assert np.all(m[:2, :2].imag == 0)
    assert np.all(m[:2, 2].real == 0)


def test_inverse_identities():
    errs = inverse_identity_errors()
    assert errs["t"] <= 1e-10 and errs["n"] <= 1e-10


def test_inverse_tangential_small_z_behaviour():
    z = np.geomspace(1e-5, 1e-3, 5)
    m_a, m_b, m_c = mp_.single_layer_inverse_tangential(1.0, z / (2 * np.pi))
    assert np.allclose(m_b * z, 8.0, rtol=1e-3)
    assert np.all((3.9 < m_a) & (m_a < 4.2))
    assert np.allclose(m_c * z**2, 16.0, rtol=1e-3)


def test_angle_averaged_components():
    eps, k = 0.02, 3
    m_z, m_r, m_th = mp_.angle_averaged("t", eps, k)
    m_a, m_b, _ = mp_.single_layer_inverse_tangential(eps, k)
    assert m_th == 0
    assert m_z == pytest.approx(2 * m_a) and m_r == pytest.approx(-2j * m_b)
    n = mp_.single_layer_inverse_normal(eps, k)
    r, th, zz = mp_.angle_averaged("n", eps, k)
    assert r == pytest.approx(n[0] - n[1])
    assert th == pytest.approx(n[1] - n[3])
    assert zz == pytest.approx(1j * (n[2] + n[4]))
    assert mp_.angle_averaged("n", eps, -k)[2] == pytest.approx(-zz)


def test_boundary_integral_reproduces_eigenvalues():
    errs = boundary_integral_errors()
    assert errs["t"] <= 1e-10 and errs["n"] <= 1e-10


def test_boundary_integral_spot_value():
    # eps = 0.01, k = 5 composed from the oracle-checked symbols
    for d in ("t", "n"):
        assert mp_.dtn_via_boundary_integral(d, 0.01, 5) == pytest.approx(
            mp_.dtn_eigen(d, 0.01, 5), rel=1e-10)


def test_semigroup_factor_basics():
    assert mp_.semigroup_factor("t", 0.05, 3, 0.0) == 1.0
    assert mp_.semigroup_factor("n", 0.05, 0, 1.0) == 1.0
    taus = np.linspace(0, 1e-4, 20)
    vals = [mp_.semigroup_factor("n", 0.05, 2, t) for t in taus]
    assert np.all(np.diff(vals) < 0)
    ks = np.arange(0, 30)
    vk = mp_.semigroup_factor("t", 0.05, ks, 1e-6)
    assert np.all(np.diff(vk) < 0) and np.all((vk > 0) & (vk <= 1))
    assert mp_.semigroup_factor("t", 0.05, -4, 1e-5) == mp_.semigroup_factor("t", 0.05, 4, 1e-5)


def test_semigroup_decay_regimes():
    eps = 1e-3
    def rate(k, tau=1e-16):
        return -np.log(mp_.semigroup_factor("n", eps, k, tau)) / tau
    hi = np.arange(int(4 / (2 * np.pi * eps)), int(64 / (2 * np.pi * eps)))
    assert np.polyfit(np.log(hi), np.log(rate(hi)), 1)[0] == pytest.approx(3.0, abs=0.05)
    lo = np.arange(1, 10)
    # k^4 / |log(eps k)|: slope 4 - 1/|log z| in this range
    assert 3.6 < np.polyfit(np.log(lo), np.log(rate(lo)), 1)[0] < 4.0


def test_build_table():
    tab = mp_.build_table("dtn_t", 0.01, 128)
    assert len(tab.k) == 257 and tab.values.shape == (257,)
    assert np.array_equal(tab.values, tab.values[::-1])
    assert tab[0] == tab[1] and tab.metadata["zero_mode"] == "nearest"
    assert tab[7] == pytest.approx(mp_.dtn_eigen("t", 0.01, 7))
    rej = mp_.build_table("bi_n", 0.01, 4, zero_mode="reject")
    assert np.isnan(rej[0])
    with pytest.raises(KeyError):
        tab[129]
    for fam in mp_.TABLE_FAMILIES:
        assert np.all(np.isfinite(mp_.build_table(fam, 0.02, 8).values))
    with pytest.raises(DomainError):
        mp_.build_table("nope", 0.01, 4)
    with pytest.raises(DomainError):
        mp_.build_table("dtn_t", 0.01, 0)


def test_sign_flip_in_double_layer_is_caught(monkeypatch):
    orig = mp_.double_layer_tangential

    def flipped(z):
        q_e, q_f = orig(z)
        return q_e, -np.asarray(q_f)

    monkeypatch.setattr(mp_, "double_layer_tangential", flipped)
    report = run_suite("symbols")
    assert not report["pass"]
    failed = [c["name"] for c in report["checks"] if c["status"] == "fail"]
    assert failed == ["boundary-integral vs eigenvalue, tangential"]
