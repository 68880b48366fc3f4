import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcdrtls import stats as sm
from dcdrtls.errors import ConfigError, InvalidInputError
from dcdrtls.signals import EivModel, StreamConfig, reference_system, sample_arrays


def test_lambda_from_p():
    assert sm.lambda_from_p(10) == 0.9990234375
    assert sm.lambda_from_p(1) == 0.5
    with pytest.raises(ConfigError):
        sm.lambda_from_p(0)


def test_lambda_scaling_as_subtract_and_shift_is_bit_identical():
    # scaling by 1 - 2^-P realized as a - a*2^-P rounds the same exact
    # real as the direct multiplication, for every P and operand
    rng = np.random.default_rng(0)
    a = rng.standard_normal(10_000) * np.exp(rng.uniform(-20, 20, 10_000))
    for p in (1, 4, 10, 16, 30):
        lam = sm.lambda_from_p(p)
        assert np.array_equal(a * lam, a - a * 2.0**-p)


def test_init_state():
    s = sm.init(4, 0.5, 1e-2)
    assert np.array_equal(s.phi, 1e-2 * np.eye(4))
    assert np.all(s.z == 0.0) and s.tau == 0.0 and s.n == 0
    with pytest.raises(ConfigError):
        sm.init(4, 0.0, 1e-2)
    with pytest.raises(ConfigError):
        sm.init(4, 0.5, 0.0)
    with pytest.raises(ConfigError):
        sm.init(4, 0.9, 1e-2, p_exponent=10)  # 0.9 != 1 - 2^-10


def test_generic_update_matches_direct_sums():
    rng = np.random.default_rng(1)
    lam, delta, L, T = 0.9, 1e-3, 5, 40
    s = sm.init(L, lam, delta)
    X = rng.standard_normal((T, L))
    y = rng.standard_normal(T)
    for t in range(T):
        sm.update_generic(s, X[t], y[t])
    # direct exponentially weighted sums
    phi = delta * lam**T * np.eye(L)
    z = np.zeros(L)
    tau = 0.0
    for t in range(T):
        w = lam ** (T - 1 - t)
        phi += w * np.outer(X[t], X[t])
        z += w * y[t] * X[t]
        tau += w * y[t] ** 2
    assert np.allclose(s.phi, phi, atol=1e-12)
    assert np.allclose(s.z, z, atol=1e-12)
    assert s.tau == pytest.approx(tau, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=1, max_value=12),
    st.sampled_from([0.5, 0.9375, 0.9990234375]),
)
def test_shift_update_equals_generic_update(seed, p, lam):
    L, T = 8, 60
    model = EivModel(h=reference_system(), R=np.eye(L), eta=0.05, xi=0.02)
    _, X, _, y = sample_arrays(model, StreamConfig(shift_structured=True, seed=seed, length=T))
    a = sm.init(L, lam, 1e-2)
    b = sm.init(L, lam, 1e-2)
    for t in range(T):
        sm.update_generic(a, X[t], y[t])
        sm.update_shift(b, X[t, 0], X[t], y[t])
    scale = np.abs(a.phi).max()
    assert np.abs(a.phi - b.phi).max() <= 1e-12 * max(scale, 1.0)
    assert np.array_equal(a.z, b.z)
    assert a.tau == b.tau


def test_shift_update_rejects_mismatched_head():
    s = sm.init(4, 0.5, 1e-2)
    with pytest.raises(InvalidInputError):
        sm.update_shift(s, 1.0, np.array([2.0, 0.0, 0.0, 0.0]), 0.0)


def test_phi_stays_symmetric_under_shift_updates():
    model = EivModel(h=reference_system(), R=np.eye(8), eta=0.1, xi=0.1)
    _, X, _, y = sample_arrays(model, StreamConfig(shift_structured=True, seed=4, length=30))
    s = sm.init(8, 0.9990234375, 1e-2, p_exponent=10)
    for t in range(30):
        sm.update_shift(s, X[t, 0], X[t], y[t])
        assert np.array_equal(s.phi, s.phi.T)


def test_assemble_psi_layout():
    s = sm.init(3, 0.5, 1e-2)
    s.z = np.array([1.0, 2.0, 3.0])
    s.tau = 5.0
    aug = sm.assemble_psi(s, gamma=4.0)
    assert aug.psi.shape == (4, 4)
    assert np.allclose(aug.psi[:3, :3], s.phi)
    assert np.allclose(aug.psi[:3, 3], s.z / 2.0)  # gamma^-1/2 = 0.5
    assert np.allclose(aug.psi[3, :3], s.z / 2.0)
    assert aug.psi[3, 3] == pytest.approx(s.tau / 4.0)
    with pytest.raises(ConfigError):
        sm.assemble_psi(s, gamma=0.0)
