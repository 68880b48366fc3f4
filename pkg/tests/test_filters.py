import numpy as np
import pytest

from dcdrtls import filters as fl
from dcdrtls import kernels as kn
from dcdrtls import stats as sm
from dcdrtls.dcd import DcdParams
from dcdrtls.errors import ConfigError, NonGenericTlsError
from dcdrtls.signals import EivModel, StreamConfig, random_covariance, reference_system, sample_arrays
from dcdrtls.stats import AugmentedStats, assemble_psi

LAM = sm.lambda_from_p(10)
DCD = DcdParams(n_max=1, m_bits=16, h_range=1.0)


def _stream(seed=3, T=400, structured=False, eta=0.01, xi=0.01):
    if structured:
        model = EivModel(h=reference_system(), R=np.eye(8), eta=eta, xi=xi)
    else:
        cov, q, f = random_covariance(8, 2024)
        model = EivModel(h=reference_system(), R=cov, eta=eta, xi=xi, Q=q, f=f)
    cfg = StreamConfig(shift_structured=structured, seed=seed, length=T)
    _, X, _, y = sample_arrays(model, cfg)
    return model, X, y


@pytest.mark.parametrize("structured", [False, True])
def test_step_matches_trajectory_kernel_bit_exactly(structured):
    _, X, y = _stream(structured=structured)
    st = fl.filter_init(8, LAM, 1e-2, 1.0, DCD, p_exponent=10, structured=structured)
    ws = np.empty_like(X)
    for t in range(X.shape[0]):
        fl.dcd_rtls_step(st, X[t], y[t])
        ws[t] = st.w
    W, status, _ = kn.dcd_rtls_run(X, y, LAM, 1.0, 1e-2, 1, 16, 1.0, structured)
    assert status == kn.OK
    assert np.array_equal(ws, W)


def test_exact_step_matches_exact_kernel():
    _, X, y = _stream()
    s = sm.init(8, LAM, 1e-2)
    w = np.zeros(8)
    ws = np.empty_like(X)
    for t in range(X.shape[0]):
        sm.update_generic(s, X[t], y[t])
        w = fl.exact_rtls_step_direct(s, w, gamma=1.0)
        ws[t] = w
    W, status, _ = kn.exact_rtls_run(X, y, LAM, 1.0, 1e-2)
    assert status == kn.OK
    assert np.allclose(ws, W, atol=1e-12)


def test_direct_and_sherman_morrison_exact_steps_agree():
    _, X, y = _stream(T=200)
    s = sm.init(8, LAM, 1e-2)
    phi_inv = np.eye(8) / 1e-2
    w_direct = np.zeros(8)
    w_sm = np.zeros(8)
    for t in range(X.shape[0]):
        sm.update_generic(s, X[t], y[t])
        fl.phi_inv_update(phi_inv, X[t], LAM)
        w_direct = fl.exact_rtls_step_direct(s, w_direct, gamma=1.0)
        w_sm = fl.exact_rtls_step_sm(phi_inv, s.z, s.tau, w_sm, gamma=1.0)
        assert np.abs(w_direct - w_sm).max() <= 1e-9


def test_stored_residuals_match_recomputed_values():
    # r_i = p_i - Phi d_i, with p_i built from the stored previous state
    _, X, y = _stream(T=150)
    st = fl.filter_init(8, LAM, 1e-2, 1.0, DCD, p_exponent=10)
    from dcdrtls.dcd import dcd_solve

    for t in range(X.shape[0]):
        m1_prev = st.m1.copy()
        m2_prev = st.m2.copy()
        r1_prev = st.r1.copy()
        r2_prev = st.r2.copy()
        w_nm1 = st.w.copy()
        w_nm2 = st.w_prev.copy()
        fl.dcd_rtls_step(st, X[t], y[t])
        s = st.stats
        p1 = LAM * r1_prev + (y[t] - X[t] @ m1_prev) * X[t]
        p2 = LAM * (r2_prev - w_nm2) + w_nm1 - (X[t] @ m2_prev) * X[t]
        d1 = st.m1 - m1_prev
        d2 = st.m2 - m2_prev
        assert np.abs(st.r1 - (p1 - s.phi @ d1)).max() <= 1e-9
        assert np.abs(st.r2 - (p2 - s.phi @ d2)).max() <= 1e-9


def test_dcd_filter_tracks_exact_filter():
    _, X, y = _stream(T=3000)
    Wd, sd, _ = kn.dcd_rtls_run(X, y, LAM, 1.0, 1e-2, 1, 16, 1.0, False)
    We, se, _ = kn.exact_rtls_run(X, y, LAM, 1.0, 1e-2)
    assert sd == kn.OK and se == kn.OK
    # after convergence the two stay close in deviation norm
    tail = slice(1000, None)
    assert np.abs(
        np.linalg.norm(Wd[tail] - We[tail], axis=1)
    ).max() < 0.1


def test_noiseless_filter_identifies_the_system():
    model, X, y = _stream(T=4000, eta=0.0, xi=0.0)
    W, status, _ = kn.exact_rtls_run(X, y, LAM, 1.0, 1e-2)
    assert status == kn.OK
    assert np.linalg.norm(W[-1] - model.h) < 1e-3


def test_filter_counts_accumulate():
    _, X, y = _stream(T=5, structured=True)
    st = fl.filter_init(8, LAM, 1e-2, 1.0, DCD, p_exponent=10, structured=True)
    for t in range(5):
        fl.dcd_rtls_step(st, X[t], y[t])
    assert st.counts.mul == 5 * st.last_counts.mul
    assert st.counts.div == 5


def test_rls_is_biased_but_bcrls_compensates():
    cov, q, f = random_covariance(8, 2379)
    eta = 0.1
    model = EivModel(h=reference_system(), R=cov, eta=eta, xi=eta, Q=q, f=f)
    dev_rls = np.zeros(8)
    dev_bc = np.zeros(8)
    runs, T = 60, 4000
    for r in range(runs):
        _, X, _, y = sample_arrays(model, StreamConfig(False, 5000 + r, T))
        Wr, _, _ = kn.rls_run(X, y, LAM, 1e-2)
        Wb, _, _ = kn.bcrls_run(X, y, LAM, 1e-2, eta)
        dev_rls += Wr[-1] - model.h
        dev_bc += Wb[-1] - model.h
    dev_rls /= runs
    dev_bc /= runs
    assert np.linalg.norm(dev_bc) < 0.5 * np.linalg.norm(dev_rls)


def test_bcrls_step_rejects_lam_one_with_input_noise():
    st = fl.bcrls_init(4, 1.0, 1e-2)
    with pytest.raises(ConfigError):
        fl.bcrls_step(st, np.ones(4), 1.0, eta=0.1)


def test_batch_tls_recovers_h_from_exact_moments(model_ref):
    # exact asymptotic moments: Psi has (h, -gamma^(1/2)) as null vector
    m = model_ref
    gamma = m.gamma()
    L = m.L
    phi = m.R + m.eta * np.eye(L)
    z = m.R @ m.h
    tau = float(m.h @ m.R @ m.h) + m.xi
    psi = np.empty((L + 1, L + 1))
    psi[:L, :L] = phi
    psi[:L, L] = psi[L, :L] = z / np.sqrt(gamma)
    psi[L, L] = tau / gamma
    w = fl.batch_tls(AugmentedStats(psi=psi, gamma=gamma))
    assert np.abs(w - m.h).max() <= 1e-8


def test_batch_tls_from_long_stream(model_ref):
    _, X, y = _stream(T=60_000, eta=0.01, xi=0.01)
    s = sm.init(8, 1.0, 1e-6)
    for t in range(X.shape[0]):
        sm.update_generic(s, X[t], y[t])
    w = fl.batch_tls(assemble_psi(s, gamma=1.0))
    assert np.linalg.norm(w - reference_system()) < 0.05


def test_batch_tls_rejects_nongeneric_problem():
    # Psi whose minor eigenvector has a zero last entry
    psi = np.diag([0.1, 1.0, 2.0])
    with pytest.raises(NonGenericTlsError):
        fl.batch_tls(AugmentedStats(psi=psi, gamma=1.0))


def test_inverse_power_converges_to_minor_component():
    psi = np.diag([2.0, 1.5, 0.3])
    q = np.ones(3) / np.sqrt(3.0)
    for _ in range(60):
        q = fl.inverse_power_reference(AugmentedStats(psi=psi, gamma=1.0), q)
    assert abs(abs(q[2]) - 1.0) < 1e-10
