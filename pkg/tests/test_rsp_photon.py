import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from cvrsp import rsp_photon
from cvrsp.bipartite import ZeroProbabilityError
from cvrsp.rsp_photon import FourierPhaseProfile
from cvrsp.transcript import DISCARD

from oracles import brute_force_branch, dft_column, fft_fourier_coeffs, fid


def test_down_shift_examples():
    assert np.allclose(rsp_photon.down_shift(0, 5), np.eye(5))
    d1 = rsp_photon.down_shift(1, 5)
    assert np.allclose(d1 @ np.eye(5)[0], 0)
    assert np.allclose(d1 @ np.eye(5)[3], np.eye(5)[2])


def test_down_shift_algebra():
    dim = 10
    for a in range(6):
        retained = np.diag((np.arange(dim) < dim - a).astype(float))
        assert np.allclose(rsp_photon.down_shift(a, dim) @ rsp_photon.up_shift(a, dim), retained)
        for b in range(6):
            lhs = rsp_photon.down_shift(a, dim) @ rsp_photon.down_shift(b, dim)
            assert np.max(np.abs(lhs - rsp_photon.down_shift(a + b, dim))) < 1e-15


def test_remote_fock_prep_examples():
    for n in range(6):
        t = rsp_photon.remote_fock_prep(0, 6, n)
        assert fid(t.output, np.eye(6)[0]) == 1
    t = rsp_photon.remote_fock_prep(2, 8, 3)
    _, bob, out = brute_force_branch(np.eye(8) / np.sqrt(8), rsp_photon.down_shift(2, 8), np.eye(8)[3],
                                     rsp_photon.down_shift(3, 8))
    assert np.allclose(t.bob_state, np.eye(8)[5]) and np.allclose(bob, np.eye(8)[5])
    assert np.allclose(t.output, np.eye(8)[2]) and np.allclose(out, np.eye(8)[2])
    with pytest.raises(ValueError):
        rsp_photon.remote_fock_prep(8, 8, 0)


def test_remote_fock_prep_distribution():
    m, d = 3, 10
    probs = [rsp_photon.remote_fock_prep(m, d, n).probability for n in range(d - m)]
    assert np.allclose(probs, 1 / d)
    # oracle: Born weights of all photon counts after Alice's down-shift
    oracle = [brute_force_branch(np.eye(d) / np.sqrt(d), rsp_photon.down_shift(m, d), np.eye(d)[n], np.eye(d))[0]
              for n in range(d - m)]
    assert np.allclose(probs, oracle)
    t = rsp_photon.remote_fock_prep(m, d, DISCARD)
    assert t.discarded and t.probability == pytest.approx(m / d)


def test_ladder_unitaries():
    assert np.allclose(rsp_photon.ladder_unitaries(2)[1], [[0, 1], [1, 0]])
    n = 8
    u = rsp_photon.ladder_unitaries(n)
    for a in range(n):
        for b in range(n):
            assert np.max(np.abs(u[a] @ u[b] - u[(a + b) % n])) < 1e-13
    states = rsp_photon.phase_states(n)
    for m in range(n):
        for j in range(n):
            assert np.max(np.abs(u[m] @ states[j] - np.exp(2j * np.pi * j * m / n) * states[j])) < 1e-12


def test_finite_premeasurement_examples():
    v, f = rsp_photon.finite_fourier_premeasurement(np.zeros(4))
    assert np.allclose(v, np.eye(4)) and np.allclose(f, [1, 0, 0, 0])
    n = 6
    _, f = rsp_photon.finite_fourier_premeasurement(2 * np.pi * np.arange(n) / n)
    assert np.allclose(f, np.eye(n)[1], atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 16), st.integers(0, 2 ** 32 - 1))
def test_parseval_and_reconstruction(n, seed):
    phases = np.random.default_rng(seed).uniform(0, 2 * np.pi, n)
    v, f = rsp_photon.finite_fourier_premeasurement(phases)
    direct = np.array([sum(np.exp(-2j * np.pi * j * m / n + 1j * phases[j]) for j in range(n)) / n
                       for m in range(n)])
    assert np.max(np.abs(f - direct)) < 1e-12
    assert abs(np.sum(np.abs(f) ** 2) - 1) < 1e-12
    u = rsp_photon.ladder_unitaries(n)
    assert np.max(np.abs(v - sum(c * um for c, um in zip(f, u)))) < 1e-12
    assert np.max(np.abs(v @ v.conj().T - np.eye(n))) < 1e-12


def test_run_finite_examples():
    for m in range(2):
        t = rsp_photon.run_photon_finite(2, [0, 0], m)
        assert t.probability == pytest.approx(0.5)
        assert fid(t.output, [1, 0]) == pytest.approx(1)
    with pytest.raises(ValueError):
        rsp_photon.run_photon_finite(3, [0, 0], 0)


def test_run_finite_matches_joint_state_oracle():
    n = 6
    phases = np.random.default_rng(3).uniform(0, 2 * np.pi, n)
    v, f = rsp_photon.finite_fourier_premeasurement(phases)
    # target written as (1/sqrt n) sum_j exp(i phi_j) |-theta_j> in the number basis
    left_form = sum(np.exp(1j * phases[j]) * dft_column(j, n).conj() for j in range(n)) / np.sqrt(n)
    assert np.allclose(left_form, f, atol=1e-14)
    u = rsp_photon.ladder_unitaries(n)
    for m in range(n):
        p, _, out = brute_force_branch(np.eye(n) / np.sqrt(n), v, np.eye(n)[m], u[m])
        t = rsp_photon.run_photon_finite(n, phases, m)
        assert t.probability == pytest.approx(p, abs=1e-14)
        assert abs(t.probability - 1 / n) < 1e-12
        assert fid(out, f) > 1 - 1e-10 and t.fidelity > 1 - 1e-10
        assert t.message.kind == "integer" and t.message.value == m


def test_continuous_coeffs_examples():
    f, defect = rsp_photon.continuous_fourier_coeffs(lambda t: 0.0, range(-3, 4))
    assert np.allclose(f, np.eye(7)[3], atol=1e-11) and abs(defect) < 1e-10
    f, _ = rsp_photon.continuous_fourier_coeffs(lambda t: t, range(-3, 4))
    assert np.allclose(f, np.eye(7)[4], atol=1e-11)


def test_continuous_coeffs_against_bessel_and_fft():
    indices = range(-8, 9)
    phase = rsp_photon.trig_phase(sin=[0.5])
    f, defect = rsp_photon.continuous_fourier_coeffs(phase, indices)
    # exp(i z sin t) = sum_n J_n(z) exp(i n t)
    assert np.max(np.abs(f - special.jv(list(indices), 0.5))) < 1e-11
    assert np.max(np.abs(f - fft_fourier_coeffs(phase, indices))) < 1e-11
    assert abs(defect) < 1e-10


def test_continuous_coeffs_general_profile_against_fft():
    phase = rsp_photon.trig_phase(0.3, cos=[0.4, -0.2], sin=[0.1, 0.0, 0.25])
    indices = range(-12, 13)
    f, _ = rsp_photon.continuous_fourier_coeffs(phase, indices)
    assert np.max(np.abs(f - fft_fourier_coeffs(phase, indices))) < 1e-11


def test_continuous_coeffs_rejects_non_finite():
    with pytest.raises(ValueError):
        rsp_photon.continuous_fourier_coeffs(lambda t: 1 / (t - np.pi) if t != np.pi else np.inf, range(2))
    with pytest.raises(ValueError):
        rsp_photon.continuous_fourier_coeffs(lambda t: np.nan, range(2))


def test_profile_validation_and_truncation():
    with pytest.raises(ValueError):
        FourierPhaseProfile.from_coefficients({0: 0.5})
    prof = FourierPhaseProfile.from_coefficients({-3: 0.6, 0: 0.8})
    assert prof.negative_weight == pytest.approx(0.36)
    kept, defect = prof.truncated(2)
    assert kept == {0: pytest.approx(1.0)} and defect == pytest.approx(0.36)
    with pytest.raises(ZeroProbabilityError):
        FourierPhaseProfile.from_coefficients({5: 1.0}).truncated(3)


def oracle_cutoff_branch(coeffs, dim, n):
    v = np.zeros((dim, dim), dtype=complex)
    for k, c in coeffs.items():
        for row in range(dim):
            if 0 <= row + k < dim:
                v[row, row + k] += c
    return brute_force_branch(np.eye(dim) / np.sqrt(dim), v, np.eye(dim)[n], rsp_photon.down_shift(n, dim))


def test_cutoff_trivial_profile():
    prof = FourierPhaseProfile.from_coefficients({0: 1.0})
    for n in rsp_photon.cutoff_window(1, 8):
        t = rsp_photon.run_photon_cutoff(prof, 1, 8, n)
        assert fid(t.output, np.eye(8)[0]) == pytest.approx(1)
        assert t.probability == pytest.approx(1 / 8)


def test_cutoff_three_term_profile_matches_oracle():
    c = np.array([0.6, 0.48j, -0.64])
    prof = FourierPhaseProfile.from_coefficients(dict(enumerate(c)))
    dim = 16
    target = np.zeros(dim, dtype=complex)
    target[:3] = c
    for n in rsp_photon.cutoff_window(3, dim):
        t = rsp_photon.run_photon_cutoff(prof, 3, dim, n)
        p, _, out = oracle_cutoff_branch(dict(enumerate(c)), dim, n)
        assert t.probability == pytest.approx(p, abs=1e-14) == 1 / dim
        assert fid(out, target) > 1 - 1e-9 and t.fidelity > 1 - 1e-9
        assert t.dropped_weight == pytest.approx(0, abs=1e-14)


def test_cutoff_negative_support_reports_dropped_weight():
    coeffs = {-2: np.sqrt(0.1), -1: 1j * np.sqrt(0.15), 0: np.sqrt(0.5), 2: -np.sqrt(0.25)}
    prof = FourierPhaseProfile.from_coefficients(coeffs)
    dim = 20
    for n in rsp_photon.cutoff_window(3, dim):
        t = rsp_photon.run_photon_cutoff(prof, 3, dim, n)
        _, _, out = oracle_cutoff_branch(coeffs, dim, n)
        assert t.dropped_weight == pytest.approx(0.25, abs=1e-9)
        assert np.linalg.norm(out) ** 2 == pytest.approx(0.75, abs=1e-12)
        assert t.fidelity > 1 - 1e-9


def test_cutoff_distribution_is_profile_independent():
    a = rsp_photon.outcome_probabilities_cutoff(3, 16)
    assert abs(np.sum(a) - 1) < 1e-15
    assert a[-1] == pytest.approx(4 / 16)
    rng = np.random.default_rng(4)
    for _ in range(5):
        c = rng.normal(size=5) + 1j * rng.normal(size=5)
        prof = FourierPhaseProfile.from_coefficients(dict(zip(range(-2, 3), c / np.linalg.norm(c))))
        probs = [rsp_photon.run_photon_cutoff(prof, 3, 16, n).probability for n in rsp_photon.cutoff_window(3, 16)]
        assert np.max(np.abs(np.array(probs) - a[:-1])) < 1e-15


def test_cutoff_outcome_validation():
    prof = FourierPhaseProfile.from_coefficients({0: 1.0})
    with pytest.raises(ValueError):
        rsp_photon.run_photon_cutoff(prof, 3, 16, 0)
    with pytest.raises(ValueError):
        rsp_photon.cutoff_window(5, 8)
    t = rsp_photon.run_photon_cutoff(prof, 3, 16, DISCARD)
    assert t.discarded and t.output is None


def test_cutoff_from_phase_function_converges():
    phase = rsp_photon.trig_phase(sin=[0.5])
    prof = FourierPhaseProfile.from_phase_function(phase, range(-9, 10))
    fids = []
    for cutoff in (2, 4, 8):
        window = rsp_photon.cutoff_window(cutoff, 24)
        fids.append(min(rsp_photon.run_photon_cutoff(prof, cutoff, 24, n).fidelity for n in window))
    assert fids[-1] > 1 - 1e-9
    ideal = special.jv(np.arange(24), 0.5)
    t = rsp_photon.run_photon_cutoff(prof, 8, 24, 10)
    assert fid(t.output, ideal) > 1 - 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.sampled_from([16, 20, 32]), st.integers(0, 2 ** 32 - 1))
def test_cutoff_nonnegative_support_is_exact(support, dim, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=support) + 1j * rng.normal(size=support)
    prof = FourierPhaseProfile.from_coefficients(dict(enumerate(c / np.linalg.norm(c))))
    for n in rsp_photon.cutoff_window(4, dim):
        t = rsp_photon.run_photon_cutoff(prof, 4, dim, n)
        assert t.fidelity > 1 - 1e-9
