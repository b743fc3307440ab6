"""Exact minimum RSP of N-level systems with Z_N phase corrections.

Alice and Bob share ``sum_k alpha_k |k>|k>``.  Alice applies
``V = diag(exp(i phi_k))``, measures in the Fourier basis and sends the
index ``j``; Bob applies ``U_j = diag(exp(2 pi i j k / N))``.  Bob ends in
``sum_k alpha_k exp(i phi_k) |k>`` whatever ``j`` was, and every ``j``
occurs with probability ``1/N``.
"""

from __future__ import annotations

import numpy as np

from .qmath import dft_unitary, fidelity
from .transcript import ClassicalMessage, ProtocolTranscript, select_outcome


def _phases(phases) -> np.ndarray:
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size == 0:
        raise ValueError("need at least one phase")
    if not np.all(np.isfinite(phases)):
        raise ValueError("phases must be finite")
    return phases


def _alphas(alphas, n: int) -> np.ndarray:
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    if alphas.size != n:
        raise ValueError(f"{alphas.size} Schmidt coefficients for {n} phases")
    if np.any(alphas < 0) or abs(np.sum(alphas ** 2) - 1) > 1e-10:
        raise ValueError("Schmidt coefficients must be nonnegative with unit 2-norm")
    return alphas


def zn_unitaries(n: int) -> list[np.ndarray]:
    """Bob's correction group ``U_j = diag(exp(2 pi i j k / n))``, ``j < n``."""
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(n)
    return [np.diag(np.exp(2j * np.pi * ((j * k) % n) / n)) for j in range(n)]


def alice_input_state(phases) -> np.ndarray:
    phases = _phases(phases)
    return np.exp(-1j * phases) / np.sqrt(phases.size)


def target_state(alphas, phases) -> np.ndarray:
    phases = _phases(phases)
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    if alphas.size != phases.size:
        raise ValueError(f"{alphas.size} Schmidt coefficients for {phases.size} phases")
    return alphas * np.exp(1j * phases)


def pre_measurement(phases) -> np.ndarray:
    return np.diag(np.exp(1j * _phases(phases)))


def measurement_basis(phases) -> np.ndarray:
    """Alice's effective basis; row ``j`` is ``V^dag`` times Fourier vector ``j``."""
    phases = _phases(phases)
    return dft_unitary(phases.size) * np.exp(-1j * phases)


def outcome_probabilities(alphas, phases) -> np.ndarray:
    phases = _phases(phases)
    alphas = _alphas(alphas, phases.size)
    basis = measurement_basis(phases)
    return np.abs(basis) ** 2 @ alphas ** 2


def bob_correction(n: int, message: ClassicalMessage) -> np.ndarray:
    """Bob's unitary from public data only: the dimension and Alice's index."""
    j = int(message.value)
    k = np.arange(n)
    return np.diag(np.exp(2j * np.pi * ((j * k) % n) / n))


def run_finite_protocol(alphas, phases, outcome, *, apply_correction: bool = True):
    """One run of the Z_N protocol.

    ``outcome`` is a forced index ``j`` or an RNG with a ``random()`` method.
    Bob's conditional state is computed in Schmidt form,
    ``alpha_k conj(phi_j[k]) / sqrt(p_j)``.
    """
    phases = _phases(phases)
    n = phases.size
    alphas = _alphas(alphas, n)
    basis = measurement_basis(phases)
    probs = np.abs(basis) ** 2 @ alphas ** 2
    j = select_outcome(probs, outcome)

    unnorm = alphas * basis[j].conj()
    p = float(np.vdot(unnorm, unnorm).real)
    bob_state = unnorm / np.sqrt(p)
    message = ClassicalMessage("integer", j)
    if apply_correction:
        output = bob_correction(n, message) @ bob_state
    else:
        output = bob_state
    target = target_state(alphas, phases)
    return ProtocolTranscript(
        protocol="finite",
        resource={"kind": "schmidt", "alphas": alphas.tolist()},
        pre_measurement={"kind": "diag_phase", "phases": phases.tolist()},
        outcome=j,
        probability=p,
        message=message,
        correction={"kind": "zn_phase", "j": j, "applied": apply_correction},
        bob_state=bob_state,
        output=output,
        target=target,
        fidelity=fidelity(output, target),
    )


def random_alphas(n: int, rng) -> np.ndarray:
    """Random valid Schmidt coefficients (used by tests and verification)."""
    a = np.abs(rng.normal(size=n)) + 1e-3
    return a / np.linalg.norm(a)


def random_phases(n: int, rng) -> np.ndarray:
    return rng.uniform(0, 2 * np.pi, size=n)

