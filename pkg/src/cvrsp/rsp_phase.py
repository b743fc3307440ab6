"""Phase-measurement RSP with a two-mode squeezed vacuum resource.

Alice applies the number-dependent phase ``exp(i phi(N))``, then measures
the ``n_meas`` truncated phase states; anything outside their span is the
discard outcome.  On outcome ``theta_j = 2 pi j / n_meas`` Bob applies
``exp(i theta_j N)`` and holds the normalized truncation of
``sum_n tanh(r)^n / cosh(r) exp(i phi_n) |n>``.

The resource is stored below a Fock ``cutoff``.  The discard POVM element
``1 - sum_j |theta_j><theta_j|`` also covers the photon numbers beyond the
cutoff, so the discard probability includes the squeezed-vacuum weight
``tanh(r)^(2 cutoff)`` that the stored state leaves out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bipartite import make_two_mode_squeezed
from .qmath import fidelity
from .transcript import (
    DISCARD,
    ClassicalMessage,
    ProtocolTranscript,
    is_discard,
    select_outcome,
)


def default_cutoff(r: float, n_meas: int) -> int:
    """``n_meas + ceil(30 max(r, 0.1))``; leaves squeezed weight below 1e-12 for r <= ~1."""
    return n_meas + math.ceil(30 * max(r, 0.1))


def kerr_phases(size: int, chi: float = 0.0, theta: float = 0.0) -> np.ndarray:
    """``phi_n = chi n**2 + theta n`` for ``n < size``."""
    n = np.arange(size, dtype=float)
    return chi * n ** 2 + theta * n


@dataclass(frozen=True, eq=False)
class PhaseProtocolConfig:
    """Squeezing ``r``, phase-measurement size ``n_meas`` and Alice's ``phi_n``.

    ``phi_n`` needs at least ``n_meas`` entries and is zero-padded to the
    cutoff.  Entries with ``n >= n_meas`` never influence any outcome.
    """

    r: float
    n_meas: int
    phi_n: np.ndarray
    cutoff: int | None = None

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing parameter must be nonnegative")
        if self.n_meas < 1:
            raise ValueError("n_meas must be positive")
        cutoff = default_cutoff(self.r, self.n_meas) if self.cutoff is None else int(self.cutoff)
        if cutoff < self.n_meas:
            raise ValueError(f"cutoff {cutoff} below n_meas {self.n_meas}")
        phi = np.asarray(self.phi_n, dtype=float).reshape(-1)
        if phi.size < self.n_meas:
            raise ValueError(f"need {self.n_meas} phases, got {phi.size}")
        if phi.size > cutoff:
            phi = phi[:cutoff]
        if not np.all(np.isfinite(phi)):
            raise ValueError("phases must be finite")
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "phi_n", np.pad(phi, (0, cutoff - phi.size)))

    @classmethod
    def kerr(cls, r, n_meas, chi=0.0, theta=0.0, cutoff=None) -> "PhaseProtocolConfig":
        size = default_cutoff(r, n_meas) if cutoff is None else cutoff
        return cls(r, n_meas, kerr_phases(size, chi, theta), cutoff)


def phase_shift_unitary(theta: float, cutoff: int) -> np.ndarray:
    """``exp(i theta N)`` on the first ``cutoff`` Fock states."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    return np.diag(np.exp(1j * theta * np.arange(cutoff)))


def kerr_premeasurement(config: PhaseProtocolConfig) -> np.ndarray:
    return np.diag(np.exp(1j * config.phi_n))


def pegg_barnett_states(n_meas: int, cutoff: int):
    """Truncated phase states (rows, padded to ``cutoff``) and the discard projector."""
    if n_meas < 1:
        raise ValueError("n_meas must be positive")
    if cutoff < n_meas:
        raise ValueError(f"cutoff {cutoff} below n_meas {n_meas}")
    jn = np.outer(np.arange(n_meas), np.arange(n_meas)) % n_meas
    states = np.zeros((n_meas, cutoff), dtype=complex)
    states[:, :n_meas] = np.exp(2j * np.pi * jn / n_meas) / np.sqrt(n_meas)
    discard = np.diag((np.arange(cutoff) >= n_meas).astype(complex))
    return states, discard


def success_probability(r: float, n_meas: int) -> float:
    """Closed form ``1 - tanh(r)**(2 n_meas)``."""
    if r < 0 or n_meas < 1:
        raise ValueError("need r >= 0 and n_meas >= 1")
    return -math.expm1(2 * n_meas * math.log(math.tanh(r))) if r > 0 else 1.0


def phase_target_state(config: PhaseProtocolConfig) -> np.ndarray:
    n = np.arange(config.cutoff)
    amps = np.tanh(config.r) ** n / np.cosh(config.r) * np.exp(1j * config.phi_n)
    amps[config.n_meas:] = 0
    return amps / math.sqrt(success_probability(config.r, config.n_meas))


def bob_correction(cutoff: int, message: ClassicalMessage) -> np.ndarray:
    return phase_shift_unitary(message.value, cutoff)


def _branches(config: PhaseProtocolConfig):
    """Bob's unnormalized states per phase outcome and all outcome probabilities."""
    resource = make_two_mode_squeezed(config.r, config.cutoff)
    states, _ = pegg_barnett_states(config.n_meas, config.cutoff)
    alice = states * np.exp(-1j * config.phi_n)  # rows V^dag |theta_j>
    unnorm = resource.schmidt_coeffs * alice.conj()
    probs = np.sum(np.abs(unnorm) ** 2, axis=1)
    discard = max(1.0 - float(np.sum(probs)), 0.0)
    return unnorm, np.append(probs, discard), resource.info["neglected_weight"]


def outcome_probabilities(config: PhaseProtocolConfig) -> np.ndarray:
    """Probabilities of ``theta_0 .. theta_{N-1}`` followed by the discard outcome."""
    return _branches(config)[1]


def run_phase_protocol(config: PhaseProtocolConfig, outcome):
    """One run; ``outcome`` is ``0..n_meas-1``, ``DISCARD`` or an RNG."""
    unnorm, probs, neglected = _branches(config)
    idx = select_outcome(probs, config.n_meas if is_discard(outcome) else outcome)

    n_meas = config.n_meas
    target = phase_target_state(config)
    common = dict(
        protocol="phase",
        resource={"kind": "two_mode_squeezed", "r": config.r, "cutoff": config.cutoff,
                  "neglected_weight": neglected},
        pre_measurement={"kind": "number_phase", "phi_n": config.phi_n[:n_meas].tolist()},
        target=target,
        extras={"n_meas": n_meas, "neglected_weight": neglected},
    )
    if idx == n_meas:
        return ProtocolTranscript(
            outcome=DISCARD, probability=float(probs[-1]), message=None,
            correction={"kind": "none"}, bob_state=None, output=None,
            fidelity=None, discarded=True, **common,
        )
    p = float(probs[idx])
    bob_state = unnorm[idx] / math.sqrt(p)
    message = ClassicalMessage("real", 2 * math.pi * idx / n_meas)
    output = bob_correction(config.cutoff, message) @ bob_state
    return ProtocolTranscript(
        outcome=idx, probability=p, message=message,
        correction={"kind": "phase_shift", "theta": message.value},
        bob_state=bob_state, output=output, fidelity=fidelity(output, target),
        **common,
    )
