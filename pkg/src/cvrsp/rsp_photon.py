"""Photon-counting RSP with photon-number shift corrections.

Three variants share the maximally entangled number-basis resource:

* ``remote_fock_prep``: Alice down-shifts by ``m``, counts ``n`` photons and
  Bob down-shifts by ``n``; he always ends in ``|m>``.
* ``run_photon_finite``: the exact N-level protocol.  Alice applies
  ``V = sum_j exp(i phi_j) |theta_j><theta_j| = sum_m f_m U_m`` with cyclic
  ladder unitaries ``U_m``, counts photons, Bob applies ``U_n`` and holds
  ``sum_m f_m |m>``.
* ``run_photon_cutoff``: the infinite-dimensional version, where
  ``V = f_0 + sum_{n>0} (f_n D_n + f_{-n} D_n^dag)`` is built from the
  non-unitary down-shift ``D_n`` and Bob corrects with ``D_n`` as well.

The unnormalizable EPR resource of the cutoff version is regularized to
``D^-1/2 sum_{k<D} |k>|k>``.  Coefficients are kept for ``|n| < cutoff``,
so an outcome ``n`` reproduces the ideal conditional state only inside the
window ``cutoff-1 <= n <= D-cutoff``.  Each such outcome has Born weight
exactly ``1/D`` whatever the profile; all remaining weight (the window
edges, plus the failure branch of the non-unitary ``V``) is reported as one
discard outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .bipartite import ZeroProbabilityError
from .qmath import basis_state, fidelity
from .transcript import (
    DISCARD,
    ClassicalMessage,
    ProtocolTranscript,
    is_discard,
    select_outcome,
)


def down_shift(m: int, cutoff: int) -> np.ndarray:
    """``sum_n |n><n+m|`` restricted to ``n + m < cutoff``."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    if m < 0:
        raise ValueError("shift must be nonnegative")
    return np.eye(cutoff, k=m, dtype=complex)


def up_shift(m: int, cutoff: int) -> np.ndarray:
    return down_shift(m, cutoff).T.copy()


def ladder_unitaries(n: int) -> list[np.ndarray]:
    """Cyclic shifts ``U_m |k> = |k - m mod n>``, ``m < n``."""
    if n < 1:
        raise ValueError("n must be positive")
    eye = np.eye(n, dtype=complex)
    return [np.roll(eye, -m, axis=0) for m in range(n)]


def phase_states(n: int) -> np.ndarray:
    """Truncated phase states ``|theta_j>`` as rows."""
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(2j * np.pi * jk / n) / np.sqrt(n)


def remote_fock_prep(m: int, d: int, outcome):
    """Prepare ``|m>`` at Bob's side from a ``d``-dimensional EPR stand-in.

    Outcomes ``n < d - m`` each carry weight ``1/d``; the ``m/d`` removed by
    Alice's down-shift is the discard outcome.
    """
    if not 0 <= m < d:
        raise ValueError(f"target photon number {m} not below resource dimension {d}")
    survivors = d - m
    probs = np.append(np.full(survivors, 1 / d), m / d)
    idx = select_outcome(probs, survivors if is_discard(outcome) else outcome)
    target = basis_state(m, d)
    common = dict(
        protocol="photon_fock",
        resource={"kind": "regularized_epr", "dim": d},
        pre_measurement={"kind": "down_shift", "m": m},
        target=target,
    )
    if idx == survivors:
        return ProtocolTranscript(
            outcome=DISCARD, probability=m / d, message=None, correction={"kind": "none"},
            bob_state=None, output=None, fidelity=None, discarded=True, **common,
        )
    bob_state = basis_state(idx + m, d)
    message = ClassicalMessage("integer", idx)
    output = down_shift(idx, d) @ bob_state
    return ProtocolTranscript(
        outcome=idx, probability=1 / d, message=message,
        correction={"kind": "down_shift", "n": idx}, bob_state=bob_state,
        output=output, fidelity=fidelity(output, target), **common,
    )


def finite_fourier_premeasurement(phases):
    """``V = sum_j exp(i phi_j) |theta_j><theta_j|`` and its ladder expansion ``f``.

    ``f_m = n^-1 sum_j exp(-2 pi i j m / n) exp(i phi_j)`` so that
    ``V = sum_m f_m U_m``.
    """
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size == 0:
        raise ValueError("need at least one phase")
    states = phase_states(phases.size)
    v = states.T @ (np.exp(1j * phases)[:, None] * states.conj())
    coeffs = np.fft.fft(np.exp(1j * phases)) / phases.size
    return v, coeffs


def run_photon_finite(n: int, phases, outcome):
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size != n:
        raise ValueError(f"{phases.size} phases for dimension {n}")
    v, coeffs = finite_fourier_premeasurement(phases)
    # Alice's kets V^dag|m> are rows of conj(V); with R x = conj(x)/sqrt(n)
    # Bob's unnormalized states are the rows of V / sqrt(n)
    unnorm = v / math.sqrt(n)
    probs = np.sum(np.abs(unnorm) ** 2, axis=1)
    m = select_outcome(probs, outcome)
    p = float(probs[m])
    bob_state = unnorm[m] / math.sqrt(p)
    message = ClassicalMessage("integer", m)
    output = bob_correction_finite(n, message) @ bob_state
    return ProtocolTranscript(
        protocol="photon_finite",
        resource={"kind": "truncated_phase", "dim": n},
        pre_measurement={"kind": "phase_function", "phases": phases.tolist()},
        outcome=m,
        probability=p,
        message=message,
        correction={"kind": "ladder", "n": m},
        bob_state=bob_state,
        output=output,
        target=coeffs,
        fidelity=fidelity(output, coeffs),
        extras={"fourier_coeffs": coeffs},
    )


def bob_correction_finite(n: int, message: ClassicalMessage) -> np.ndarray:
    return np.roll(np.eye(n, dtype=complex), -int(message.value), axis=0)


def bob_correction_cutoff(resource_dim: int, message: ClassicalMessage) -> np.ndarray:
    return down_shift(int(message.value), resource_dim)


def continuous_fourier_coeffs(phase_fn: Callable[[float], float], n_range, tol=1e-11):
    """``f_n = (2 pi)^-1 int_0^{2 pi} exp(-i n t) exp(i phase_fn(t)) dt``.

    Adaptive Gauss-Kronrod quadrature per index.  Returns the coefficients
    (aligned with ``n_range``) and the Parseval defect ``1 - sum |f_n|^2``.
    """
    indices = list(n_range)
    probe = np.array([phase_fn(t) for t in np.linspace(0, 2 * np.pi, 64)], dtype=float)
    if not np.all(np.isfinite(probe)):
        raise ValueError("phase function returned non-finite values")

    def integrand(t, n):
        val = phase_fn(t)
        if not math.isfinite(val):
            raise ValueError(f"phase function is not finite at {t}")
        return np.exp(1j * (val - n * t))

    coeffs = np.empty(len(indices), dtype=complex)
    for i, n in enumerate(indices):
        val, _ = integrate.quad(
            integrand, 0, 2 * np.pi, args=(n,), complex_func=True,
            epsabs=tol, epsrel=0, limit=400,
        )
        coeffs[i] = val / (2 * np.pi)
    defect = 1.0 - float(np.sum(np.abs(coeffs) ** 2))
    return coeffs, defect


def trig_phase(const: float = 0.0, cos=(), sin=()) -> Callable[[float], float]:
    """``const + sum_k cos[k-1] cos(k t) + sin[k-1] sin(k t)`` as a callable."""
    cos = tuple(float(c) for c in cos)
    sin = tuple(float(s) for s in sin)

    def phase(t: float) -> float:
        val = const
        for k, c in enumerate(cos, start=1):
            val += c * math.cos(k * t)
        for k, s in enumerate(sin, start=1):
            val += s * math.sin(k * t)
        return val

    return phase


@dataclass(frozen=True, eq=False)
class FourierPhaseProfile:
    """Alice's RSP parameters as ladder coefficients ``{n: f_n}`` (``n`` may be negative)."""

    coeffs: dict[int, complex]
    parseval_defect: float = 0.0
    source: str = "coefficients"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        coeffs = {int(n): complex(c) for n, c in self.coeffs.items()}
        if not coeffs:
            raise ValueError("profile has no coefficients")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs.values()):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs, tol: float = 1e-10) -> "FourierPhaseProfile":
        coeffs = dict(coeffs)
        total = sum(abs(complex(c)) ** 2 for c in coeffs.values())
        if abs(total - 1.0) > tol:
            raise ValueError(f"sum |f_n|^2 = {total!r}, expected 1")
        return cls(coeffs, 1.0 - total)

    @classmethod
    def from_phase_function(cls, phase_fn, n_range) -> "FourierPhaseProfile":
        indices = list(n_range)
        values, defect = continuous_fourier_coeffs(phase_fn, indices)
        return cls(dict(zip(indices, values)), defect, "phase_function")

    @property
    def negative_weight(self) -> float:
        return float(sum(abs(c) ** 2 for n, c in self.coeffs.items() if n < 0))

    def truncated(self, cutoff: int):
        """Coefficients with ``|n| < cutoff``, renormalized, and the dropped weight."""
        kept = {n: c for n, c in self.coeffs.items() if abs(n) < cutoff}
        weight = sum(abs(c) ** 2 for c in kept.values())
        if weight == 0:
            raise ZeroProbabilityError("no coefficient weight inside the cutoff")
        scale = 1 / math.sqrt(weight)
        return {n: c * scale for n, c in kept.items()}, 1.0 - weight


def cutoff_window(cutoff: int, resource_dim: int) -> range:
    """Photon counts whose conditional state is not clipped by the regularization."""
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    window = range(cutoff - 1, resource_dim - cutoff + 1)
    if len(window) == 0:
        raise ValueError(f"resource_dim {resource_dim} too small for cutoff {cutoff}")
    return window


def cutoff_premeasurement(coeffs: dict[int, complex], dim: int) -> np.ndarray:
    """``f_0 + sum_{n>0} (f_n D_n + f_{-n} D_n^dag)`` on a ``dim``-level mode."""
    v = np.zeros((dim, dim), dtype=complex)
    for n, c in coeffs.items():
        if abs(n) < dim:
            v += c * (down_shift(n, dim) if n >= 0 else up_shift(-n, dim))
    return v


def cutoff_target(coeffs: dict[int, complex], dim: int) -> np.ndarray:
    amps = np.zeros(dim, dtype=complex)
    for n, c in coeffs.items():
        if 0 <= n < dim:
            amps[n] = c
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise ZeroProbabilityError("profile has no weight on nonnegative photon numbers")
    return amps / nrm


def run_photon_cutoff(profile: FourierPhaseProfile, cutoff: int, resource_dim: int, outcome):
    """One run of the down-shift protocol on a regularized EPR resource.

    ``outcome`` is a photon count inside :func:`cutoff_window`, ``DISCARD``
    or an RNG.  The output is renormalized; ``dropped_weight`` is the
    weight removed by Bob's down-shift (the ``n < 0`` coefficients).
    """
    window = cutoff_window(cutoff, resource_dim)
    coeffs, trunc_defect = profile.truncated(cutoff)
    d = resource_dim
    discard_p = 1.0 - len(window) / d
    probs = np.append(np.full(len(window), 1 / d), discard_p)
    if is_discard(outcome):
        idx = len(window)
    elif hasattr(outcome, "random"):
        idx = select_outcome(probs, outcome)
    else:
        if int(outcome) not in window:
            raise ValueError(f"photon count {outcome} outside window {window.start}..{window.stop - 1}")
        idx = window.index(int(outcome))

    target = cutoff_target(coeffs, d)
    common = dict(
        protocol="photon_cutoff",
        resource={"kind": "regularized_epr", "dim": d},
        pre_measurement={"kind": "ladder_series", "cutoff": cutoff,
                         "coeffs": {n: [c.real, c.imag] for n, c in sorted(coeffs.items())}},
        target=target,
    )
    extras = {
        "coefficient_truncation_defect": trunc_defect,
        "parseval_defect": profile.parseval_defect,
        "negative_weight": float(sum(abs(c) ** 2 for n, c in coeffs.items() if n < 0)),
    }
    if idx == len(window):
        return ProtocolTranscript(
            outcome=DISCARD, probability=discard_p, message=None, correction={"kind": "none"},
            bob_state=None, output=None, fidelity=None, discarded=True, extras=extras, **common,
        )

    n = window[idx]
    v = cutoff_premeasurement(coeffs, d)
    # <n|_A (V (x) 1) D^-1/2 sum_k |k>|k> = D^-1/2 sum_k V[n, k] |k>
    unnorm = v[n] / math.sqrt(d)
    p = float(np.vdot(unnorm, unnorm).real)
    bob_state = unnorm / math.sqrt(p)
    message = ClassicalMessage("integer", n)
    shifted = bob_correction_cutoff(d, message) @ bob_state
    kept = float(np.vdot(shifted, shifted).real)
    if kept < 1e-14:
        raise ZeroProbabilityError("down-shift removed the whole conditional state")
    output = shifted / math.sqrt(kept)
    extras["output_norm_sq"] = kept
    return ProtocolTranscript(
        outcome=n, probability=p, message=message, correction={"kind": "down_shift", "n": n},
        bob_state=bob_state, output=output, fidelity=fidelity(output, target),
        dropped_weight=1.0 - kept, extras=extras, **common,
    )


def outcome_probabilities_cutoff(cutoff: int, resource_dim: int) -> np.ndarray:
    window = cutoff_window(cutoff, resource_dim)
    return np.append(np.full(len(window), 1 / resource_dim), 1 - len(window) / resource_dim)
