"""Independent reference computations used by the tests.

Nothing here imports the package: every quantity is rebuilt from the joint
state and plain numpy so the tests compare two separate code paths.
"""

import numpy as np


def joint_matrix(coeffs):
    """Coefficient matrix of ``sum_k c_k |k>|k>``."""
    return np.diag(np.asarray(coeffs, dtype=complex))


def brute_force_branch(resource, alice_op, alice_ket, bob_op):
    """Run one branch on the full joint state.

    ``resource`` is the ``dim_a x dim_b`` coefficient matrix.  Alice applies
    ``alice_op`` and projects onto ``alice_ket``; Bob applies ``bob_op`` to
    his normalized conditional state.  Returns ``(p, bob_state, output)``.
    """
    joint = np.kron(np.asarray(alice_op), np.eye(resource.shape[1])) @ resource.reshape(-1)
    projector = np.kron(np.asarray(alice_ket).conj(), np.eye(resource.shape[1]))
    bob = projector @ joint
    p = float(np.vdot(bob, bob).real)
    bob = bob / np.sqrt(p)
    return p, bob, np.asarray(bob_op) @ bob


def fid(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return abs(np.vdot(a / np.linalg.norm(a), b / np.linalg.norm(b))) ** 2


def dft_column(j, n):
    k = np.arange(n)
    return np.exp(2j * np.pi * j * k / n) / np.sqrt(n)


def fft_fourier_coeffs(phase_fn, n_range, samples=4096):
    """``(2 pi)^-1 int exp(-i n t) exp(i phase(t)) dt`` by a uniform-grid FFT."""
    t = 2 * np.pi * np.arange(samples) / samples
    vals = np.exp(1j * np.array([phase_fn(x) for x in t]))
    spec = np.fft.fft(vals) / samples
    return np.array([spec[n % samples] for n in n_range])
