"""Dense complex linear algebra used by every protocol.

States are plain 1-D ``complex128`` arrays and operators are square 2-D
arrays.  Only bipartite pure states get their own container, because the
split into the A and B factors has to travel with the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KERNEL_TOL = 1e-12
DEFAULT_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-13


def as_state(amps, *, normalize: bool = False) -> np.ndarray:
    """Coerce ``amps`` to a finite 1-D complex vector."""
    vec = np.asarray(amps, dtype=complex).reshape(-1)
    if vec.size == 0:
        raise ValueError("state vector must have positive dimension")
    if not np.all(np.isfinite(vec)):
        raise ValueError("state vector has non-finite amplitudes")
    if normalize:
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        vec = vec / nrm
    return vec


def basis_state(index: int, dim: int) -> np.ndarray:
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return vec


def is_normalized(vec: np.ndarray, tol: float = KERNEL_TOL) -> bool:
    return abs(np.vdot(vec, vec).real - 1.0) <= tol


def is_unitary(op: np.ndarray, tol: float = KERNEL_TOL) -> bool:
    op = np.asarray(op)
    eye = np.eye(op.shape[0])
    return op.shape[0] == op.shape[1] and np.max(np.abs(op @ op.conj().T - eye)) <= tol


def is_hermitian(op: np.ndarray, tol: float = KERNEL_TOL) -> bool:
    op = np.asarray(op)
    return op.shape[0] == op.shape[1] and np.max(np.abs(op - op.conj().T)) <= tol


def is_diagonal(op: np.ndarray, tol: float = KERNEL_TOL) -> bool:
    op = np.asarray(op)
    off = op - np.diag(np.diag(op))
    return op.shape[0] == op.shape[1] and (off.size == 0 or np.max(np.abs(off)) <= tol)


@dataclass(frozen=True, eq=False)
class JointState:
    """Pure state on ``H_A (x) H_B`` stored row-major, A index first.

    ``normalized`` is a provenance flag, not a check: regularized EPR-type
    resources and truncated squeezed states are carried unnormalized.
    """

    amps: np.ndarray
    dim_a: int
    dim_b: int
    normalized: bool = True

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")
        if amps.size != self.dim_a * self.dim_b:
            raise ValueError(
                f"expected {self.dim_a * self.dim_b} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("joint state has non-finite amplitudes")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_matrix(cls, mat, normalized: bool = True) -> "JointState":
        mat = np.asarray(mat, dtype=complex)
        return cls(mat.reshape(-1), mat.shape[0], mat.shape[1], normalized)

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as a ``dim_a x dim_b`` coefficient matrix."""
        return self.amps.reshape(self.dim_a, self.dim_b)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def tensor_product(a, b) -> JointState:
    a = as_state(a)
    b = as_state(b)
    return JointState(np.kron(a, b), a.size, b.size)


def partial_inner_left(phi, psi: JointState) -> np.ndarray:
    """Unnormalized B-state ``<phi|_A |psi>_AB`` (antilinear in ``phi``)."""
    phi = as_state(phi)
    if phi.size != psi.dim_a:
        raise ValueError(f"phi has dim {phi.size}, joint state has dim_a {psi.dim_a}")
    return phi.conj() @ psi.matrix


def apply_local(psi: JointState, op_a=None, op_b=None) -> JointState:
    """Apply ``op_a (x) op_b`` to a joint state (``None`` means identity)."""
    mat = psi.matrix
    if op_a is not None:
        mat = np.asarray(op_a) @ mat
    if op_b is not None:
        mat = mat @ np.asarray(op_b).T
    return JointState.from_matrix(mat, psi.normalized)


def schmidt_decompose(psi: JointState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt coefficients and local bases of a joint state.

    Returns ``(coeffs, basis_a, basis_b)`` with ``psi = sum_k coeffs[k]
    basis_a[:, k] (x) basis_b[:, k]``.  The bases are full unitaries; the
    coefficient vector has length ``min(dim_a, dim_b)``.  Values below
    ``SCHMIDT_CUTOFF`` are zeroed.  Degenerate values keep SVD order
    (stable sort).
    """
    u, s, vh = np.linalg.svd(psi.matrix, full_matrices=True)
    order = np.argsort(-s, kind="stable")
    s = s[order].copy()
    s[s < SCHMIDT_CUTOFF] = 0.0
    k = s.size
    basis_a = u.copy()
    basis_a[:, :k] = u[:, order]
    basis_b = vh.T.copy()
    basis_b[:, :k] = vh.T[:, order]
    return s, basis_a, basis_b


def schmidt_rank(coeffs) -> int:
    return int(np.count_nonzero(np.asarray(coeffs) >= SCHMIDT_CUTOFF))


def schmidt_reconstruct(coeffs, basis_a, basis_b) -> JointState:
    k = len(coeffs)
    mat = (basis_a[:, :k] * np.asarray(coeffs)) @ basis_b[:, :k].T
    return JointState.from_matrix(mat)


def fidelity(a, b) -> float:
    """Pure-state fidelity ``|<a|b>|^2``, clipped to ``[0, 1]``."""
    a = as_state(a)
    b = as_state(b)
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def dft_unitary(n: int) -> np.ndarray:
    """``F[j, k] = exp(2 pi i j k / n) / sqrt(n)``."""
    if n < 1:
        raise ValueError("DFT dimension must be positive")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(2j * np.pi * jk / n) / np.sqrt(n)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a
