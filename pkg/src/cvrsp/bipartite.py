"""Entangled resources and their antilinear-operator description.

A pure bipartite state ``|Psi>_AB`` is encoded by the conjugate-linear map
``R|phi> = <phi|_A |Psi>_AB``.  Antilinear maps are stored as ordinary
matrices with action ``matrix @ conj(x)``; composition with linear maps
goes through ``@`` and follows

* linear @ antilinear  -> antilinear (``L M``)
* antilinear @ linear  -> antilinear (``M conj(L)``)
* antilinear @ antilinear -> linear (``M1 conj(M2)``)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmath import (
    KERNEL_TOL,
    SCHMIDT_CUTOFF,
    JointState,
    as_state,
    commutator,
    schmidt_rank,
)

ZERO_PROBABILITY = 1e-14


class ZeroProbabilityError(ValueError):
    """Raised when a measurement outcome has (numerically) zero probability."""


@dataclass(frozen=True, eq=False)
class AntilinearMap:
    matrix: np.ndarray

    # let ndarray @ AntilinearMap fall through to __rmatmul__
    __array_ufunc__ = None

    def __post_init__(self):
        mat = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        if not np.all(np.isfinite(mat)):
            raise ValueError("antilinear map has non-finite entries")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, vec) -> np.ndarray:
        return self.matrix @ np.conj(np.asarray(vec, dtype=complex))

    def adjoint(self) -> "AntilinearMap":
        # <y, A x> = <x, A^dag y> for antilinear A gives matrix transpose
        return AntilinearMap(self.matrix.T)

    def __matmul__(self, other):
        if isinstance(other, AntilinearMap):
            return self.matrix @ other.matrix.conj()
        other = np.asarray(other)
        if other.ndim == 1:
            return self(other)
        return AntilinearMap(self.matrix @ other.conj())

    def __rmatmul__(self, other):
        return AntilinearMap(np.asarray(other) @ self.matrix)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Schmidt-form resource ``sum_k alpha_k |a_k> |b_k>``.

    ``schmidt_coeffs`` are sorted descending and ``basis_a``/``basis_b``
    hold the matching Schmidt vectors as columns.  ``norm_sq`` is the
    actual squared norm, which is below one for truncated resources that
    were not renormalized.
    """

    schmidt_coeffs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    normalized: bool = True
    provenance: str = "schmidt"
    info: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis_a.shape[0]

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.schmidt_coeffs ** 2))

    @property
    def rank(self) -> int:
        return schmidt_rank(self.schmidt_coeffs)

    def joint(self) -> JointState:
        k = self.schmidt_coeffs.size
        mat = (self.basis_a[:, :k] * self.schmidt_coeffs) @ self.basis_b[:, :k].T
        return JointState.from_matrix(mat, self.normalized)

    def reduced_density_b(self) -> np.ndarray:
        k = self.schmidt_coeffs.size
        b = self.basis_b[:, :k]
        return (b * self.schmidt_coeffs ** 2) @ b.conj().T


def _canonical_state(coeffs: np.ndarray, **kwargs) -> BipartiteState:
    # sort descending; permute the canonical kets along so the joint state is unchanged
    order = np.argsort(-coeffs, kind="stable")
    perm = np.eye(coeffs.size)[:, order]
    return BipartiteState(coeffs[order], perm, perm.copy(), **kwargs)


def make_schmidt_state(alphas, tol: float = 1e-10) -> BipartiteState:
    """Resource ``sum_k alphas[k] |k>|k>`` in the canonical number basis."""
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    if alphas.size == 0:
        raise ValueError("need at least one Schmidt coefficient")
    if np.any(alphas < 0) or not np.all(np.isfinite(alphas)):
        raise ValueError("Schmidt coefficients must be finite and nonnegative")
    if abs(np.sum(alphas ** 2) - 1.0) > tol:
        raise ValueError(f"sum of squared coefficients is {np.sum(alphas ** 2)!r}, not 1")
    return _canonical_state(alphas)


def make_maximally_entangled(n: int, provenance: str = "regularized") -> BipartiteState:
    """Finite stand-in ``n^-1/2 sum_k |k>|k>`` for an unnormalizable EPR state."""
    if n < 1:
        raise ValueError("dimension must be positive")
    return _canonical_state(np.full(n, 1 / np.sqrt(n)), provenance=provenance)


def make_two_mode_squeezed(r: float, cutoff: int, renormalize: bool = False) -> BipartiteState:
    """Two-mode squeezed vacuum ``cosh(r)^-1 sum_n tanh(r)^n |n>|n>`` below ``cutoff``.

    Without ``renormalize`` the exact truncated weights are kept and the
    missing weight ``tanh(r)^(2 cutoff)`` is stored in ``info``.
    """
    if r < 0:
        raise ValueError("squeezing parameter must be nonnegative")
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    t = np.tanh(r)
    coeffs = t ** np.arange(cutoff) / np.cosh(r)
    neglected = t ** (2 * cutoff)
    info = {"r": float(r), "cutoff": int(cutoff), "neglected_weight": float(neglected)}
    if renormalize:
        coeffs = coeffs / np.linalg.norm(coeffs)
    normalized = bool(renormalize or neglected == 0.0)
    eye = np.eye(cutoff)
    return BipartiteState(coeffs, eye, eye.copy(), normalized, "two_mode_squeezed", info)


def make_truncated_phase_resource(n: int) -> BipartiteState:
    """``n^-1/2 sum_j |theta_j>_A |-theta_j>_B``, i.e. ``n^-1/2 sum_k |k>|k>``."""
    return make_maximally_entangled(n, provenance="truncated_phase")


def r_operator(psi) -> AntilinearMap:
    """Antilinear map ``R`` with ``R phi = <phi|_A psi`` (psi Schmidt-form or joint)."""
    joint = psi.joint() if isinstance(psi, BipartiteState) else psi
    return AntilinearMap(joint.matrix.T)


def polar_decompose(r: AntilinearMap, psi: BipartiteState | None = None):
    """Split ``R = sqrt(rho_B) J`` into a PSD operator and an antiunitary.

    With the Schmidt data available, ``J`` is the antiunitary sending each
    A Schmidt vector to its B partner.  Otherwise an SVD of ``R`` is used.
    """
    if psi is not None:
        k = psi.schmidt_coeffs.size
        b = psi.basis_b
        sqrt_rho = (b[:, :k] * psi.schmidt_coeffs) @ b[:, :k].conj().T
        j_map = AntilinearMap(psi.basis_b @ psi.basis_a.T)
        return sqrt_rho, j_map
    w, s, xh = np.linalg.svd(r.matrix)
    return (w * s) @ w.conj().T, AntilinearMap(w @ xh)


def conditional_state(r: AntilinearMap, phi) -> tuple[np.ndarray, float]:
    """Bob's state and its probability after Alice projects onto ``phi``."""
    unnorm = r(as_state(phi))
    p = float(np.vdot(unnorm, unnorm).real)
    if p < ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome probability {p:.3e} is zero")
    return unnorm / np.sqrt(p), p


@dataclass
class RspConditionReport:
    max_commutator: float
    basis: np.ndarray  # rows are Alice's measurement vectors
    gram_deviation: float
    probabilities: np.ndarray
    complete: bool
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.complete
            and self.max_commutator <= self.tol
            and self.gram_deviation <= self.tol
        )


def check_rsp_conditions(psi: BipartiteState, unitaries, phi, tol: float = KERNEL_TOL):
    """Test ``[rho_B, U_j] = 0`` and build Alice's basis ``J^dag U_j^dag J phi``.

    The basis counts as complete only when it is orthonormal and the
    resource has full Schmidt rank.
    """
    phi = as_state(phi)
    rho_b = psi.reduced_density_b()
    r = r_operator(psi)
    _, j_map = polar_decompose(r, psi)
    comm = max(np.linalg.norm(commutator(rho_b, u), 2) for u in unitaries)
    basis = np.array([(j_map.adjoint() @ u.conj().T @ j_map) @ phi for u in unitaries])
    gram = basis.conj() @ basis.T
    gram_dev = float(np.max(np.abs(gram - np.eye(len(unitaries)))))
    probs = np.array([np.vdot(r(v), r(v)).real for v in basis])
    full_rank = psi.rank == psi.dim and bool(np.all(psi.schmidt_coeffs >= SCHMIDT_CUTOFF))
    complete = full_rank and len(unitaries) == psi.dim and gram_dev <= tol
    return RspConditionReport(float(comm), basis, gram_dev, probs, complete, tol)
