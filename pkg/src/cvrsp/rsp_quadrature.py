"""Quadrature-measurement RSP on a periodic position grid.

The delta-correlated EPR pair is replaced by the maximally entangled state
on an ``m``-point grid, ``m^-1/2 sum_k |x_k>|x_k>``.  Alice applies
``exp(i phi(X))``, measures momentum and sends ``p_j = 2 pi j / (m dx)``;
Bob's momentum kick ``exp(i p_j X)`` leaves him in ``exp(i phi(x_k)) / sqrt(m)``.
On the grid this is the Z_m protocol with ``alpha_k = m^-1/2`` and
``phi_k = phi(x_k)``.

Bob's kick is taken about the first grid point (``x - x_min``), so the
constant phase ``exp(i p_j x_min)`` of the textbook displacement is not
applied.  Outputs then agree exactly, not just up to global phase, with the
finite protocol.

With ``swap_roles=True`` position and momentum trade places: the
pre-measurement is diagonal in momentum, Alice measures position, Bob
shifts position, and the target has momentum amplitudes
``exp(i phi(p_j))`` on ``|-p_j>`` (EPR momenta are anticorrelated).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmath import dft_unitary, fidelity
from .transcript import ClassicalMessage, ProtocolTranscript, select_outcome


@dataclass(frozen=True)
class GridSpec:
    m: int
    x_min: float = 0.0
    dx: float = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("grid needs at least two points")
        if not self.dx > 0:
            raise ValueError("grid spacing must be positive")

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.m)

    @property
    def momenta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.m) / (self.m * self.dx)

    @classmethod
    def centered(cls, m: int, length: float) -> "GridSpec":
        dx = length / m
        return cls(m, -0.5 * length, dx)


def polynomial_phase(grid: GridSpec, linear=0.0, quadratic=0.0, cubic=0.0, *, on="x"):
    """Sample ``linear*x + quadratic*x**2 + cubic*x**3`` on the grid.

    ``on="p"`` samples the polynomial on the momentum values instead.
    """
    pts = grid.x if on == "x" else grid.momenta
    return linear * pts + quadratic * pts ** 2 + cubic * pts ** 3


def _samples(grid: GridSpec, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float).reshape(-1)
    if phi.size != grid.m:
        raise ValueError(f"phase function has {phi.size} samples for a {grid.m}-point grid")
    if not np.all(np.isfinite(phi)):
        raise ValueError("phase function samples must be finite")
    return phi


def phase_function_premeasurement(grid: GridSpec, phi) -> np.ndarray:
    return np.diag(np.exp(1j * _samples(grid, phi)))


def momentum_basis(grid: GridSpec) -> np.ndarray:
    """Discrete momentum eigenvectors as rows: ``exp(2 pi i j k / m) / sqrt(m)``."""
    return dft_unitary(grid.m)


def momentum_displacement(grid: GridSpec, p: float) -> np.ndarray:
    return np.diag(np.exp(1j * p * grid.x))


def position_shift(grid: GridSpec, steps: int) -> np.ndarray:
    """Cyclic translation ``|x_k> -> |x_{k+steps}>``."""
    return np.roll(np.eye(grid.m), steps, axis=0)


def bob_correction(grid: GridSpec, message: ClassicalMessage, *, swap_roles: bool = False):
    """Bob's operation from the grid and the real number Alice sent."""
    if swap_roles:
        # Bob holds the target translated by x_k - x_min; undo it
        steps = int(round((message.value - grid.x_min) / grid.dx))
        return position_shift(grid, -steps)
    return np.diag(np.exp(1j * message.value * (grid.x - grid.x_min)))


def quadrature_target(grid: GridSpec, phi, *, swap_roles: bool = False) -> np.ndarray:
    phase = np.exp(1j * _samples(grid, phi)) / np.sqrt(grid.m)
    if swap_roles:
        # amplitude exp(i phi(p_j)) on |-p_j> = conj(F[j])
        return phase @ momentum_basis(grid).conj()
    return phase


def run_quadrature_protocol(grid: GridSpec, phi, outcome, *, swap_roles: bool = False):
    phi = _samples(grid, phi)
    m = grid.m
    v = np.exp(1j * phi)
    f = momentum_basis(grid)
    if swap_roles:
        # V = sum_j v_j |p_j><p_j|; Alice's kets V^dag |x_k> are the rows of conj(V)
        v_op = f.T @ (v[:, None] * f.conj())
        alice_basis = v_op.conj()
        messages = grid.x
    else:
        # rows are V^dag |p_j>
        alice_basis = f * v.conj()
        messages = grid.momenta
    # maximally entangled resource: R phi = conj(phi) / sqrt(m)
    unnorm_all = alice_basis.conj() / np.sqrt(m)
    probs = np.sum(np.abs(unnorm_all) ** 2, axis=1)
    j = select_outcome(probs, outcome)

    p = float(probs[j])
    bob_state = unnorm_all[j] / np.sqrt(p)
    message = ClassicalMessage("real", float(messages[j]))
    output = bob_correction(grid, message, swap_roles=swap_roles) @ bob_state
    target = quadrature_target(grid, phi, swap_roles=swap_roles)
    return ProtocolTranscript(
        protocol="quadrature",
        resource={"kind": "grid_epr", "m": m, "x_min": grid.x_min, "dx": grid.dx,
                  "regularized": True},
        pre_measurement={"kind": "momentum_diag_phase" if swap_roles else "position_diag_phase",
                         "phi": phi.tolist()},
        outcome=j,
        probability=p,
        message=message,
        correction={"kind": "position_shift" if swap_roles else "momentum_kick",
                    "value": message.value},
        bob_state=bob_state,
        output=output,
        target=target,
        fidelity=fidelity(output, target),
        extras={"swap_roles": swap_roles},
    )
