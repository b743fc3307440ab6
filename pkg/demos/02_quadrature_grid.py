# # Quadrature protocol on a position grid
#
# The EPR pair becomes the maximally entangled state of an m-point grid.
# Alice imprints exp(i phi(x)), measures momentum and sends p_j.  Bob's
# momentum kick leaves him in exp(i phi(x)) / sqrt(m).

import numpy as np

from cvrsp import rsp_finite, rsp_quadrature
from cvrsp.rsp_quadrature import GridSpec

grid = GridSpec.centered(16, length=4.0)
phi = rsp_quadrature.polynomial_phase(grid, linear=0.2, quadratic=0.5, cubic=0.1)

for j in (0, 3, 11):
    t = rsp_quadrature.run_quadrature_protocol(grid, phi, j)
    print(f"p_j={t.message.value:8.4f}  p={t.probability:.4f}  fidelity={t.fidelity:.15f}")

# On the grid this is the N-level protocol with flat Schmidt coefficients.

alphas = np.full(grid.m, grid.m ** -0.5)
dev = max(
    np.max(np.abs(rsp_quadrature.run_quadrature_protocol(grid, phi, j).output
                  - rsp_finite.run_finite_protocol(alphas, phi, j).output))
    for j in range(grid.m)
)
print("largest output difference vs the finite protocol:", dev)

# Position and momentum can swap roles: a momentum-space phase, a position
# measurement, a position shift at Bob's side.

phi_p = rsp_quadrature.polynomial_phase(grid, quadratic=0.05, on="p")
t = rsp_quadrature.run_quadrature_protocol(grid, phi_p, 5, swap_roles=True)
print("swapped roles, x_k =", round(t.message.value, 4), "fidelity", round(t.fidelity, 15))
