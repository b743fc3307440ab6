# # Remote preparation on N levels
#
# Alice and Bob share sum_k alpha_k |k>|k>.  Alice wants Bob to hold
# sum_k alpha_k exp(i phi_k) |k>, knows the phases, and may send one integer.

import numpy as np

from cvrsp import rsp_finite
from cvrsp.bipartite import check_rsp_conditions, make_schmidt_state

rng = np.random.default_rng(0)
n = 5
alphas = rsp_finite.random_alphas(n, rng)
phases = rsp_finite.random_phases(n, rng)
print("alphas:", np.round(alphas, 3))
print("phases:", np.round(phases, 3))

# The correction group is diagonal in the Schmidt basis, so it commutes with
# Bob's reduced state.  That is what makes every outcome correctable.

report = check_rsp_conditions(make_schmidt_state(alphas), rsp_finite.zn_unitaries(n),
                              rsp_finite.alice_input_state(phases))
print("max commutator:", report.max_commutator, "basis Gram deviation:", report.gram_deviation)

# Run every outcome.  Probabilities are flat and the corrected state is the target.

for j in range(n):
    t = rsp_finite.run_finite_protocol(alphas, phases, j)
    print(f"j={j}  p={t.probability:.15f}  fidelity={t.fidelity:.15f}")

# Without Bob's phase correction the state is off whenever j != 0.

t = rsp_finite.run_finite_protocol(alphas, phases, 2, apply_correction=False)
print("uncorrected fidelity for j=2:", round(t.fidelity, 4))
