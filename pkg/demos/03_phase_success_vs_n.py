# # Phase measurement with a squeezed resource
#
# The resource is a two-mode squeezed vacuum.  Alice's truncated phase
# measurement only sees photon numbers below N, so some runs are discarded.
# The success probability is 1 - tanh(r)^(2N).

import numpy as np

from cvrsp import engine, rsp_phase

r = 0.5
print(" N   closed form         enumerated          |diff|")
for n_meas in range(1, 11):
    batch = engine.execute("phase", {"r": r, "n_meas": n_meas}, {"chi": 0.15})
    kept = sum(t.probability for t in batch.runs if not t.discarded)
    closed = rsp_phase.success_probability(r, n_meas)
    print(f"{n_meas:2d}  {closed:.15f}  {kept:.15f}  {abs(kept - closed):.1e}")

# Sampling agrees with the exact discard weight.

batch = engine.execute("phase", {"r": r, "n_meas": 4}, {"chi": 0.15}, "sample", runs=10000, seed=7)
print("sampled discard rate", batch.summary["discard_rate"], "exact", np.tanh(r) ** 8)

# Every kept run gives the same state, whatever the phase outcome.

print("min fidelity over kept runs:", batch.summary["min_fidelity"])
