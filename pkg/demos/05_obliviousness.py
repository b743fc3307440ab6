# # What Bob learns from the message
#
# For each protocol, compare the exact outcome distributions for two
# different choices of Alice's parameters.  Identical distributions mean the
# message carries no information about the target.

import numpy as np

from cvrsp import engine

rng = np.random.default_rng(5)
cases = [
    ("finite", {"alphas": [0.6, 0.48, 0.64]}, {"phases": list(rng.uniform(0, 6, 3))}, {"phases": [0, 0, 0]}),
    ("quadrature", {"m": 8, "dx": 0.5}, {"poly": [0.1, 0.3]}, {"phi": list(rng.uniform(-3, 3, 8))}),
    ("phase", {"r": 0.9, "n_meas": 5}, {"chi": 0.3}, {"phi_n": list(rng.uniform(0, 6, 5))}),
    ("photon_finite", {"n": 4}, {"phases": [0, 1, 2, 3]}, {"phases": [3, 1, 4, 1]}),
    ("photon_cutoff", {"cutoff": 3, "resource_dim": 12},
     {"coeffs": [[0, 0.6, 0], [2, 0, 0.8]]}, {"phase_series": {"sin": [0.7]}}),
]
for pid, config, a, b in cases:
    report = engine.obliviousness_check(pid, config, a, b)
    print(f"{pid:14s} outcomes={len(report.outcome_ids):3d}  TV distance={report.tv_distance:.1e}")

# Bob's step only needs the public configuration and the message.

batch = engine.execute("phase", {"r": 0.9, "n_meas": 5}, {"chi": 0.3})
t = batch.runs[3]
rebuilt = engine.bob_apply("phase", {"r": 0.9, "n_meas": 5}, t.message, t.bob_state)
print("message", t.message, "rebuilt output matches:", np.allclose(rebuilt, t.output))
