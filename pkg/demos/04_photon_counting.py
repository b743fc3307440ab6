# # Photon counting with shift corrections
#
# Alice's pre-measurement is a Fourier series of ladder operators; she counts
# photons and Bob shifts his photon number back by the count.

import numpy as np
from scipy import special

from cvrsp import rsp_photon
from cvrsp.rsp_photon import FourierPhaseProfile

# Finite version: exact on n levels, flat outcome distribution.

phases = np.random.default_rng(2).uniform(0, 2 * np.pi, 6)
v, f = rsp_photon.finite_fourier_premeasurement(phases)
print("sum |f_m|^2 =", np.sum(np.abs(f) ** 2))
for m in range(6):
    t = rsp_photon.run_photon_finite(6, phases, m)
    print(f"count={m}  p={t.probability:.4f}  fidelity={t.fidelity:.15f}")

# Unbounded version with phi(t) = 0.5 sin t: the coefficients are Bessel values.

prof = FourierPhaseProfile.from_phase_function(rsp_photon.trig_phase(sin=[0.5]), range(-6, 7))
print("max |f_n - J_n(0.5)|:", max(abs(prof.coeffs[n] - special.jv(n, 0.5)) for n in prof.coeffs))

for n in (5, 10, 15):
    t = rsp_photon.run_photon_cutoff(prof, 6, 24, n)
    print(f"count={n}  fidelity={t.fidelity:.12f}  dropped={t.dropped_weight:.3e}")

# Negative-index weight cannot survive Bob's down-shift; it is reported.

prof = FourierPhaseProfile.from_coefficients({-1: np.sqrt(0.2), 0: np.sqrt(0.4), 1: 1j * np.sqrt(0.4)})
t = rsp_photon.run_photon_cutoff(prof, 3, 16, 7)
print("dropped weight", round(t.dropped_weight, 12), "fidelity to renormalized target", t.fidelity)
