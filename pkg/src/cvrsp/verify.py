"""Invariant suites behind ``rsp verify``.

Each suite returns a list of :class:`Check` results with the measured
deviation and the tolerance it was held to.  ``perturb`` is a fault-injection
hook: a nonzero value detunes Bob's Z_N unitaries in the ``finite`` suite so
that a negative control can be exercised end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bipartite, engine, qmath, rsp_finite, rsp_phase, rsp_photon, rsp_quadrature


@dataclass
class Check:
    name: str
    deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tol)


def _rand_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def suite_qmath(rng, perturb=0.0):
    dev = 0.0
    for _ in range(20):
        da, db = rng.integers(1, 9, size=2)
        psi = qmath.JointState(_rand_state(rng, da * db), da, db)
        phi = _rand_state(rng, da)
        c = complex(rng.normal(), rng.normal())
        lhs = qmath.partial_inner_left(c * phi, psi)
        rhs = np.conj(c) * qmath.partial_inner_left(phi, psi)
        dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    checks = [Check("antilinearity", dev, 1e-14)]

    dev = 0.0
    for da, db in [(1, 1), (2, 3), (7, 5), (16, 16), (32, 32), (32, 9)]:
        psi = qmath.JointState(_rand_state(rng, da * db), da, db)
        s, a, b = qmath.schmidt_decompose(psi)
        rec = qmath.schmidt_reconstruct(s, a, b)
        dev = max(dev, float(np.linalg.norm(rec.amps - psi.amps)))
    checks.append(Check("schmidt_round_trip", dev, 1e-12))

    dev = max(
        float(np.max(np.abs(f @ f.conj().T - np.eye(n))))
        for n in (1, 2, 3, 16, 64, 255, 256)
        for f in [qmath.dft_unitary(n)]
    )
    checks.append(Check("dft_unitarity", dev, 1e-12))

    dev = 0.0
    for _ in range(20):
        a, b = _rand_state(rng, 6), _rand_state(rng, 6)
        dev = max(dev, abs(qmath.fidelity(a, b) - qmath.fidelity(b, a)))
    checks.append(Check("fidelity_symmetry", dev, 0.0))
    return checks


def suite_bipartite(rng, perturb=0.0):
    cons = unif = polar = recov = 0.0
    for n in range(1, 9):
        psi = bipartite.make_schmidt_state(rsp_finite.random_alphas(n, rng))
        r = bipartite.r_operator(psi)
        basis = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
        total = sum(np.linalg.norm(r(basis[:, j])) ** 2 for j in range(n))
        cons = max(cons, abs(total - 1))

        phases = rsp_finite.random_phases(n, rng)
        phi = rsp_finite.alice_input_state(phases)
        report = bipartite.check_rsp_conditions(psi, rsp_finite.zn_unitaries(n), phi)
        unif = max(unif, float(np.max(np.abs(report.probabilities - 1 / n))))

        sqrt_rho, j_map = bipartite.polar_decompose(r, psi)
        for _ in range(100 // 8 + 1):
            x = _rand_state(rng, n)
            polar = max(polar, float(np.max(np.abs(r(x) - sqrt_rho @ j_map(x)))))

        ref, _ = bipartite.conditional_state(r, phi)
        for u, phi_j in zip(rsp_finite.zn_unitaries(n), report.basis):
            out, _ = bipartite.conditional_state(r, phi_j)
            recov = max(recov, 1 - qmath.fidelity(u @ out, ref))
    return [
        Check("probability_conservation", cons, 1e-12),
        Check("uniform_probability", unif, 1e-12),
        Check("polar_identity", polar, 1e-12),
        Check("recovery_identity", recov, 1e-10),
    ]


def suite_finite(rng, perturb=0.0):
    exact = unif = group = basis_dev = recov = 0.0
    for n in range(1, 17):
        units = rsp_finite.zn_unitaries(n)
        if perturb:
            units = [u @ np.diag(np.exp(1j * perturb * np.arange(n) ** 2)) for u in units]
        for a in range(n):
            for b in range(n):
                group = max(group, float(np.max(np.abs(units[a] @ units[b] - units[(a + b) % n]))))
        for _ in range(5):
            alphas = rsp_finite.random_alphas(n, rng)
            phases = rsp_finite.random_phases(n, rng)
            for j in range(n):
                t = rsp_finite.run_finite_protocol(alphas, phases, j)
                exact = max(exact, 1 - t.fidelity)
                unif = max(unif, abs(t.probability - 1 / n))
                recov = max(recov, 1 - qmath.fidelity(units[j] @ t.bob_state, t.target))
            v = rsp_finite.pre_measurement(phases)
            f = qmath.dft_unitary(n)
            expected = (v.conj().T @ f).T  # row j = V^dag (Fourier column j)
            basis_dev = max(basis_dev, float(np.max(np.abs(rsp_finite.measurement_basis(phases) - expected))))
    return [
        Check("exactness", exact, 1e-10),
        Check("uniform_outcomes", unif, 1e-12),
        Check("group_law", group, 1e-12),
        Check("basis_premeasurement_consistency", basis_dev, 1e-12),
        Check("recovery_with_group_unitaries", recov, 1e-10),
    ]


def suite_quadrature(rng, perturb=0.0):
    red = indep = unif = 0.0
    for m in (4, 8, 16, 32):
        grid = rsp_quadrature.GridSpec(m, -0.5 * m * 0.3, 0.3)
        for _ in range(5):
            phi = rng.uniform(-3, 3, size=m)
            outs = []
            for j in range(m):
                tq = rsp_quadrature.run_quadrature_protocol(grid, phi, j)
                tf = rsp_finite.run_finite_protocol(np.full(m, 1 / math.sqrt(m)), phi, j)
                red = max(red, float(np.max(np.abs(tq.output - tf.output))),
                          float(np.max(np.abs(tq.bob_state - tf.bob_state))),
                          abs(tq.probability - tf.probability))
                unif = max(unif, abs(tq.probability - 1 / m))
                outs.append(tq.output)
            indep = max(indep, max(1 - qmath.fidelity(outs[0], o) for o in outs))
    return [
        Check("reduction_to_zm", red, 1e-12),
        Check("output_independence", indep, 1e-10),
        Check("uniform_outcomes", unif, 1e-12),
    ]


def suite_phase(rng, perturb=0.0):
    complete = equal = succ = pair = fid = 0.0
    for r in (0.25, 0.5, 1.0):
        for n_meas in range(1, 11):
            cfg = rsp_phase.PhaseProtocolConfig(r, n_meas, rng.uniform(0, 2 * np.pi, n_meas))
            probs = rsp_phase.outcome_probabilities(cfg)
            complete = max(complete, abs(float(np.sum(probs)) - 1))
            cfg2 = rsp_phase.PhaseProtocolConfig(r, n_meas, rng.uniform(0, 2 * np.pi, n_meas))
            probs2 = rsp_phase.outcome_probabilities(cfg2)
            equal = max(equal, float(np.ptp(probs[:-1])), float(np.max(np.abs(probs - probs2))))
            succ = max(succ, abs(float(np.sum(probs[:-1])) - rsp_phase.success_probability(r, n_meas)))
            outs = [rsp_phase.run_phase_protocol(cfg, j) for j in range(n_meas)]
            fid = max(fid, max(1 - t.fidelity for t in outs))
            pair = max(pair, max(1 - qmath.fidelity(outs[0].output, t.output) for t in outs))
    states, discard = rsp_phase.pegg_barnett_states(8, 24)
    povm = states.T @ states.conj() + discard
    return [
        Check("povm_completeness", float(np.max(np.abs(povm - np.eye(24)))), 1e-12),
        Check("probability_total", complete, 1e-10),
        Check("oblivious_equal_outcomes", equal, 1e-12),
        Check("success_probability_closed_form", succ, 1e-9),
        Check("corrected_fidelity", fid, 1e-10),
        Check("pairwise_output_fidelity", pair, 1e-10),
    ]


def suite_photon(rng, perturb=0.0):
    pars = recon = exact = unif = 0.0
    for n in range(1, 17):
        phases = rng.uniform(0, 2 * np.pi, n)
        v, f = rsp_photon.finite_fourier_premeasurement(phases)
        pars = max(pars, abs(float(np.sum(np.abs(f) ** 2)) - 1))
        ladder = rsp_photon.ladder_unitaries(n)
        recon = max(recon, float(np.max(np.abs(v - sum(c * u for c, u in zip(f, ladder))))))
        for m in range(n):
            t = rsp_photon.run_photon_finite(n, phases, m)
            exact = max(exact, 1 - t.fidelity)
            unif = max(unif, abs(t.probability - 1 / n))

    shift = 0.0
    dim = 12
    for a in range(5):
        shift = max(shift, float(np.max(np.abs(
            rsp_photon.down_shift(a, dim) @ rsp_photon.up_shift(a, dim) - np.diag(np.arange(dim) < dim - a)
        ))))
        for b in range(5):
            shift = max(shift, float(np.max(np.abs(
                rsp_photon.down_shift(a, dim) @ rsp_photon.down_shift(b, dim) - rsp_photon.down_shift(a + b, dim)
            ))))

    conv = 0.0
    for _ in range(10):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        profile = rsp_photon.FourierPhaseProfile.from_coefficients(dict(enumerate(c / np.linalg.norm(c))))
        for dim in (16, 24):
            for n in rsp_photon.cutoff_window(4, dim):
                conv = max(conv, 1 - rsp_photon.run_photon_cutoff(profile, 4, dim, n).fidelity)
    return [
        Check("parseval_finite", pars, 1e-12),
        Check("operator_reconstruction", recon, 1e-12),
        Check("finite_exactness", exact, 1e-10),
        Check("finite_uniform_outcomes", unif, 1e-12),
        Check("down_shift_algebra", shift, 1e-15),
        Check("cutoff_convergence", conv, 1e-9),
    ]


def suite_engine(rng, perturb=0.0):
    total = sep = 0.0
    cases = _engine_cases(rng)
    for pid, config, params, _ in cases:
        batch = engine.execute(pid, config, params)
        total = max(total, abs(sum(t.probability for t in batch.runs) - 1))
        for t in batch.runs:
            if not t.discarded:
                rebuilt = engine.bob_apply(pid, config, t.message, t.bob_state)
                rebuilt = rebuilt / np.linalg.norm(rebuilt)
                sep = max(sep, float(np.max(np.abs(rebuilt - t.output))))
    a = engine.execute("phase", {"r": 0.5, "n_meas": 4}, {"chi": 0.1}, "sample", runs=500, seed=11)
    b = engine.execute("phase", {"r": 0.5, "n_meas": 4}, {"chi": 0.1}, "sample", runs=500, seed=11)
    det = float([t.outcome for t in a.runs] != [t.outcome for t in b.runs])
    tv = max(engine.obliviousness_check(pid, config, params, other).tv_distance
             for pid, config, params, other in cases)
    return [
        Check("enumerate_probability_total", total, 1e-10),
        Check("bob_from_message_only", sep, 1e-12),
        Check("sampling_determinism", det, 0.0),
        Check("obliviousness", tv, 1e-12),
    ]


def _engine_cases(rng):
    def coeffs():
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        c /= np.linalg.norm(c)
        return [[n - 1, z.real, z.imag] for n, z in enumerate(c)]

    return [
        ("finite", {"alphas": list(rsp_finite.random_alphas(4, rng))},
         {"phases": list(rng.uniform(0, 6, 4))}, {"phases": list(rng.uniform(0, 6, 4))}),
        ("quadrature", {"m": 8, "x_min": -1.2, "dx": 0.3},
         {"poly": [0.2, 0.5, 0.1]}, {"phi": list(rng.uniform(-2, 2, 8))}),
        ("phase", {"r": 0.5, "n_meas": 6},
         {"phi_n": list(rng.uniform(0, 6, 6))}, {"chi": 0.3, "theta": 0.1}),
        ("photon_finite", {"n": 5},
         {"phases": list(rng.uniform(0, 6, 5))}, {"phases": list(rng.uniform(0, 6, 5))}),
        ("photon_cutoff", {"cutoff": 3, "resource_dim": 16},
         {"coeffs": coeffs()}, {"coeffs": coeffs()}),
    ]


SUITES = {
    "qmath": suite_qmath,
    "bipartite": suite_bipartite,
    "finite": suite_finite,
    "quadrature": suite_quadrature,
    "phase": suite_phase,
    "photon": suite_photon,
    "engine": suite_engine,
}
ALIASES = {
    "rsp_finite": "finite",
    "rsp_quadrature": "quadrature",
    "rsp_phase": "phase",
    "rsp_photon": "photon",
}


def run_suites(name: str = "all", *, seed: int = 2024, perturb: float = 0.0):
    """Run one suite (or ``"all"``); returns ``[(suite, Check), ...]``."""
    name = ALIASES.get(name, name)
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    results = []
    for suite in names:
        rng = np.random.default_rng(seed)
        results.extend((suite, c) for c in SUITES[suite](rng, perturb))
    return results
