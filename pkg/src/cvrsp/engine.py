"""Two-party harness: run protocols, sample outcomes, audit obliviousness.

Every protocol is described by a public ``config`` (what both parties
know: dimensions, squeezing, grid, cutoffs) and Alice's private ``params``
(the RSP parameters).  The referee holds the joint state and produces the
transcript; Bob's correction is rebuilt by :func:`bob_apply` from the
public config and the one classical message only.

Config/params dictionaries per protocol id:

============== ======================================== =========================================
protocol       config keys                              params keys
============== ======================================== =========================================
finite         alphas                                   phases
quadrature     m, x_min, dx, swap_roles                 phi | poly=[linear, quadratic, cubic]
phase          r, n_meas, cutoff                        phi_n | chi, theta
photon_finite  n                                        phases
photon_cutoff  cutoff, resource_dim                     coeffs=[[n, re, im], ...] | phase_series
============== ======================================== =========================================
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rsp_finite, rsp_phase, rsp_photon, rsp_quadrature
from .rng import run_stream
from .transcript import DISCARD, ClassicalMessage, ProtocolTranscript, select_outcome

PROTOCOLS = ("finite", "quadrature", "phase", "photon_finite", "photon_cutoff")
EXACT_FIDELITY_TOL = 1e-8


class ConfigError(ValueError):
    """Invalid protocol id, config or parameters."""


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where} is missing {key!r}")
    return d[key]


def _check_keys(d: dict, allowed: set, where: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


class _Setup:
    """A protocol instance: public config plus Alice's parameters."""

    config_keys: set = set()
    param_keys: set = set()

    def __init__(self, config: dict, params: dict):
        _check_keys(config, self.config_keys, "config")
        _check_keys(params, self.param_keys, "params")
        self.config = config
        self.params = params

    def outcome_ids(self) -> list[int]:
        raise NotImplementedError

    def probabilities(self) -> np.ndarray:
        raise NotImplementedError

    def run(self, outcome_id: int) -> ProtocolTranscript:
        raise NotImplementedError


class _Finite(_Setup):
    config_keys = {"alphas"}
    param_keys = {"phases"}

    def __init__(self, config, params):
        super().__init__(config, params)
        self.alphas = np.asarray(_require(config, "alphas", "finite config"), dtype=float)
        self.phases = np.asarray(_require(params, "phases", "finite params"), dtype=float)
        rsp_finite.outcome_probabilities(self.alphas, self.phases)  # validates

    def outcome_ids(self):
        return list(range(self.phases.size))

    def probabilities(self):
        return rsp_finite.outcome_probabilities(self.alphas, self.phases)

    def run(self, outcome_id):
        return rsp_finite.run_finite_protocol(self.alphas, self.phases, outcome_id)

    @staticmethod
    def bob(config, message):
        return rsp_finite.bob_correction(len(config["alphas"]), message)


class _Quadrature(_Setup):
    config_keys = {"m", "x_min", "dx", "swap_roles"}
    param_keys = {"phi", "poly"}

    def __init__(self, config, params):
        super().__init__(config, params)
        self.grid = self.grid_of(config)
        self.swap = bool(config.get("swap_roles", False))
        if "phi" in params:
            self.phi = np.asarray(params["phi"], dtype=float)
        elif "poly" in params:
            coeffs = list(params["poly"]) + [0.0] * (3 - len(params["poly"]))
            self.phi = rsp_quadrature.polynomial_phase(
                self.grid, *coeffs[:3], on="p" if self.swap else "x"
            )
        else:
            raise ConfigError("quadrature params need 'phi' or 'poly'")
        if self.phi.size != self.grid.m:
            raise ConfigError(f"phi has {self.phi.size} samples for m={self.grid.m}")

    @staticmethod
    def grid_of(config):
        return rsp_quadrature.GridSpec(
            int(_require(config, "m", "quadrature config")),
            float(config.get("x_min", 0.0)),
            float(config.get("dx", 1.0)),
        )

    def outcome_ids(self):
        return list(range(self.grid.m))

    def probabilities(self):
        return np.full(self.grid.m, 1 / self.grid.m)

    def run(self, outcome_id):
        return rsp_quadrature.run_quadrature_protocol(
            self.grid, self.phi, outcome_id, swap_roles=self.swap
        )

    @classmethod
    def bob(cls, config, message):
        return rsp_quadrature.bob_correction(
            cls.grid_of(config), message, swap_roles=bool(config.get("swap_roles", False))
        )


class _Phase(_Setup):
    config_keys = {"r", "n_meas", "cutoff"}
    param_keys = {"phi_n", "chi", "theta"}

    def __init__(self, config, params):
        super().__init__(config, params)
        r = float(_require(config, "r", "phase config"))
        n_meas = int(_require(config, "n_meas", "phase config"))
        cutoff = config.get("cutoff")
        if "phi_n" in params:
            self.cfg = rsp_phase.PhaseProtocolConfig(r, n_meas, params["phi_n"], cutoff)
        else:
            self.cfg = rsp_phase.PhaseProtocolConfig.kerr(
                r, n_meas, float(params.get("chi", 0.0)), float(params.get("theta", 0.0)), cutoff
            )

    def outcome_ids(self):
        return list(range(self.cfg.n_meas)) + [DISCARD]

    def probabilities(self):
        return rsp_phase.outcome_probabilities(self.cfg)

    def run(self, outcome_id):
        return rsp_phase.run_phase_protocol(self.cfg, outcome_id)

    @staticmethod
    def bob(config, message):
        cutoff = config.get("cutoff")
        if cutoff is None:
            cutoff = rsp_phase.default_cutoff(float(config["r"]), int(config["n_meas"]))
        return rsp_phase.bob_correction(int(cutoff), message)


class _PhotonFinite(_Setup):
    config_keys = {"n"}
    param_keys = {"phases"}

    def __init__(self, config, params):
        super().__init__(config, params)
        self.n = int(_require(config, "n", "photon_finite config"))
        self.phases = np.asarray(_require(params, "phases", "photon_finite params"), dtype=float)
        if self.phases.size != self.n:
            raise ConfigError(f"{self.phases.size} phases for n={self.n}")

    def outcome_ids(self):
        return list(range(self.n))

    def probabilities(self):
        v, _ = rsp_photon.finite_fourier_premeasurement(self.phases)
        return np.sum(np.abs(v) ** 2, axis=1) / self.n

    def run(self, outcome_id):
        return rsp_photon.run_photon_finite(self.n, self.phases, outcome_id)

    @staticmethod
    def bob(config, message):
        return rsp_photon.bob_correction_finite(int(config["n"]), message)


def profile_from_params(params: dict, cutoff: int) -> rsp_photon.FourierPhaseProfile:
    if "coeffs" in params:
        entries = params["coeffs"]
        if isinstance(entries, dict):
            coeffs = {int(n): complex(*v) if isinstance(v, (list, tuple)) else complex(v)
                      for n, v in entries.items()}
        else:
            coeffs = {int(n): complex(re, im) for n, re, im in entries}
        return rsp_photon.FourierPhaseProfile.from_coefficients(coeffs)
    if "phase_series" in params:
        series = params["phase_series"]
        _check_keys(series, {"const", "cos", "sin"}, "phase_series")
        fn = rsp_photon.trig_phase(
            float(series.get("const", 0.0)), series.get("cos", ()), series.get("sin", ())
        )
        return rsp_photon.FourierPhaseProfile.from_phase_function(fn, range(-cutoff + 1, cutoff))
    raise ConfigError("photon_cutoff params need 'coeffs' or 'phase_series'")


class _PhotonCutoff(_Setup):
    config_keys = {"cutoff", "resource_dim"}
    param_keys = {"coeffs", "phase_series"}

    def __init__(self, config, params):
        super().__init__(config, params)
        self.cutoff = int(_require(config, "cutoff", "photon_cutoff config"))
        self.dim = int(_require(config, "resource_dim", "photon_cutoff config"))
        self.window = rsp_photon.cutoff_window(self.cutoff, self.dim)
        self.profile = profile_from_params(params, self.cutoff)

    def outcome_ids(self):
        return list(self.window) + [DISCARD]

    def probabilities(self):
        return rsp_photon.outcome_probabilities_cutoff(self.cutoff, self.dim)

    def run(self, outcome_id):
        return rsp_photon.run_photon_cutoff(self.profile, self.cutoff, self.dim, outcome_id)

    @staticmethod
    def bob(config, message):
        return rsp_photon.bob_correction_cutoff(int(config["resource_dim"]), message)


_REGISTRY = {
    "finite": _Finite,
    "quadrature": _Quadrature,
    "phase": _Phase,
    "photon_finite": _PhotonFinite,
    "photon_cutoff": _PhotonCutoff,
}


def setup(protocol_id: str, config: dict, params: dict) -> _Setup:
    try:
        cls = _REGISTRY[protocol_id]
    except KeyError:
        raise ConfigError(f"unknown protocol {protocol_id!r}; choose from {PROTOCOLS}") from None
    try:
        return cls(dict(config), dict(params))
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(f"{protocol_id}: {exc}") from exc


def split_params(protocol_id: str, merged: dict) -> tuple[dict, dict]:
    """Split one flat parameter dict into (public config, Alice's params)."""
    if protocol_id not in _REGISTRY:
        raise ConfigError(f"unknown protocol {protocol_id!r}; choose from {PROTOCOLS}")
    cls = _REGISTRY[protocol_id]
    _check_keys(merged, cls.config_keys | cls.param_keys, f"{protocol_id} params")
    config = {k: v for k, v in merged.items() if k in cls.config_keys}
    params = {k: v for k, v in merged.items() if k in cls.param_keys}
    return config, params


def bob_apply(protocol_id: str, config: dict, message: ClassicalMessage, state) -> np.ndarray:
    """Bob's step, reconstructed from public information and the message alone."""
    if protocol_id not in _REGISTRY:
        raise ConfigError(f"unknown protocol {protocol_id!r}")
    return _REGISTRY[protocol_id].bob(config, message) @ np.asarray(state)


@dataclass
class RunBatch:
    protocol: str
    config: dict
    params: dict
    mode: str
    seed: int | None
    runs: list[ProtocolTranscript]
    summary: dict = field(init=False)

    def __post_init__(self):
        self.summary = summarize(self.runs)


def summarize(runs) -> dict:
    hist = Counter(t.outcome for t in runs)
    kept = [t.fidelity for t in runs if not t.discarded]
    # exact probability per distinct outcome; sampled batches repeat transcripts
    exact = {t.outcome: (t.probability, t.discarded) for t in runs}
    return {
        "n_runs": len(runs),
        "histogram": dict(sorted(hist.items())),
        "mean_fidelity": float(np.mean(kept)) if kept else None,
        "min_fidelity": float(np.min(kept)) if kept else None,
        "discard_rate": sum(t.discarded for t in runs) / len(runs) if runs else 0.0,
        "discard_probability": float(sum(p for p, d in exact.values() if d)),
        "total_probability": float(sum(p for p, _ in exact.values())),
    }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RSP_THREADS", "1")))
    except ValueError:
        return 1


def execute(protocol_id, config, params, mode="enumerate", *, runs=None, seed=None) -> RunBatch:
    """Run a protocol for every outcome (``enumerate``) or ``runs`` sampled ones.

    Sampling draws run ``i`` from its own xoshiro256** stream
    (:func:`cvrsp.rng.run_stream`), so identical inputs give identical batches.
    """
    inst = setup(protocol_id, config, params)
    ids = inst.outcome_ids()
    probs = inst.probabilities()
    if mode == "enumerate":
        todo = [i for i, p in zip(ids, probs) if p > 0]
        with ThreadPoolExecutor(_threads()) as pool:
            transcripts = list(pool.map(inst.run, todo))
        return RunBatch(protocol_id, dict(config), dict(params), mode, None, transcripts)
    if mode != "sample":
        raise ConfigError(f"unknown mode {mode!r}")
    if runs is None or runs < 1 or seed is None:
        raise ConfigError("sample mode needs runs >= 1 and a seed")
    seed = int(seed) & ((1 << 64) - 1)
    cache: dict[int, ProtocolTranscript] = {}
    transcripts = []
    for i in range(runs):
        idx = select_outcome(probs, run_stream(seed, i))
        if idx not in cache:
            cache[idx] = inst.run(ids[idx])
        transcripts.append(cache[idx])
    return RunBatch(protocol_id, dict(config), dict(params), mode, seed, transcripts)


@dataclass
class ObliviousnessReport:
    outcome_ids: list
    dist_a: np.ndarray
    dist_b: np.ndarray
    tv_distance: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.tv_distance < self.tol


def obliviousness_check(protocol_id, config, params_a, params_b, tol=1e-12):
    """Total-variation distance between the exact outcome distributions."""
    a = setup(protocol_id, config, params_a)
    b = setup(protocol_id, config, params_b)
    if a.outcome_ids() != b.outcome_ids():
        return ObliviousnessReport(a.outcome_ids(), a.probabilities(), b.probabilities(),
                                   math.inf, tol)
    pa, pb = a.probabilities(), b.probabilities()
    tv = 0.5 * float(np.sum(np.abs(pa - pb)))
    return ObliviousnessReport(a.outcome_ids(), pa, pb, tv, tol)


def invariant_violations(batch: RunBatch, tol: float = EXACT_FIDELITY_TOL) -> list[ProtocolTranscript]:
    return [t for t in batch.runs if not t.discarded and t.fidelity < 1 - tol]
