"""Scenario catalog for the experiment runner.

Every scenario maps a validated :class:`ExperimentConfig` to a
:class:`SweepResult` holding CSV rows plus summary aggregates. Grid
points are independent work units; when several worker threads are used
the results are gathered and sorted before emission, so the bytes on
disk never depend on scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import ConfigError, __version__
from .config import ExperimentConfig, point_seed
from .dynamics import thermal_state
from .majorana import star_trajectory
from .metrics import cumulative_absorption, efficiency, pr_nr, sample_shots
from .protocol import (
    OutcomeProbabilities,
    ProtocolSpec,
    amplitude_recursion,
    dissipative_sweep,
    expansion_coefficients,
    projective_closed_form,
    run_coherent_ideal,
    run_projective,
)
from .quantized import FieldCoupling, run_single_mode
from .su3 import DensityMatrix, PureState, b_pulse, beam_splitter

_FLOAT_FORMAT = "{:.12g}"


@dataclass
class SweepResult:
    scenario: str
    headers: tuple[str, ...]
    rows: list[tuple]
    aggregates: dict = field(default_factory=dict)
    config_echo: dict = field(default_factory=dict)
    rng_seed: int = 0


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return _FLOAT_FORMAT.format(float(value))


def emit_csv(result: SweepResult, path: str) -> None:
    """Write rows with '.' decimals and >= 9 significant digits, locale-free."""
    lines = [",".join(result.headers)]
    for row in result.rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_summary_json(result: SweepResult, path: str) -> None:
    """Machine-readable run summary; schema documented in the README."""
    payload = {
        "scenario": result.scenario,
        "library_version": __version__,
        "rng_seed": result.rng_seed,
        "config": result.config_echo,
        "row_count": len(result.rows),
        "aggregates": result.aggregates,
    }
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


CSV_NAMES = {
    "n1_sweep": "n1_sweep.csv",
    "n2_map": "n2_map.csv",
    "multi_identical": "multi.csv",
    "multi_random": "multi.csv",
    "histogram": "histogram.csv",
    "majorana_trajectory": "majorana.csv",
    "projective_compare": "compare.csv",
    "coefficients": "coefficients.csv",
    "quantized_check": "quantized_check.csv",
}


def run_scenario(config: ExperimentConfig) -> SweepResult:
    runner = _RUNNERS[config.scenario]
    result = runner(config)
    result.config_echo = dict(sorted(config.raw.items(), key=lambda kv: kv[0]))
    result.config_echo = {
        k: (list(v) if isinstance(v, tuple) else v) for k, v in result.config_echo.items()
    }
    result.rng_seed = config.rng_seed
    return result


# ---------------------------------------------------------------------------
# Strength sweeps for N = 1 and N = 2
# ---------------------------------------------------------------------------

def _ratio_columns(p: OutcomeProbabilities) -> tuple[float, float, float]:
    pr, nr = pr_nr(p)
    return pr, nr, efficiency(p.p0, p.p2)


def _initial_vector(config: ExperimentConfig) -> np.ndarray:
    choice = config.get("protocol.initial", "ground")
    if choice == "thermal":
        raise ConfigError("protocol.initial = thermal requires a dissipative model")
    if choice == "ground":
        return PureState.basis(0).vector
    if choice == "level1":
        return PureState.basis(1).vector
    raise ConfigError(f"protocol.initial must be ground|thermal|level1, got {choice!r}")


def _initial_rho(config: ExperimentConfig, model) -> DensityMatrix:
    choice = config.get("protocol.initial", "thermal")
    if choice == "thermal":
        return thermal_state(model)
    if choice == "ground":
        return PureState.basis(0).density()
    if choice == "level1":
        return PureState.basis(1).density()
    raise ConfigError(f"protocol.initial must be ground|thermal|level1, got {choice!r}")


def _small_n_probabilities(config: ExperimentConfig, thetas: np.ndarray, n: int) -> list[OutcomeProbabilities]:
    """Outcome probabilities for a batch of N=1 or N=2 strength vectors."""
    kind = config.model_kind(default="ideal")
    if kind == "ideal":
        out = []
        s = beam_splitter(n)
        init = _initial_vector(config)
        for row in thetas:
            v = s @ init
            for th in row:
                v = s @ (b_pulse(th) @ v)
            out.append(OutcomeProbabilities(*(np.abs(v) ** 2)))
        return out
    model = config.decoherence(default_preset="sample1")
    rho = dissipative_sweep(
        thetas,
        n,
        model,
        geometry=config.geometry(default_b_ns=56.0),
        depolarize=(kind == "lindblad_depol"),
        initial=_initial_rho(config, model),
    )
    return [OutcomeProbabilities(*np.real(np.diagonal(r))) for r in rho]


def _run_n1_sweep(config: ExperimentConfig) -> SweepResult:
    points = config.get("sweep.points", 181)
    theta_max = config.get("sweep.theta_max_pi", 4.0) * np.pi
    grid = np.linspace(0.0, theta_max, points)
    probs = _small_n_probabilities(config, grid[:, None], 1)
    rows = []
    for theta, p in zip(grid, probs):
        pr, nr, eta = _ratio_columns(p)
        rows.append((theta, p.p0, p.p1, p.p2, pr, nr, eta))
    return SweepResult(
        scenario="n1_sweep",
        headers=("theta_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"),
        rows=rows,
        aggregates={"grid_points": points, "theta_max_rad": theta_max},
    )


def _run_n2_map(config: ExperimentConfig) -> SweepResult:
    points = config.get("sweep.points", 161)
    theta_max = config.get("sweep.theta_max_pi", 4.0) * np.pi
    grid = np.linspace(0.0, theta_max, points)
    pairs = np.array([(t1, t2) for t1 in grid for t2 in grid])
    probs = _small_n_probabilities(config, pairs, 2)
    rows = []
    for (t1, t2), p in zip(pairs, probs):
        pr, nr, eta = _ratio_columns(p)
        rows.append((t1, t2, p.p0, p.p1, p.p2, pr, nr, eta))
    return SweepResult(
        scenario="n2_map",
        headers=("theta1_rad", "theta2_rad", "p0", "p1", "p2", "pr", "nr", "eta_c"),
        rows=rows,
        aggregates={"grid_points": points * points},
    )


# ---------------------------------------------------------------------------
# Multi-segment sweeps
# ---------------------------------------------------------------------------

def _thread_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _multi_probabilities(config: ExperimentConfig, n: int, thetas: np.ndarray) -> np.ndarray:
    kind = config.model_kind(default="lindblad_depol")
    if kind == "ideal":
        out = np.empty((thetas.shape[0], 3))
        s = beam_splitter(n)
        init = _initial_vector(config)
        for i, row in enumerate(thetas):
            v = s @ init
            for th in row:
                v = s @ (b_pulse(th) @ v)
            out[i] = np.abs(v) ** 2
        return out
    model = config.decoherence(default_preset="sample2")
    rho = dissipative_sweep(
        thetas,
        n,
        model,
        geometry=config.geometry(default_b_ns=112.0),
        depolarize=(kind == "lindblad_depol"),
        initial=_initial_rho(config, model),
    )
    return np.real(np.diagonal(rho, axis1=1, axis2=2))


def _run_multi_identical(config: ExperimentConfig) -> SweepResult:
    n_min = config.get("sweep.n_min", 1)
    n_max = config.get("sweep.n_max", 25)
    m_count = config.get("sweep.m", 180)
    theta_grid = np.arange(1, m_count + 1) * np.pi / m_count

    def one_n(n: int):
        thetas = np.repeat(theta_grid[:, None], n, axis=1)
        return n, _multi_probabilities(config, n, thetas)

    results = _thread_map(one_n, range(n_min, n_max + 1), config.threads)
    rows = []
    per_n = {}
    for n, probs in sorted(results):
        for m, (theta, p) in enumerate(zip(theta_grid, probs), start=1):
            rows.append((n, m, theta, p[0], p[1], p[2]))
        per_n[str(n)] = {
            "mean_p0": float(probs[:, 0].mean()),
            "std_p0": float(probs[:, 0].std()),
            "p0_at_pi": float(probs[-1, 0]),
        }
    return SweepResult(
        scenario="multi_identical",
        headers=("n", "m", "theta_spec", "p0", "p1", "p2"),
        rows=rows,
        aggregates={"per_n": per_n, "m": m_count},
    )


def _random_thetas(config: ExperimentConfig, n: int, m_count: int) -> np.ndarray:
    kind = config.get("sweep.random_kind", "uniform")
    thetas = np.empty((m_count, n))
    for m in range(1, m_count + 1):
        rng = np.random.default_rng(point_seed(config.rng_seed, n, m))
        if kind == "uniform":
            thetas[m - 1] = rng.uniform(0.0, np.pi, n)
        else:
            thetas[m - 1] = rng.integers(0, 2, n) * np.pi
    return thetas


def _run_multi_random(config: ExperimentConfig) -> SweepResult:
    n_min = config.get("sweep.n_min", 1)
    n_max = config.get("sweep.n_max", 25)
    m_count = config.get("sweep.m", 400)
    kind = config.get("sweep.random_kind", "uniform")

    def one_n(n: int):
        thetas = _random_thetas(config, n, m_count)
        return n, _multi_probabilities(config, n, thetas)

    results = _thread_map(one_n, range(n_min, n_max + 1), config.threads)
    rows = []
    per_n = {}
    for n, probs in sorted(results):
        for m, p in enumerate(probs, start=1):
            rows.append((n, m, kind, p[0], p[1], p[2]))
        per_n[str(n)] = {
            "mean_p0": float(probs[:, 0].mean()),
            "min_p0": float(probs[:, 0].min()),
            "max_p0": float(probs[:, 0].max()),
            "std_p0": float(probs[:, 0].std()),
        }
    return SweepResult(
        scenario="multi_random",
        headers=("n", "m", "theta_spec", "p0", "p1", "p2"),
        rows=rows,
        aggregates={"per_n": per_n, "m": m_count, "random_kind": kind},
    )


# ---------------------------------------------------------------------------
# Histogram, trajectories, comparisons, tables
# ---------------------------------------------------------------------------

def _run_histogram(config: ExperimentConfig) -> SweepResult:
    n = config.get("protocol.n", 1)
    theta = config.get("histogram.theta_pi", 1.0) * np.pi
    shots = config.get("histogram.shots", 1_000_000)
    thetas = config.thetas(n) or (theta,) * n
    probs = _small_n_probabilities(config, np.array([thetas]), n)[0] if n <= 2 else None
    if probs is None:
        p = _multi_probabilities(config, n, np.array([thetas]))[0]
        probs = OutcomeProbabilities(*p)
    counts = sample_shots(probs, shots, point_seed(config.rng_seed, n, 0))
    rows = [
        ("d0", counts.d0, counts.d0 / counts.total),
        ("d1", counts.d1, counts.d1 / counts.total),
        ("d2", counts.d2, counts.d2 / counts.total),
    ]
    return SweepResult(
        scenario="histogram",
        headers=("detector", "count", "fraction"),
        rows=rows,
        aggregates={
            "shots": shots,
            "theta_rad": list(thetas),
            "probabilities": list(probs.as_array()),
        },
    )


def _ideal_checkpoint_states(n: int, thetas, init: np.ndarray) -> list[PureState]:
    """Initial state plus the state after every applied pulse (2N + 2)."""
    s = beam_splitter(n)
    v = init
    states = [PureState(v)]
    v = s @ v
    states.append(PureState(v))
    for th in thetas:
        v = b_pulse(th) @ v
        states.append(PureState(v))
        v = s @ v
        states.append(PureState(v))
    return states


def _run_majorana_trajectory(config: ExperimentConfig) -> SweepResult:
    n = config.get("protocol.n", 25)
    thetas = config.thetas(n) or (np.pi,) * n
    kind = config.model_kind(default="ideal")
    rows = []

    def add(mode: str, states):
        for step, stars in enumerate(star_trajectory(states)):
            rows.append((step, mode, *stars.s1, *stars.s2))

    ideal_init = PureState.basis(0).vector if kind != "ideal" else _initial_vector(config)
    add("ideal", _ideal_checkpoint_states(n, thetas, ideal_init))
    if kind != "ideal":
        model = config.decoherence(default_preset="sample2" if n > 2 else "sample1")
        _, checkpoints = dissipative_sweep(
            np.array([thetas]),
            n,
            model,
            geometry=config.geometry(default_b_ns=112.0 if n > 2 else 56.0),
            depolarize=(kind == "lindblad_depol"),
            initial=_initial_rho(config, model),
            collect_checkpoints=True,
        )
        states = []
        for c in checkpoints:
            m = 0.5 * (c[0] + c[0].conj().T)
            states.append(DensityMatrix(m / np.trace(m).real).dominant_eigenvector())
        add("dissipative_dominant", states)
    return SweepResult(
        scenario="majorana_trajectory",
        headers=("step", "mode", "s1x", "s1y", "s1z", "s2x", "s2y", "s2z"),
        rows=rows,
        aggregates={"n": n, "model": kind},
    )


def _run_projective_compare(config: ExperimentConfig) -> SweepResult:
    n_min = config.get("sweep.n_min", 1)
    n_max = config.get("sweep.n_max", 25)
    rows = []
    for n in range(n_min, n_max + 1):
        thetas = [np.pi] * n
        p = run_coherent_ideal(ProtocolSpec(n, thetas))
        amps = amplitude_recursion(n, thetas)
        cum_coh = cumulative_absorption([g * g for _, _, g in amps[1:]])
        proj = run_projective(n, thetas)
        p_det, p_abs = projective_closed_form(n)
        cum_proj = cumulative_absorption(proj.per_segment_abs)
        rows.append(
            (
                n,
                p.p0,
                p.p2,
                efficiency(p.p0, p.p2),
                p_det,
                p_abs,
                efficiency(p_det, p_abs),
                cum_coh,
                cum_proj,
            )
        )
    return SweepResult(
        scenario="projective_compare",
        headers=(
            "n",
            "p0_coh",
            "p2_coh",
            "eta_c",
            "p_det_proj",
            "p_abs_proj",
            "eta_proj",
            "cum_abs_coh",
            "cum_abs_proj",
        ),
        rows=rows,
    )


def _run_coefficients(config: ExperimentConfig) -> SweepResult:
    n_min = config.get("sweep.n_min", 1)
    n_max = config.get("sweep.n_max", 4)
    rows = []
    for n in range(n_min, n_max + 1):
        tables = expansion_coefficients(n)
        for series, coeffs in zip(("amp0", "amp1", "amp2"), tables):
            for k, value in enumerate(coeffs):
                rows.append((n, series, k, value))
    return SweepResult(
        scenario="coefficients",
        headers=("n", "series", "k", "value"),
        rows=rows,
    )


def _run_quantized_check(config: ExperimentConfig) -> SweepResult:
    n_max_segments = config.get("sweep.n_max", 5)
    rows = []
    worst = 0.0
    for n in range(1, n_max_segments + 1):
        for photons in range(1, 5):
            coupling = FieldCoupling(g=np.pi / np.sqrt(photons), t_b=1.0)
            theta = coupling.g * np.sqrt(photons) * coupling.t_b
            quantum = run_single_mode(n, photons, coupling).qutrit_marginals()
            classical = run_coherent_ideal(ProtocolSpec(n, [theta] * n)).as_array()
            for level in range(3):
                diff = abs(quantum[level] - classical[level])
                worst = max(worst, diff)
                rows.append((n, photons, level, classical[level], quantum[level], diff))
    return SweepResult(
        scenario="quantized_check",
        headers=("n", "n_photons", "level", "p_semiclassical", "p_quantized", "abs_diff"),
        rows=rows,
        aggregates={"max_abs_diff": worst},
    )


_RUNNERS = {
    "n1_sweep": _run_n1_sweep,
    "n2_map": _run_n2_map,
    "multi_identical": _run_multi_identical,
    "multi_random": _run_multi_random,
    "histogram": _run_histogram,
    "majorana_trajectory": _run_majorana_trajectory,
    "projective_compare": _run_projective_compare,
    "coefficients": _run_coefficients,
    "quantized_check": _run_quantized_check,
}
