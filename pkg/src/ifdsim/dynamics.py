"""Time-dependent Hamiltonians, unitary and dissipative propagation.

Internally hbar = 1: Hamiltonians are expressed in rad/s and times in
seconds. Temperature enters only once, when converting transition
frequencies to thermal occupation numbers.

Dissipation follows the transition-pairwise master equation

    drho/dt = -i[H, rho]
              + Gamma_{1->0} rho_11 (s00 - s11) + Gamma_{0->1} rho_00 (s11 - s00)
              + Gamma_{2->1} rho_22 (s11 - s22) + Gamma_{1->2} rho_11 (s22 - s11)
              - sum_{k != l} gamma_kl rho_kl |k><l|

with thermal up/down rates tied by detailed balance and off-diagonal
decay rates gamma_kl built from the measured transition dephasings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar as HBAR, k as K_B

from . import NumericToleranceError
from .pulses import SampledWaveform
from .su3 import DensityMatrix, Operator3

# Keep the per-step rotation small enough that classic RK4 stays well
# below the 1e-6 unitarity/trace guarantees (error ~ (amp*dt/2)^5/120).
MAX_PHASE_PER_STEP = 0.05

_S01 = np.zeros((3, 3), dtype=complex)
_S01[0, 1] = 1.0
_S12 = np.zeros((3, 3), dtype=complex)
_S12[1, 2] = 1.0
_N1 = np.diag([0.0, 1.0, 0.0]).astype(complex)
_N2 = np.diag([0.0, 0.0, 1.0]).astype(complex)


# ---------------------------------------------------------------------------
# Decoherence model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecoherenceModel:
    """Transition frequencies, zero-temperature decay and dephasing rates.

    Frequencies are angular (rad/s), rates are plain 1/s, temperature is
    in kelvin.
    """

    omega01: float
    omega12: float
    gamma10: float
    gamma21: float
    gphi10: float
    gphi21: float
    gphi02: float
    temperature: float

    def __post_init__(self):
        if self.omega01 <= 0 or self.omega12 <= 0:
            raise ValueError("transition frequencies must be positive")
        for name in ("gamma10", "gamma21", "gphi10", "gphi21", "gphi02"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


# Device parameter sets from standard characterisation measurements.
SAMPLE_1 = DecoherenceModel(
    omega01=2 * np.pi * 5.01e9,
    omega12=2 * np.pi * 4.65e9,
    gamma10=0.72e6,
    gamma21=1.55e6,
    gphi10=0.40e6,
    gphi21=0.60e6,
    gphi02=1.00e6,
    temperature=0.050,
)

SAMPLE_2 = DecoherenceModel(
    omega01=2 * np.pi * 7.20e9,
    omega12=2 * np.pi * 6.85e9,
    gamma10=0.29e6,
    gamma21=1.15e6,
    gphi10=0.18e6,
    gphi21=1.82e6,
    gphi02=1.70e6,
    temperature=0.050,
)

PRESETS = {"sample1": SAMPLE_1, "sample2": SAMPLE_2}


@dataclass(frozen=True)
class ThermalRates:
    """Thermal excitation/decay rates plus off-diagonal decay rates (1/s)."""

    up01: float
    down10: float
    up12: float
    down21: float
    gamma_od_01: float
    gamma_od_12: float
    gamma_od_02: float


def _occupation(omega: float, temperature: float) -> float:
    if temperature == 0:
        return 0.0
    return 1.0 / np.expm1(HBAR * omega / (K_B * temperature))


def thermal_rates(model: DecoherenceModel) -> ThermalRates:
    """Detailed-balance rates at the model temperature.

    Occupation numbers n = 1/(exp(hbar w / kB T) - 1) give up rates
    n * Gamma and down rates (n + 1) * Gamma per transition.
    """
    n01 = _occupation(model.omega01, model.temperature)
    n12 = _occupation(model.omega12, model.temperature)
    up01 = n01 * model.gamma10
    down10 = (n01 + 1.0) * model.gamma10
    up12 = n12 * model.gamma21
    down21 = (n12 + 1.0) * model.gamma21
    return ThermalRates(
        up01=up01,
        down10=down10,
        up12=up12,
        down21=down21,
        gamma_od_01=(down10 + up01) / 2.0 + model.gphi10,
        gamma_od_12=(up12 + down21) / 2.0 + model.gphi21,
        gamma_od_02=(down10 + down21 + up01 + up12) / 2.0 + model.gphi02,
    )


def thermal_state(model: DecoherenceModel) -> DensityMatrix:
    """Diagonal Boltzmann state over E = (0, hbar w01, hbar (w01 + w12))."""
    if model.temperature == 0:
        return DensityMatrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    energies = HBAR * np.array([0.0, model.omega01, model.omega01 + model.omega12])
    weights = np.exp(-energies / (K_B * model.temperature))
    weights /= weights.sum()
    return DensityMatrix(np.diag(weights).astype(complex))


def _dissipator_arrays(rates: ThermalRates) -> tuple[np.ndarray, np.ndarray]:
    """(off-diagonal damping matrix, population flow matrix)."""
    damping = np.array(
        [
            [0.0, rates.gamma_od_01, rates.gamma_od_02],
            [rates.gamma_od_01, 0.0, rates.gamma_od_12],
            [rates.gamma_od_02, rates.gamma_od_12, 0.0],
        ]
    )
    popflow = np.array(
        [
            [-rates.up01, rates.down10, 0.0],
            [rates.up01, -(rates.down10 + rates.up12), rates.down21],
            [0.0, rates.up12, -rates.down21],
        ]
    )
    return damping, popflow


def lindblad_pairwise_rhs(rho: np.ndarray, h: np.ndarray, rates: ThermalRates) -> np.ndarray:
    """Right-hand side of the pairwise master equation.

    Works on a single 3x3 matrix or on a (..., 3, 3) batch.
    """
    damping, popflow = _dissipator_arrays(rates)
    return _pairwise_rhs(np.asarray(rho, dtype=complex), np.asarray(h, dtype=complex), damping, popflow)


def _pairwise_rhs(rho, h, damping, popflow):
    out = -1j * (h @ rho - rho @ h)
    out -= damping * rho
    pops = np.einsum("kl,...ll->...k", popflow.astype(complex), rho)
    idx = np.arange(3)
    out[..., idx, idx] += pops
    return out


# ---------------------------------------------------------------------------
# General Lindblad form and the per-level dephasing decomposition
# ---------------------------------------------------------------------------

def per_level_dephasing(model: DecoherenceModel) -> np.ndarray:
    """Per-level dephasing weights (c0, c1, c2) for the jump-form equation.

    Chosen so that sum_k (c_k/2) D[|k><k|] together with the four thermal
    relaxation channels reproduces the pairwise off-diagonal rates
    exactly. Individual level dephasings are not measurable on their own
    and the solution may have negative entries; in that case the jump
    form is an algebraic rewriting rather than a CPTP decomposition and
    the pairwise form remains the physical one.
    """
    r = thermal_rates(model)
    # Off-diagonal decay produced by the relaxation channels alone.
    relax01 = (r.down10 + r.up01 + r.up12) / 2.0
    relax12 = (r.down10 + r.up12 + r.down21) / 2.0
    relax02 = (r.up01 + r.down21) / 2.0
    target = 4.0 * np.array(
        [
            r.gamma_od_01 - relax01,
            r.gamma_od_12 - relax12,
            r.gamma_od_02 - relax02,
        ]
    )
    # (c_k + c_l)/4 per pair (01, 12, 02).
    pairs = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]])
    return np.linalg.solve(pairs, target)


def _lindblad_dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    opd = op.conj().T
    anti = opd @ op
    return op @ rho @ opd - 0.5 * (anti @ rho + rho @ anti)


def lindblad_general_rhs(rho: np.ndarray, h: np.ndarray, model: DecoherenceModel) -> np.ndarray:
    """Jump-operator form: -i[H, rho] + relaxation + per-level dephasing.

    Agrees with :func:`lindblad_pairwise_rhs` entrywise by construction
    of :func:`per_level_dephasing`.
    """
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    r = thermal_rates(model)
    out = -1j * (h @ rho - rho @ h)
    jumps = (
        (r.down10, _S01),  # |0><1|
        (r.up01, _S01.conj().T),
        (r.down21, _S12),  # |1><2|
        (r.up12, _S12.conj().T),
    )
    for rate, op in jumps:
        if rate != 0.0:
            out += rate * _lindblad_dissipator(op, rho)
    for level, weight in enumerate(per_level_dephasing(model)):
        proj = np.zeros((3, 3), dtype=complex)
        proj[level, level] = 1.0
        out += 0.5 * weight * _lindblad_dissipator(proj, rho)
    return out


# ---------------------------------------------------------------------------
# Drive Hamiltonian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DriveHamiltonianSpec:
    """Drives on the 0-1 and 1-2 transitions over a common time span."""

    wave01: SampledWaveform | None = None
    wave12: SampledWaveform | None = None
    phi01: float = -np.pi / 2
    phi12: float = -np.pi / 2
    delta01: float = 0.0
    delta12: float = 0.0

    def __post_init__(self):
        if self.wave01 is not None and self.wave12 is not None:
            if abs(self.wave01.dt - self.wave12.dt) > 1e-18:
                raise ValueError("waveforms must share the sampling step")

    def span(self) -> tuple[float, float]:
        starts, ends = [], []
        for w in (self.wave01, self.wave12):
            if w is not None:
                starts.append(w.t_start)
                ends.append(w.t_end)
        if not starts:
            return 0.0, 0.0
        return min(starts), max(ends)

    def dt(self) -> float:
        for w in (self.wave01, self.wave12):
            if w is not None:
                return w.dt
        return 1e-9

    def peak(self) -> float:
        peaks = [np.max(np.abs(w.samples)) for w in (self.wave01, self.wave12) if w is not None]
        return max(peaks) if peaks else 0.0


def drive_generator(transition: str, phase: float = -np.pi / 2) -> Operator3:
    """Dimensionless drive term (e^{i phase} |k><l| + h.c.)/2 for unit amplitude."""
    base = _S01 if transition == "01" else _S12
    return 0.5 * (np.exp(1j * phase) * base + np.exp(-1j * phase) * base.conj().T)


def hamiltonian_at(spec: DriveHamiltonianSpec, t: float) -> Operator3:
    """RWA Hamiltonian at time t (rad/s, hbar = 1).

    Outside the waveform span the drive terms vanish but the detuning
    terms remain.
    """
    h = np.zeros((3, 3), dtype=complex)
    if spec.wave01 is not None:
        amp = float(spec.wave01.value_at(t))
        h += amp * drive_generator("01", spec.phi01)
    if spec.wave12 is not None:
        amp = float(spec.wave12.value_at(t))
        h += amp * drive_generator("12", spec.phi12)
    h += spec.delta01 * _N1 + (spec.delta01 + spec.delta12) * _N2
    return h


def _substeps_for(peak: float, dt: float) -> int:
    if peak <= 0:
        return 1
    return max(1, int(np.ceil(peak * dt / MAX_PHASE_PER_STEP)))


def _rk4(state, hfun, t0: float, dt: float, n_steps: int, rhs):
    """Classic RK4 on d(state)/dt = rhs(state, hfun(t))."""
    t = t0
    for _ in range(n_steps):
        h1 = hfun(t)
        h2 = hfun(t + 0.5 * dt)
        h3 = hfun(t + dt)
        k1 = rhs(state, h1)
        k2 = rhs(state + 0.5 * dt * k1, h2)
        k3 = rhs(state + 0.5 * dt * k2, h2)
        k4 = rhs(state + dt * k3, h3)
        state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return state


def propagate_schrodinger(spec: DriveHamiltonianSpec, dt: float | None = None) -> Operator3:
    """Unitary generated by the drive, assembled column by column.

    Integrates i dU/dt = H(t) U with RK4 on the sampling grid (finer
    substeps are taken automatically for strong drives) and verifies
    unitarity to 1e-6.
    """
    t0, t1 = spec.span()
    base_dt = spec.dt() if dt is None else dt
    n_sub = _substeps_for(spec.peak(), base_dt)
    step = base_dt / n_sub
    n_steps = max(1, int(round((t1 - t0) / step)))

    def rhs(u, h):
        return -1j * (h @ u)

    u = _rk4(np.eye(3, dtype=complex), lambda t: hamiltonian_at(spec, t), t0, step, n_steps, rhs)
    defect = np.max(np.abs(u.conj().T @ u - np.eye(3)))
    if defect > 1e-6:
        raise NumericToleranceError(f"propagated unitary defect {defect:.2e} exceeds 1e-6; reduce dt")
    return u


def propagate_lindblad(
    rho0: DensityMatrix, spec: DriveHamiltonianSpec, model: DecoherenceModel, dt: float | None = None
) -> DensityMatrix:
    """Dissipative evolution of rho0 across the drive span."""
    t0, t1 = spec.span()
    base_dt = spec.dt() if dt is None else dt
    n_sub = _substeps_for(spec.peak(), base_dt)
    step = base_dt / n_sub
    n_steps = max(1, int(round((t1 - t0) / step)))
    rates = thermal_rates(model)
    damping, popflow = _dissipator_arrays(rates)

    def rhs(rho, h):
        return _pairwise_rhs(rho, h, damping, popflow)

    rho = _rk4(np.array(rho0.matrix, dtype=complex), lambda t: hamiltonian_at(spec, t), t0, step, n_steps, rhs)
    drift = abs(np.trace(rho).real - 1.0)
    if drift > 1e-6:
        raise NumericToleranceError(f"trace drift {drift:.2e} exceeds 1e-6; reduce dt")
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)


def lindblad_segment_batch(
    rho: np.ndarray,
    amplitudes: np.ndarray,
    transition: str,
    tau: float,
    tau_c: float,
    rates: ThermalRates,
    dt: float = 1e-9,
    phase: float = -np.pi / 2,
) -> np.ndarray:
    """Propagate a batch of density matrices through one drive segment.

    rho has shape (..., 3, 3) and amplitudes broadcasts against the
    leading dimensions. The analytic super-Gaussian envelope is used at
    the RK4 stage times; points whose peak amplitude needs finer steps
    are integrated in substep groups so each result is independent of
    how the batch is composed.
    """
    rho = np.asarray(rho, dtype=complex)
    amps = np.broadcast_to(np.asarray(amplitudes, dtype=float), rho.shape[:-2]).copy()
    gen = drive_generator(transition, phase)
    damping, popflow = _dissipator_arrays(rates)
    n_base = max(1, int(round(2.0 * tau_c / dt)))

    def rhs(r, h):
        return _pairwise_rhs(r, h, damping, popflow)

    out = np.empty_like(rho)
    subcounts = np.array([_substeps_for(a, dt) for a in amps.ravel()]).reshape(amps.shape)
    for n_sub in np.unique(subcounts):
        mask = subcounts == n_sub
        block = rho[mask]
        a = amps[mask][:, None, None]
        step = dt / n_sub

        def hfun(t):
            return (a * np.exp(-0.5 * (t / tau) ** 4)) * gen

        out[mask] = _rk4(block, hfun, -tau_c, step, n_base * int(n_sub), rhs)
    return out


# ---------------------------------------------------------------------------
# Depolarizing channel
# ---------------------------------------------------------------------------

def depolarizing_kraus(epsilon: float) -> list[Operator3]:
    """The ten Kraus operators of the qutrit depolarizing channel."""
    from .su3 import gellmann

    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    root6 = np.sqrt(epsilon / 6.0)
    root = np.sqrt(epsilon)
    ops = [root6 * gellmann(i) for i in (1, 2, 4, 5, 6, 7)]
    ops.append(root / 3.0 * gellmann(3))
    ops.append(root / 6.0 * (np.sqrt(3) * gellmann(8) - gellmann(3)))
    ops.append(root / 6.0 * (np.sqrt(3) * gellmann(8) + gellmann(3)))
    ops.append(np.sqrt(1.0 - 8.0 * epsilon / 9.0) * np.eye(3, dtype=complex))
    return ops


def apply_depolarizing(rho: DensityMatrix, epsilon: float) -> DensityMatrix:
    """rho -> epsilon I/3 + (1 - epsilon) rho."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    return DensityMatrix(epsilon * np.eye(3) / 3.0 + (1.0 - epsilon) * rho.matrix)


# Mixing probability of a pi probe pulse, from a best fit to long sequences.
DEPOL_EPSILON_PER_PI = 1.8e-3


def epsilon_for_theta(theta: float) -> float:
    """Depolarizing probability of a probe pulse, linear in its strength."""
    if theta < 0:
        raise ValueError(f"theta must be non-negative, got {theta}")
    return min(1.0, DEPOL_EPSILON_PER_PI * theta / np.pi)


def operator_distance_2norm(u: Operator3, v: Operator3) -> float:
    """Largest singular value of u - v (at most 2 for unitaries)."""
    return float(np.linalg.svd(np.asarray(u) - np.asarray(v), compute_uv=False)[0])
