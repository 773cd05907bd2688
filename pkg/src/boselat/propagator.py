"""Time evolution on Fock sectors.

The main integrator multiplies exact short-time propagators
``exp(-i H_k dt)``, each obtained from a Hermitian eigendecomposition, so
every step is unitary to machine precision.  ``H_k`` is the midpoint value
``H(t_k + dt/2)`` for a plain callable; for a :class:`ControlledHamiltonian`
each pulse enters through its exact average over the step, which agrees
with the midpoint rule to second order for smooth pulses and handles jumps
that fall inside a step.  Closed-form
solutions for the two-qubit coupling sectors and a classical RK4 integrator
are provided as independent references.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegeneracyError, LayoutError, NonHermitianError, StepSizeError
from .fock import FockSector, enumerate_sector
from .model import (
    Coupling,
    HermitianOperator,
    QubitArraySpec,
    SingleQubitParams,
    build_lattice_hamiltonian,
    degeneracy_residual,
    level_gap,
    logical_occupation,
)
from .pulses import ControlSchedule, Pulse, average, cell_averages, qubit_slot

NORM_TOL = 1e-9
STEP_NORM = 0.05
MIN_STEPS = 200
MAX_STEPS = 50_000_000
CHUNK = 2048


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitude vector on a sector basis."""

    sector: FockSector
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.sector.dim,):
            raise ValueError(f"expected {self.sector.dim} amplitudes, got shape {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} differs from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def fock(cls, sector: FockSector, occupation) -> QuantumState:
        return cls(sector, sector.basis_vector(occupation))

    def amplitude(self, occupation) -> complex:
        return complex(self.amplitudes[self.sector.position(occupation)])

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def logical_state(bits, particles_per_qubit=1) -> QuantumState:
    """Fock state encoding ``|bits>_L``; ``logical_state([0] * M)`` prepares ``|00...0>_L``."""
    occ = logical_occupation(bits, particles_per_qubit)
    sector = enumerate_sector(len(occ), sum(occ))
    return QuantumState.fock(sector, occ)


def a_mode_distribution(state: QuantumState) -> dict[tuple[int, ...], float]:
    """Probability of each pattern of a-mode occupations (projective readout)."""
    occ = state.sector.occupations
    if occ.shape[1] % 2:
        raise LayoutError("dual-rail readout needs an even number of modes")
    pops = state.populations
    out: dict[tuple[int, ...], float] = {}
    for row, p in zip(occ[:, 0::2], pops):
        key = tuple(int(x) for x in row)
        out[key] = out.get(key, 0.0) + float(p)
    return dict(sorted(out.items()))


def measure_logical(state: QuantumState) -> tuple[dict[tuple[int, ...], float], float]:
    """Logical outcome probabilities and the leaked remainder."""
    dist = a_mode_distribution(state)
    logical = {k: p for k, p in dist.items() if all(x in (0, 1) for x in k)}
    return logical, max(0.0, 1.0 - sum(logical.values()))


class ControlledHamiltonian:
    """``H(t) = H_static + sum_k f_k(t) H_k`` with pulses ``f_k``.

    Callable like any ``hamiltonian_at`` and additionally evaluates whole
    time grids at once via :meth:`stack`.
    """

    def __init__(self, sector: FockSector, static: np.ndarray, terms: Sequence[tuple[Pulse, np.ndarray]] = ()):
        self.sector = sector
        self.static = np.asarray(static, dtype=complex)
        self.terms = [(p, np.asarray(h, dtype=complex)) for p, h in terms]

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def __call__(self, t: float) -> np.ndarray:
        h = self.static.copy()
        for pulse, op in self.terms:
            h += float(pulse(t)) * op
        return h

    def stack(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        out = np.broadcast_to(self.static, (times.size,) + self.static.shape).copy()
        for pulse, op in self.terms:
            out += np.asarray(pulse(times), dtype=float).reshape(-1, 1, 1) * op
        return out

    def cell_stack(self, edges: np.ndarray) -> np.ndarray:
        """Hamiltonians with every pulse replaced by its exact average over each cell."""
        edges = np.asarray(edges, dtype=float)
        out = np.broadcast_to(self.static, (edges.size - 1,) + self.static.shape).copy()
        for pulse, op in self.terms:
            out += cell_averages(pulse, edges).reshape(-1, 1, 1) * op
        return out


def schedule_hamiltonian(schedule: ControlSchedule, sector: FockSector) -> ControlledHamiltonian:
    """Lattice Hamiltonian of a schedule, decomposed by linearity in the controls."""
    base = schedule.baseline

    def spec_with(values: dict[str, float], keep_baseline: bool) -> QubitArraySpec:
        qubits = []
        for q, p in enumerate(base.qubits):
            d = p.as_dict() if keep_baseline else {k: 0.0 for k in p.as_dict()}
            for name in d:
                slot = qubit_slot(q, name)
                if slot in values:
                    d[name] = values[slot]
            qubits.append(SingleQubitParams(**d))
        pairs = {}
        for i in range(base.qubit_count):
            for j in range(i + 1, base.qubit_count):
                c = base.coupling(i, j) if keep_baseline else Coupling()
                d = dict(c.__dict__)
                for name in d:
                    slot = f"c{i}-{j}.{name}"
                    if slot in values:
                        d[name] = values[slot]
                pairs[(i, j)] = Coupling(**d)
        return QubitArraySpec(tuple(qubits), pairs)

    zeros = {slot: 0.0 for slot in schedule.assignments}
    static = build_lattice_hamiltonian(spec_with(zeros, True), sector).matrix
    terms = []
    for slot, pulse in schedule.assignments.items():
        unit = build_lattice_hamiltonian(spec_with({slot: 1.0}, False), sector).matrix
        terms.append((pulse, unit))
    return ControlledHamiltonian(sector, static, terms)


@dataclass(frozen=True)
class PropagationResult:
    final_state: QuantumState
    trajectory: tuple[np.ndarray, np.ndarray] | None
    unitarity_drift: float
    step_count: int


def _matrix(h) -> np.ndarray:
    return h.matrix if isinstance(h, HermitianOperator) else np.asarray(h, dtype=complex)


def _stack(hamiltonian_at, times: np.ndarray) -> np.ndarray:
    if hasattr(hamiltonian_at, "stack"):
        return hamiltonian_at.stack(times)
    return np.array([_matrix(hamiltonian_at(float(t))) for t in times])


def default_step_count(hamiltonian_at, duration: float, probes: int = 257) -> int:
    """Steps such that ``||H(t) - D_0||_max * dt <= 0.05`` (at least ``MIN_STEPS``).

    ``D_0`` is the diagonal of ``H(0)``.  A static diagonal only contributes
    phases that each exact step reproduces, so it is left out of the norm.
    """
    hs = _stack(hamiltonian_at, np.linspace(0.0, duration, probes))
    d0 = np.diag(np.diagonal(hs[0]))
    scale = float(np.abs(hs - d0).max()) if hs.size else 0.0
    return max(MIN_STEPS, math.ceil(duration * scale / STEP_NORM))


def _step_count(hamiltonian_at, duration: float, dt: float | None) -> int:
    if dt is None:
        n = default_step_count(hamiltonian_at, duration)
    else:
        if not dt > 0:
            raise StepSizeError(f"dt must be positive, got {dt}")
        ratio = duration / dt
        n = math.ceil(ratio - 1e-9 * ratio) if math.isfinite(ratio) else MAX_STEPS + 1
    if n > MAX_STEPS:
        raise StepSizeError(f"{n} steps exceeds the limit of {MAX_STEPS}")
    return max(n, 1)


def evolve(
    hamiltonian_at: Callable,
    initial: np.ndarray,
    duration: float,
    n_steps: int,
    record_stride: int | None = None,
) -> tuple[np.ndarray, tuple[np.ndarray, np.ndarray] | None]:
    """Apply the stepped propagator to a vector or to the columns of a matrix."""
    y = np.array(initial, dtype=complex)
    dt = duration / n_steps
    rec_t: list[float] = []
    rec_y: list[np.ndarray] = []
    if record_stride:
        rec_t.append(0.0)
        rec_y.append(y.copy())

    constant = getattr(hamiltonian_at, "is_constant", False)
    if constant:
        w, v = np.linalg.eigh(_matrix(hamiltonian_at(0.0)))
        u_const = (v * np.exp(-1j * w * dt)) @ v.conj().T

    for start in range(0, n_steps, CHUNK):
        stop = min(start + CHUNK, n_steps)
        if constant:
            us = None
        else:
            if hasattr(hamiltonian_at, "cell_stack"):
                hs = hamiltonian_at.cell_stack(np.arange(start, stop + 1) * dt)
            else:
                hs = _stack(hamiltonian_at, (np.arange(start, stop) + 0.5) * dt)
            scale = np.abs(hs).max()
            if np.abs(hs - hs.conj().transpose(0, 2, 1)).max() > 1e-12 * max(scale, 1e-300):
                raise NonHermitianError("Hamiltonian is not Hermitian on the time grid")
            w, v = np.linalg.eigh(hs)
            us = np.einsum("kij,kj,klj->kil", v, np.exp(-1j * w * dt), v.conj())
        for k in range(stop - start):
            y = (u_const if constant else us[k]) @ y
            step = start + k + 1
            if record_stride and (step % record_stride == 0 or step == n_steps):
                rec_t.append(step * dt)
                rec_y.append(y.copy())
    trajectory = (np.array(rec_t), np.array(rec_y)) if record_stride else None
    return y, trajectory


def propagate(
    hamiltonian_at: Callable,
    psi0: QuantumState,
    duration: float,
    dt: float | None = None,
    record_stride: int | None = None,
) -> PropagationResult:
    """Propagate ``psi0`` over ``[0, duration]``.

    Parameters
    ----------
    hamiltonian_at : callable
        ``t -> HermitianOperator`` or array on ``psi0.sector``.  A
        :class:`ControlledHamiltonian` is evaluated in vectorized batches.
    dt : float, optional
        Step size; the grid is uniform with ``ceil(T / dt)`` steps.  Defaults
        to :func:`default_step_count`.
    record_stride : int, optional
        Record ``(t, amplitudes)`` every ``record_stride`` steps, plus the
        endpoints.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    probe = hamiltonian_at(0.0)
    if isinstance(probe, HermitianOperator) and probe.sector.basis != psi0.sector.basis:
        raise LayoutError("Hamiltonian and state live on different sectors")
    if _matrix(probe).shape != (psi0.sector.dim,) * 2:
        raise LayoutError("Hamiltonian dimension does not match the state")
    n = _step_count(hamiltonian_at, duration, dt)
    y, traj = evolve(hamiltonian_at, psi0.amplitudes, duration, n, record_stride)
    drift = abs(float(np.linalg.norm(y)) - 1.0)
    return PropagationResult(QuantumState(psi0.sector, y), traj, drift, n)


def propagator_columns(
    hamiltonian_at: Callable, sector: FockSector, inputs: Sequence, duration: float, dt: float | None = None
) -> np.ndarray:
    """Evolved images of the Fock states ``inputs`` as columns of a ``dim x k`` matrix."""
    y0 = np.stack([sector.basis_vector(s) for s in inputs], axis=1)
    n = _step_count(hamiltonian_at, duration, dt)
    y, _ = evolve(hamiltonian_at, y0, duration, n)
    return y


def propagate_rk4(hamiltonian_at: Callable, psi0: np.ndarray, duration: float, n_steps: int) -> np.ndarray:
    """Classical fourth-order Runge-Kutta for ``d psi/dt = -i H(t) psi`` (reference integrator)."""
    y = np.array(psi0, dtype=complex)
    dt = duration / n_steps
    for k in range(n_steps):
        t = k * dt
        h0 = _matrix(hamiltonian_at(t))
        hm = _matrix(hamiltonian_at(t + dt / 2))
        h1 = _matrix(hamiltonian_at(t + dt))
        k1 = -1j * (h0 @ y)
        k2 = -1j * (hm @ (y + dt / 2 * k1))
        k3 = -1j * (hm @ (y + dt / 2 * k2))
        k4 = -1j * (h1 @ (y + dt * k3))
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


# ------------------------------------------------------------ closed forms


def analytic_n1(eps: float, mu_pulse: Pulse, duration: float) -> np.ndarray:
    """Exact propagator of the one-excitation coupling sector.

    ``exp(-i eps T) (cos(w T) - i sigma_x sin(w T))`` with ``w`` the average of
    ``mu`` over the window; exact for any integrable ``mu(t)`` because the
    generator commutes with itself at all times.
    """
    theta = average(mu_pulse, duration) * duration
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return np.exp(-1j * eps * duration) * (np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * sx)


def analytic_n2_constant(eps: float, mu: float, t) -> np.ndarray:
    """Amplitudes on ``(|20>, |11>, |02>)`` at time ``t`` starting from ``|11>``.

    Constant ``mu``; ``omega2 = sqrt(eps^2 + 4 mu^2)``.  Vectorized over ``t``
    (result shape ``t.shape + (3,)``).
    """
    t = np.asarray(t, dtype=float)
    w2 = math.sqrt(eps**2 + 4.0 * mu**2)
    sin_over_w = t * np.sinc(w2 * t / np.pi)  # sin(w2 t) / w2, finite at w2 = 0
    phase = np.exp(-3j * eps * t)
    amp11 = phase * (np.cos(w2 * t) + 1j * eps * sin_over_w)
    amp_side = -phase * 1j * mu * math.sqrt(2.0) * sin_over_w
    return np.stack([amp_side, amp11, amp_side], axis=-1)


# ------------------------------------------------------- two-level reduction


@dataclass(frozen=True)
class TwoLevelCheck:
    population_leaked: float
    effective_angle: float
    step_count: int


def single_qubit_hamiltonian(params: SingleQubitParams, total_particles: int, pulses: dict[str, Pulse] | None = None,
                             duration: float = 1.0) -> ControlledHamiltonian:
    """Single-qubit sector Hamiltonian with optional pulses on ``eps1``..``tau``."""
    spec = QubitArraySpec((params,))
    sched = ControlSchedule(duration, spec, {qubit_slot(0, k): p for k, p in (pulses or {}).items()})
    return schedule_hamiltonian(sched, enumerate_sector(2, total_particles))


def logical_block(columns: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    return np.asarray(columns)[list(rows), :]


def rx_angle(block: np.ndarray) -> float:
    """Rotation angle of a 2x2 block ``~ e^{ia} exp(-i theta sigma_x)``, in ``[-pi/2, pi/2]``."""
    diag = 0.5 * (abs(block[0, 0]) + abs(block[1, 1]))
    off = 0.5 * (abs(block[0, 1]) + abs(block[1, 0]))
    theta = math.atan2(off, diag)
    if diag > 0 and off > 0:
        sign = np.sign((1j * block[1, 0] * np.conj(block[0, 0])).real)
        theta *= sign if sign else 1.0
    return theta


def check_two_level_reduction(
    params: SingleQubitParams,
    total_particles: int,
    tau_pulse: Pulse,
    duration: float,
    dt: float | None = None,
) -> TwoLevelCheck:
    """Full-sector dynamics of a tunneling pulse started in the logical subspace.

    Returns the population outside ``span{|n;0>, |n;1>}`` at ``T`` (averaged
    over both logical inputs) and the rotation angle of the logical block.
    """
    n = total_particles
    scale = max(abs(params.eps1), abs(params.eps2), abs(params.gamma1), abs(params.gamma2), 1.0) * max(n, 1) ** 2
    if abs(degeneracy_residual(params, n)) > 1e-12 * scale:
        raise DegeneracyError(f"residual {degeneracy_residual(params, n)} != 0")
    if not level_gap(params) > 0:
        raise DegeneracyError("gap 2(eps1 + eps2) must be positive")
    h = single_qubit_hamiltonian(params.replace(tau=0.0), n, {"tau": tau_pulse}, duration)
    sector = h.sector
    inputs = [(0, n), (1, n - 1)]
    cols = propagator_columns(h, sector, inputs, duration, dt)
    rows = [sector.position(s) for s in inputs]
    block = logical_block(cols, rows)
    leaked = 1.0 - float(np.sum(np.abs(block) ** 2)) / 2.0
    steps = _step_count(h, duration, dt)
    return TwoLevelCheck(max(leaked, 0.0), rx_angle(block), steps)


def a_mode_space() -> list[FockSector]:
    """Sectors ``n = 0, 1, 2`` of two a-modes (the two-qubit coupling space)."""
    return [enumerate_sector(2, n) for n in (0, 1, 2)]
