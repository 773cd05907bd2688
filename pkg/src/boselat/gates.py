"""Pulse synthesis and verification for the gate set {H, P_phi, C_phi}.

Logical basis conventions: one qubit ``(|0>_L, |1>_L)`` with ``|b>_L`` the
state with ``b`` particles in the a-mode; two qubits
``(|00>, |01>, |10>, |11>)`` labelled by ``(n_ai, n_aj)``.

Phase convention: evolution is ``exp(-i H t)``, so raising the energy of
``|1>_L`` by ``dE`` for a time ``T`` produces ``diag(1, exp(-i dE T))``.
:func:`synthesize_phase` lowers the energy to realize ``diag(1, exp(+i phi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegeneracyError, InfeasibleError, ShapeError
from .fock import enumerate_sector, number_expectations
from .model import (
    QubitArraySpec,
    SingleQubitParams,
    build_two_qubit_hamiltonian,
    degeneracy_residual,
    degenerate_gamma1,
    kerr_unitary,
    level_gap,
)
from .propagator import ControlledHamiltonian, evolve, schedule_hamiltonian, _step_count
from .pulses import (
    Constant,
    ControlSchedule,
    Pulse,
    Step,
    make_area_pulse,
    pair_slot,
    qubit_slot,
    validate_schedule,
)

ONE_QUBIT_LABELS = ("0", "1")
TWO_QUBIT_LABELS = ("00", "01", "10", "11")
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def rx(theta: float) -> np.ndarray:
    """``exp(-i theta sigma_x)``."""
    return math.cos(theta) * np.eye(2) - 1j * math.sin(theta) * SIGMA_X


def phase_gate(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phi)])


def hadamard() -> np.ndarray:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def not_gate() -> np.ndarray:
    return SIGMA_X.copy()


def cphase(phi: float) -> np.ndarray:
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * phi)])


def wrap_phase(x: float) -> float:
    """Map an angle to ``(-pi, pi]``."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y == -math.pi else y


def phase_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    return abs(wrap_phase(a - b))


def remove_global_phase(u: np.ndarray, rtol: float = 1e-9) -> tuple[np.ndarray, float]:
    """Divide out the phase of the first nonvanishing entry in row-major order."""
    u = np.asarray(u, dtype=complex)
    flat = u.ravel()
    cutoff = rtol * np.abs(flat).max() if flat.size else 0.0
    for x in flat:
        if abs(x) > cutoff:
            alpha = float(np.angle(x))
            return u * np.exp(-1j * alpha), alpha
    return u.copy(), 0.0


@dataclass(frozen=True)
class LogicalUnitary:
    matrix: np.ndarray
    labels: tuple[str, ...]

    @classmethod
    def of(cls, matrix) -> LogicalUnitary:
        m = np.asarray(matrix, dtype=complex)
        labels = {2: ONE_QUBIT_LABELS, 4: TWO_QUBIT_LABELS}.get(m.shape[0])
        if labels is None or m.shape != (m.shape[0], m.shape[0]):
            raise ValueError(f"logical unitaries are 2x2 or 4x4, got {m.shape}")
        return cls(m, labels)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SynthesisResult:
    gate: str
    schedule: ControlSchedule
    predicted_unitary: LogicalUnitary
    total_particles: int = 1
    predicted_phases: dict[str, float] = field(default_factory=dict)
    quantization: dict[str, int] = field(default_factory=dict)


def compose(results: Sequence[SynthesisResult]) -> np.ndarray:
    """Predicted unitary of a sequence applied first-to-last."""
    u = np.eye(results[0].predicted_unitary.dimension, dtype=complex)
    for r in results:
        u = r.predicted_unitary.matrix @ u
    return u


# ------------------------------------------------------------ single qubit


def default_baseline(total_particles: int, eps: float = 1.0) -> SingleQubitParams:
    """``eps1 = eps2 = eps``, ``gamma2 = 0`` and ``gamma1`` on the degeneracy line."""
    p = SingleQubitParams(eps1=eps, eps2=eps)
    return p.replace(gamma1=degenerate_gamma1(p, total_particles))


def _check_degenerate(params: SingleQubitParams, n: int) -> None:
    scale = max(abs(params.eps1), abs(params.eps2), abs(params.gamma1), abs(params.gamma2), 1.0) * max(n, 1) ** 2
    r = degeneracy_residual(params, n)
    if abs(r) > 1e-12 * scale:
        raise DegeneracyError(f"logical levels not degenerate: E1 - E0 = {r}")


def synthesize_rx(
    theta: float,
    duration: float,
    shape: str = "gaussian",
    params: SingleQubitParams | None = None,
    total_particles: int = 1,
    width_fraction: float | None = None,
) -> SynthesisResult:
    """Tunneling pulse realizing ``Rx(theta) = exp(-i theta sigma_x)`` up to phase.

    The tunneling term couples ``|n;0>`` and ``|n;1>`` with matrix element
    ``sqrt(n) tau``, so the pulse area is ``theta / sqrt(n)``.
    """
    n = total_particles
    if n < 1:
        raise ValueError("a logical |1> needs at least one particle")
    params = default_baseline(n) if params is None else params
    _check_degenerate(params, n)
    if not level_gap(params) > 0:
        raise DegeneracyError("gap 2(eps1 + eps2) must be positive")
    pulse = make_area_pulse(shape, theta / math.sqrt(n), duration, width_fraction)
    spec = QubitArraySpec((params.replace(tau=0.0),))
    schedule = ControlSchedule(duration, spec, {qubit_slot(0, "tau"): pulse})
    validate_schedule(schedule, "Rx")
    return SynthesisResult(
        "Rx", schedule, LogicalUnitary.of(rx(theta)), n, {"theta": theta, "tau_area": theta / math.sqrt(n)}
    )


def synthesize_not(duration: float, **kwargs) -> SynthesisResult:
    """``NOT = i Rx(pi/2)``."""
    r = synthesize_rx(math.pi / 2, duration, **kwargs)
    return SynthesisResult("NOT", r.schedule, LogicalUnitary.of(not_gate()), r.total_particles, r.predicted_phases)


def synthesize_phase(
    phi: float,
    duration: float,
    params: SingleQubitParams | None = None,
    total_particles: int = 1,
    shape: str = "step",
    width_fraction: float | None = None,
    bump: Pulse | None = None,
) -> SynthesisResult:
    """``gamma1`` pulse realizing ``P_phi = diag(1, exp(i phi))`` up to global phase.

    ``gamma1`` starts and ends on the degeneracy value
    ``gamma2 - eps1 + (2n - 1) eps2``, so the relative phase is frozen after
    the gate.  The excursion has area ``-phi``.  Any integrable ``bump`` that
    vanishes at both window edges may replace the built-in shapes.
    """
    if not duration > 0:
        raise ValueError("phase gate duration must be positive")
    n = total_particles
    params = default_baseline(n) if params is None else params
    if params.tau != 0:
        raise DegeneracyError("phase gates need tau = 0")
    _check_degenerate(params, n)
    edge = degenerate_gamma1(params, n)
    if bump is not None:
        area = bump.integral(0.0, duration)
        if abs(float(bump(0.0))) > 0 or abs(float(bump(duration))) > 0:
            raise ShapeError("bump must vanish at both window edges")
        if area == 0 and phi != 0:
            raise ShapeError("bump has zero area")
        excursion = bump.scaled(-phi / area) if phi else bump.scaled(0.0)
    elif phi == 0:
        excursion = Constant(0.0)
    elif shape in ("step", "piecewise_linear"):
        excursion = make_area_pulse(shape, -phi, duration, width_fraction)
    else:
        raise ShapeError(f"{shape!r} does not return gamma1 to its degeneracy value")
    gamma1 = excursion.shifted(edge)
    spec = QubitArraySpec((params,))
    schedule = ControlSchedule(duration, spec, {qubit_slot(0, "gamma1"): gamma1})
    validate_schedule(schedule, "Pphi")
    e0 = params.eps2 * n**2 + params.gamma2 * n
    return SynthesisResult(
        "Pphi", schedule, LogicalUnitary.of(phase_gate(phi)), n, {"phi": phi, "global": -duration * e0}
    )


def hadamard_sequence(
    phase_duration: float,
    rx_duration: float,
    params: SingleQubitParams | None = None,
    total_particles: int = 1,
    rx_shape: str = "gaussian",
    width_fraction: float | None = None,
) -> list[SynthesisResult]:
    """``[P_{pi/2}, Rx(pi/4), P_{pi/2}]`` in application order; composes to H up to phase."""
    p = synthesize_phase(math.pi / 2, phase_duration, params, total_particles)
    r = synthesize_rx(math.pi / 4, rx_duration, rx_shape, params, total_particles, width_fraction)
    return [p, r, p]


def _is_diagonal(h: ControlledHamiltonian) -> bool:
    mats = [h.static] + [m for _, m in h.terms]
    return all(np.count_nonzero(m - np.diag(np.diagonal(m))) == 0 for m in mats)


def _segment(h: ControlledHamiltonian, y: np.ndarray, duration: float, dt: float | None) -> np.ndarray:
    if _is_diagonal(h):
        # Commuting diagonal generator: integrate each energy exactly.
        phases = duration * np.diagonal(h.static).real
        for pulse, m in h.terms:
            phases = phases + pulse.integral(0.0, duration) * np.diagonal(m).real
        return np.exp(-1j * phases)[:, None] * y
    n = _step_count(h, duration, dt)
    return evolve(h, y, duration, n)[0]


def restrict(h: ControlledHamiltonian, rows: Sequence[int]) -> ControlledHamiltonian:
    """Project a controlled Hamiltonian onto the span of basis ``rows``."""
    idx = np.ix_(rows, rows)
    return ControlledHamiltonian(None, h.static[idx], [(p, m[idx]) for p, m in h.terms])


def simulate_single_qubit(
    results: Sequence[SynthesisResult], dt: float | None = None, two_level: bool = False
) -> tuple[np.ndarray, list[int]]:
    """Propagate both logical inputs through a sequence of single-qubit schedules.

    Returns the evolved columns on the full ``(n+1)``-dimensional sector (or
    on the logical block when ``two_level``) and the rows of ``|0>_L, |1>_L``.
    """
    n = results[0].total_particles
    sector = enumerate_sector(2, n)
    rows = [sector.position((0, n)), sector.position((1, n - 1))]
    if two_level:
        y = np.eye(2, dtype=complex)
        out_rows = [0, 1]
    else:
        y = np.stack([sector.basis_vector((0, n)), sector.basis_vector((1, n - 1))], axis=1)
        out_rows = rows
    for r in results:
        if r.total_particles != n:
            raise ValueError("all segments must act on the same particle number")
        h = schedule_hamiltonian(r.schedule, sector)
        if two_level:
            h = restrict(h, rows)
        y = _segment(h, y, r.schedule.duration, dt)
    return y, out_rows


# --------------------------------------------------------------- two qubit


def synthesize_cphase(m1: int, m2: int, eps: float, shape: str = "constant", width_fraction: float | None = None) -> SynthesisResult:
    """Constant-``mu`` exchange pulse giving a leakage-free controlled phase.

    Requires ``w1 T = m1 pi`` and ``w2 T = m2 pi`` with ``w1 = mu`` and
    ``w2 = sqrt(eps^2 + 4 mu^2)``, hence ``eps / mu = sqrt((m2/m1)^2 - 4)``.
    Modulo ``P_{-theta}`` on both qubits the gate is ``C_phi11``.  With
    ``shape='step'`` the same ``mu`` is applied on a centred sub-window and
    only ``theta`` changes.
    """
    if m1 < 1 or m2 < 1:
        raise InfeasibleError("quantization integers must be positive")
    if m2 <= 2 * m1:
        raise InfeasibleError(
            f"m2={m2} <= 2 m1={2 * m1}: eps/mu would not be a positive real (eps = 0 gives the identity)"
        )
    if not eps > 0:
        raise ValueError("eps must be positive")
    ratio = math.sqrt((m2 / m1) ** 2 - 4.0)
    mu = eps / ratio
    on_time = m1 * math.pi / mu
    if shape == "constant":
        duration = on_time
        pulse: Pulse = Constant(mu)
    elif shape == "step":
        wf = 0.5 if width_fraction is None else width_fraction
        if not 0 < wf <= 1:
            raise ShapeError("step width fraction must be in (0, 1]")
        duration = on_time / wf
        pulse = Step(mu, duration / 2 - on_time / 2, duration / 2 + on_time / 2)
    else:
        raise ShapeError("controlled-phase synthesis supports constant or step mu only")
    root = math.sqrt(m2**2 - 4 * m1**2)
    phi11 = math.pi * (m2 - root)
    theta = m1 * math.pi - eps * duration
    spec = QubitArraySpec((SingleQubitParams(eps1=eps), SingleQubitParams(eps1=eps)))
    schedule = ControlSchedule(duration, spec, {pair_slot(0, 1, "mu"): pulse})
    validate_schedule(schedule, "Cphi")
    return SynthesisResult(
        "Cphi",
        schedule,
        LogicalUnitary.of(cphase(phi11)),
        1,
        {
            "phi11": phi11 % (2 * math.pi),
            "phi11_unreduced": phi11,
            "theta_correction": theta % (2 * math.pi),
            "theta_unreduced": theta,
            "mu": mu,
            "eps": eps,
            "duration": duration,
        },
        {"m1": m1, "m2": m2},
    )


def synthesize_kerr(chi: float, duration: float) -> SynthesisResult:
    """Constant Kerr coupling; ``chi T = pi`` gives the controlled sign flip."""
    if not duration > 0:
        raise ValueError("duration must be positive")
    spec = QubitArraySpec((SingleQubitParams(), SingleQubitParams()))
    schedule = ControlSchedule(duration, spec, {pair_slot(0, 1, "chi"): Constant(chi)})
    validate_schedule(schedule, "Kerr")
    return SynthesisResult("Kerr", schedule, LogicalUnitary.of(kerr_unitary(chi, duration)), 1, {"chi": chi})


def two_qubit_space() -> tuple[list, list[int]]:
    """a-mode sectors ``n = 0, 1, 2`` stacked as one 6-dim space; rows of ``|00>, |01>, |10>, |11>``."""
    sectors = [enumerate_sector(2, n) for n in (0, 1, 2)]
    offsets = np.cumsum([0] + [s.dim for s in sectors])
    rows = []
    for state in ((0, 0), (0, 1), (1, 0), (1, 1)):
        n = sum(state)
        rows.append(int(offsets[n] + sectors[n].position(state)))
    return sectors, rows


def a_mode_hamiltonians(
    eps_i: float, eps_j: float, mu: Pulse | None = None, chi: Pulse | None = None
) -> list[ControlledHamiltonian]:
    """``eps_i n_i^2 + eps_j n_j^2 + mu(t) (a_i^+ a_j + h.c.) + chi(t) n_i n_j`` per a-mode sector."""
    out = []
    for sector in two_qubit_space()[0]:
        n_i, n_i2 = number_expectations(sector, 0)
        n_j, n_j2 = number_expectations(sector, 1)
        static = np.diag(eps_i * n_i2 + eps_j * n_j2).astype(complex)
        terms = []
        if mu is not None:
            terms.append((mu, build_two_qubit_hamiltonian(0.0, 1.0, sector.total_particles).matrix))
        if chi is not None:
            terms.append((chi, np.diag(n_i * n_j).astype(complex)))
        out.append(ControlledHamiltonian(sector, static, terms))
    return out


def schedule_a_mode_hamiltonians(schedule: ControlSchedule) -> list[ControlledHamiltonian]:
    """Two-qubit coupling Hamiltonians of a schedule (b-modes are spectators)."""
    base = schedule.baseline
    if base.qubit_count != 2:
        raise ValueError("two-qubit schedules need exactly two qubits")
    c = base.coupling(0, 1)
    mu = schedule.assignments.get(pair_slot(0, 1, "mu"), Constant(c.mu) if c.mu else None)
    chi = schedule.assignments.get(pair_slot(0, 1, "chi"), Constant(c.chi) if c.chi else None)
    return a_mode_hamiltonians(base.qubits[0].eps1, base.qubits[1].eps1, mu, chi)


def simulate_two_qubit(
    schedule: ControlSchedule, dt: float | None = None, record_stride: int | None = None
) -> tuple[np.ndarray, list[int], tuple | None]:
    """Propagate the four computational inputs over the a-mode sectors.

    Returns the ``6 x 4`` matrix of evolved columns on the stacked space of
    :func:`two_qubit_space`, the logical rows, and (if requested) the
    trajectory of the ``n = 2`` sector started in ``|11>``.
    """
    sectors, rows = two_qubit_space()
    hams = schedule_a_mode_hamiltonians(schedule)
    T = schedule.duration
    cols = np.zeros((6, 4), dtype=complex)
    offsets = np.cumsum([0] + [s.dim for s in sectors])
    trajectory = None
    for k, state in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        n = sum(state)
        sector, h = sectors[n], hams[n]
        psi0 = sector.basis_vector(state)
        stride = record_stride if state == (1, 1) else None
        if n == 0 or _is_diagonal(h) and not stride:
            psi = _segment(h, psi0[:, None], T, dt)[:, 0]
        else:
            steps = _step_count(h, T, dt)
            psi, traj = evolve(h, psi0, T, steps, stride)
            if stride:
                trajectory = traj
        cols[offsets[n] : offsets[n + 1], k] = psi
    return cols, rows, trajectory


# -------------------------------------------------------------- reporting


@dataclass(frozen=True)
class GateReport:
    realized: LogicalUnitary
    target: LogicalUnitary
    fidelity: float
    leakage: float
    global_phase_removed: float
    conditional_phase: float | None = None
    conditional_phase_unwrapped: float | None = None

    def as_dict(self) -> dict:
        def mat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        return {
            "fidelity": self.fidelity,
            "leakage": self.leakage,
            "global_phase_removed": self.global_phase_removed,
            "conditional_phase": self.conditional_phase,
            "conditional_phase_unwrapped": self.conditional_phase_unwrapped,
            "labels": list(self.realized.labels),
            "realized": mat(self.realized.matrix),
            "target": mat(self.target.matrix),
        }


def extract_logical_report(columns: np.ndarray, rows: Sequence[int], target, correction=None) -> GateReport:
    """Score evolved computational inputs against a target logical unitary.

    ``columns[:, k]`` is the image of the ``k``-th logical basis state and
    ``rows[k]`` its position in the full space.  ``correction`` (a logical
    unitary, e.g. from :func:`phase_correction`) is applied to the logical
    block before scoring.
    """
    columns = np.asarray(columns, dtype=complex)
    target = target if isinstance(target, LogicalUnitary) else LogicalUnitary.of(target)
    k = target.dimension
    if columns.shape[1] != k or len(rows) != k:
        raise ValueError(f"need {k} input columns and rows, got {columns.shape[1]} and {len(rows)}")
    block = columns[list(rows), :]
    if correction is not None:
        block = np.asarray(correction) @ block
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(block) ** 2)) / k)
    realized, alpha = remove_global_phase(block)
    fidelity = min(1.0, abs(np.trace(target.matrix.conj().T @ realized)) / k)
    cond = cond_raw = None
    if k == 4:
        a = np.angle(np.diagonal(block))
        cond_raw = float(a[3] - a[1] - a[2] + a[0])
        cond = wrap_phase(cond_raw)
    return GateReport(LogicalUnitary.of(realized), target, float(fidelity), leakage, alpha, cond, cond_raw)


def phase_correction(theta: float) -> np.ndarray:
    """``P_{-theta}`` on both qubits; removes the single-qubit phases of a controlled-phase run."""
    return np.kron(phase_gate(-theta), phase_gate(-theta))


def cphase_report(result: SynthesisResult, dt: float | None = None) -> GateReport:
    """Simulate a synthesized controlled-phase schedule and score it against ``C_phi11``."""
    cols, rows, _ = simulate_two_qubit(result.schedule, dt)
    corr = phase_correction(result.predicted_phases["theta_unreduced"])
    return extract_logical_report(cols, rows, result.predicted_unitary, corr)


def unwrap_phase(values) -> np.ndarray:
    """Continuous phase along a trajectory (nearest branch at every step)."""
    return np.unwrap(np.angle(np.asarray(values)))


def predicted_phase_gate_angle(schedule: ControlSchedule, total_particles: int) -> float:
    """``T (mean E1 - mean E0)`` from pulse averages of the on-site parameters."""
    p = schedule.averaged().qubits[0]
    return schedule.duration * degeneracy_residual(p, total_particles)


__all__ = [
    "GateReport",
    "LogicalUnitary",
    "SynthesisResult",
    "cphase_report",
    "compose",
    "cphase",
    "extract_logical_report",
    "hadamard",
    "hadamard_sequence",
    "phase_correction",
    "phase_gate",
    "remove_global_phase",
    "rx",
    "simulate_single_qubit",
    "simulate_two_qubit",
    "synthesize_cphase",
    "synthesize_kerr",
    "synthesize_not",
    "synthesize_phase",
    "synthesize_rx",
]
