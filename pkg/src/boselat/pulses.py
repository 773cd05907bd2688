"""Time-dependent control parameters over a gate window ``[0, T]``.

Gate angles only depend on pulse integrals, so every pulse family exposes an
exact ``integral``.  Closed forms are used for all families except
:class:`Sampled`, which is integrated by composite Simpson.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np
from scipy.special import erf

from .errors import ScheduleError, ShapeError, WindowError
from .model import Coupling, QubitArraySpec, SingleQubitParams

SIMPSON_RTOL = 1e-12


def _as_float_array(t):
    return np.asarray(t, dtype=float)


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, t):
        return np.full_like(_as_float_array(t), self.value, dtype=float)[()]

    def integral(self, t0: float, t1: float) -> float:
        return self.value * (t1 - t0)

    def scaled(self, k: float) -> Constant:
        return Constant(k * self.value)

    def shifted(self, c: float) -> Constant:
        return Constant(self.value + c)


@dataclass(frozen=True)
class Step:
    """``value`` on ``[t_on, t_off)``, ``baseline`` elsewhere (right-continuous)."""

    value: float
    t_on: float
    t_off: float
    baseline: float = 0.0

    def __post_init__(self):
        if self.t_on > self.t_off:
            raise ShapeError(f"step needs t_on <= t_off, got {self.t_on} > {self.t_off}")

    def __call__(self, t):
        t = _as_float_array(t)
        return np.where((t >= self.t_on) & (t < self.t_off), self.value, self.baseline)[()]

    def integral(self, t0: float, t1: float) -> float:
        overlap = max(0.0, min(t1, self.t_off) - max(t0, self.t_on))
        return self.baseline * (t1 - t0) + (self.value - self.baseline) * overlap

    def scaled(self, k: float) -> Step:
        return Step(k * self.value, self.t_on, self.t_off, k * self.baseline)

    def shifted(self, c: float) -> Step:
        return Step(self.value + c, self.t_on, self.t_off, self.baseline + c)


@dataclass(frozen=True)
class Gaussian:
    """``baseline + amplitude * exp(-(t - center)^2 / (2 width^2))``; ``width`` is the standard deviation."""

    amplitude: float
    center: float
    width: float
    baseline: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise ShapeError(f"gaussian width must be > 0, got {self.width}")

    def __call__(self, t):
        t = _as_float_array(t)
        return (self.baseline + self.amplitude * np.exp(-((t - self.center) ** 2) / (2 * self.width**2)))[()]

    def integral(self, t0: float, t1: float) -> float:
        s = self.width * math.sqrt(2.0)
        bump = 0.5 * math.sqrt(math.pi) * s * (erf((t1 - self.center) / s) - erf((t0 - self.center) / s))
        return self.baseline * (t1 - t0) + self.amplitude * bump

    def scaled(self, k: float) -> Gaussian:
        return Gaussian(k * self.amplitude, self.center, self.width, k * self.baseline)

    def shifted(self, c: float) -> Gaussian:
        return Gaussian(self.amplitude, self.center, self.width, self.baseline + c)


def _check_increasing(times: np.ndarray, what: str) -> None:
    if times.ndim != 1 or times.size < 2:
        raise ShapeError(f"{what} needs at least two points")
    if np.any(np.diff(times) <= 0):
        raise ShapeError(f"{what} times must be strictly increasing")


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation between ``knots`` ``((t0, v0), (t1, v1), ...)``; held constant outside."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        knots = tuple((float(t), float(v)) for t, v in self.knots)
        _check_increasing(np.array([t for t, _ in knots]), "piecewise_linear")
        object.__setattr__(self, "knots", knots)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.knots])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.knots])

    def __call__(self, t):
        return np.interp(_as_float_array(t), self.times, self.values)[()]

    def integral(self, t0: float, t1: float) -> float:
        ts = self.times
        inner = ts[(ts > t0) & (ts < t1)]
        nodes = np.concatenate(([t0], inner, [t1]))
        vals = self(nodes)
        return float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(nodes)))

    def scaled(self, k: float) -> PiecewiseLinear:
        return PiecewiseLinear(tuple((t, k * v) for t, v in self.knots))

    def shifted(self, c: float) -> PiecewiseLinear:
        return PiecewiseLinear(tuple((t, v + c) for t, v in self.knots))


@dataclass(frozen=True)
class Sampled:
    """Tabulated pulse, linearly interpolated between grid points."""

    grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(t) for t in self.grid)
        values = tuple(float(v) for v in self.values)
        if len(grid) != len(values):
            raise ShapeError("grid and values differ in length")
        _check_increasing(np.array(grid), "sampled")
        if not all(math.isfinite(v) for v in values):
            raise ShapeError("sampled values must be finite")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_file(cls, path) -> Sampled:
        """Load a two-column ``time value`` text file."""
        data = np.loadtxt(path, ndmin=2)
        if data.shape[1] != 2:
            raise ShapeError(f"{path}: expected two columns, found {data.shape[1]}")
        return cls(tuple(data[:, 0]), tuple(data[:, 1]))

    def __call__(self, t):
        return np.interp(_as_float_array(t), self.grid, self.values)[()]

    def integral(self, t0: float, t1: float) -> float:
        grid = np.array(self.grid)
        nodes = np.concatenate(([t0], grid[(grid > t0) & (grid < t1)], [t1]))
        previous = None
        for _ in range(8):
            mids = 0.5 * (nodes[1:] + nodes[:-1])
            h = np.diff(nodes)
            estimate = float(np.sum(h / 6.0 * (self(nodes[:-1]) + 4.0 * self(mids) + self(nodes[1:]))))
            if previous is not None and abs(estimate - previous) <= SIMPSON_RTOL * max(abs(estimate), 1e-300):
                return estimate
            previous = estimate
            nodes = np.sort(np.concatenate((nodes, mids)))
        return estimate

    def scaled(self, k: float) -> Sampled:
        return Sampled(self.grid, tuple(k * v for v in self.values))

    def shifted(self, c: float) -> Sampled:
        return Sampled(self.grid, tuple(v + c for v in self.values))


Pulse = Union[Constant, Step, Gaussian, PiecewiseLinear, Sampled]
SHAPE_FAMILIES = ("constant", "step", "gaussian", "piecewise_linear", "sampled")
DEFAULT_WIDTH_FRACTION = {
    "constant": 1.0,
    "step": 0.5,
    "gaussian": 1.0 / 8.0,
    "piecewise_linear": 1.0,
    "sampled": 1.0 / 8.0,
}


def sample(pulse: Pulse, t: float, duration: float | None = None) -> float:
    """Pulse value at ``t``; raises :class:`WindowError` outside ``[0, duration]``."""
    if duration is not None and not 0.0 <= t <= duration:
        raise WindowError(f"t={t} outside gate window [0, {duration}]")
    return float(pulse(t))


def average(pulse: Pulse, duration: float) -> float:
    """``(1/T) * integral_0^T pulse(t) dt``."""
    if not duration > 0:
        raise ValueError("duration must be positive")
    return pulse.integral(0.0, duration) / duration


def _linear_antiderivative(times: np.ndarray, values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Exact antiderivative (from ``times[0]``) of the linear interpolant, held constant outside."""
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (values[1:] + values[:-1]) * np.diff(times))))
    tc = np.clip(t, times[0], times[-1])
    k = np.clip(np.searchsorted(times, tc, side="right") - 1, 0, times.size - 2)
    h = tc - times[k]
    slope = (values[k + 1] - values[k]) / (times[k + 1] - times[k])
    inside = cum[k] + values[k] * h + 0.5 * slope * h**2
    return inside + values[0] * np.minimum(t - times[0], 0.0) + values[-1] * np.maximum(t - times[-1], 0.0)


def cell_averages(pulse: Pulse, edges) -> np.ndarray:
    """Exact averages of ``pulse`` over the cells ``[edges[k], edges[k+1]]`` (vectorized).

    Used by the propagator instead of midpoint samples, so jumps inside a
    step are weighted by the fraction of the step they cover.
    """
    edges = np.asarray(edges, dtype=float)
    t0, t1 = edges[:-1], edges[1:]
    width = t1 - t0
    if isinstance(pulse, Constant):
        return np.full(width.shape, pulse.value)
    if isinstance(pulse, Step):
        overlap = np.maximum(0.0, np.minimum(t1, pulse.t_off) - np.maximum(t0, pulse.t_on))
        return pulse.baseline + (pulse.value - pulse.baseline) * overlap / width
    if isinstance(pulse, Gaussian):
        s = pulse.width * math.sqrt(2.0)
        bump = 0.5 * math.sqrt(math.pi) * s * (erf((t1 - pulse.center) / s) - erf((t0 - pulse.center) / s))
        return pulse.baseline + pulse.amplitude * bump / width
    if isinstance(pulse, PiecewiseLinear):
        times, values = pulse.times, pulse.values
    elif isinstance(pulse, Sampled):
        times, values = np.array(pulse.grid), np.array(pulse.values)
    else:
        raise ShapeError(f"no cell average for {type(pulse).__name__}")
    return np.diff(_linear_antiderivative(times, values, edges)) / width


def make_area_pulse(
    family: str, target_area: float, duration: float, width_fraction: float | None = None
) -> Pulse:
    """Pulse of the given family whose integral over ``[0, T]`` is ``target_area``.

    Non-constant shapes are centred on ``T/2``.  ``width_fraction`` is the
    Gaussian standard deviation, the step length, or the triangle base, in
    units of ``T``.
    """
    if not math.isfinite(target_area):
        raise ShapeError("target area must be finite")
    if not duration > 0:
        raise ShapeError("duration must be positive")
    if family not in SHAPE_FAMILIES:
        raise ShapeError(f"unknown shape family {family!r}")
    wf = DEFAULT_WIDTH_FRACTION[family] if width_fraction is None else width_fraction
    if not wf > 0:
        raise ShapeError(f"width fraction must be > 0, got {wf}")
    T, c = duration, duration / 2.0
    w = wf * T
    if family == "constant":
        return Constant(target_area / T)
    if family == "step":
        if wf > 1:
            raise ShapeError("step longer than the gate window")
        return Step(target_area / w, c - w / 2, c + w / 2)
    if family == "piecewise_linear":
        if wf > 1:
            raise ShapeError("triangle base longer than the gate window")
        knots = [(0.0, 0.0), (c - w / 2, 0.0), (c, 2.0 * target_area / w), (c + w / 2, 0.0), (T, 0.0)]
        deduped = [k for i, k in enumerate(knots) if i == 0 or k[0] > knots[i - 1][0]]
        return PiecewiseLinear(tuple(deduped))
    unit = Gaussian(1.0, c, w)
    if family == "gaussian":
        return unit.scaled(target_area / unit.integral(0.0, T))
    grid = np.linspace(0.0, T, 401)
    raw = Sampled(tuple(grid), tuple(unit(grid)))
    return raw.scaled(target_area / raw.integral(0.0, T))


# ---------------------------------------------------------------- schedules

QUBIT_SLOTS = ("eps1", "eps2", "gamma1", "gamma2", "tau")
PAIR_SLOTS = ("mu", "chi")


def qubit_slot(q: int, name: str) -> str:
    return f"q{q}.{name}"


def pair_slot(i: int, j: int, name: str) -> str:
    i, j = min(i, j), max(i, j)
    return f"c{i}-{j}.{name}"


def parse_slot(slot: str) -> tuple[str, tuple[int, ...], str]:
    """Split ``'q0.tau'`` / ``'c0-1.mu'`` into ``(kind, indices, parameter)``."""
    try:
        owner, name = slot.split(".")
        if owner.startswith("q") and name in QUBIT_SLOTS:
            return "qubit", (int(owner[1:]),), name
        if owner.startswith("c") and name in PAIR_SLOTS:
            i, j = (int(x) for x in owner[1:].split("-"))
            if i == j:
                raise ValueError
            return "pair", (min(i, j), max(i, j)), name
    except ValueError:
        pass
    raise ScheduleError(f"malformed control slot {slot!r}")


@dataclass(frozen=True)
class ControlSchedule:
    """Pulses assigned to control slots over ``[0, duration]``.

    Slots not present in ``assignments`` keep their ``baseline`` value.
    """

    duration: float
    baseline: QubitArraySpec
    assignments: Mapping[str, Pulse] = field(default_factory=dict)

    def __post_init__(self):
        if not self.duration > 0:
            raise ScheduleError("schedule duration must be positive")
        normalized = {}
        for slot, pulse in dict(self.assignments).items():
            kind, idx, name = parse_slot(slot)
            if max(idx) >= self.baseline.qubit_count:
                raise ScheduleError(f"slot {slot} refers to a missing qubit")
            key = qubit_slot(idx[0], name) if kind == "qubit" else pair_slot(*idx, name)
            normalized[key] = pulse
        object.__setattr__(self, "assignments", dict(sorted(normalized.items())))

    def _spec_from(self, value_of) -> QubitArraySpec:
        qubits = []
        for q, p in enumerate(self.baseline.qubits):
            values = p.as_dict()
            for name in QUBIT_SLOTS:
                pulse = self.assignments.get(qubit_slot(q, name))
                if pulse is not None:
                    values[name] = value_of(pulse)
            qubits.append(SingleQubitParams(**values))
        pairs = dict(self.baseline.couplings)
        for slot, pulse in self.assignments.items():
            kind, idx, name = parse_slot(slot)
            if kind == "pair":
                c = pairs.get(idx, Coupling())
                pairs[idx] = Coupling(**{**c.__dict__, name: value_of(pulse)})
        return QubitArraySpec(tuple(qubits), pairs)

    def snapshot(self, t: float) -> QubitArraySpec:
        """Parameter values at time ``t``."""
        if not 0.0 <= t <= self.duration:
            raise WindowError(f"t={t} outside gate window [0, {self.duration}]")
        return self._spec_from(lambda pulse: float(pulse(t)))

    def averaged(self) -> QubitArraySpec:
        """Time-averaged parameters; the Hamiltonian is affine in all of them."""
        return self._spec_from(lambda pulse: average(pulse, self.duration))

    def time_dependent_slots(self) -> list[str]:
        return [s for s, p in self.assignments.items() if not isinstance(p, Constant)]

    def value_range(self, slot: str, probes: int = 257) -> tuple[float, float]:
        """Min and max of a slot over the window (baseline value if unassigned)."""
        pulse = self.assignments.get(slot)
        if pulse is None:
            kind, idx, name = parse_slot(slot)
            if kind == "qubit":
                v = getattr(self.baseline.qubits[idx[0]], name)
            else:
                v = getattr(self.baseline.coupling(*idx), name)
            return v, v
        vals = np.asarray(pulse(np.linspace(0.0, self.duration, probes)))
        return float(vals.min()), float(vals.max())

    def all_slots(self) -> list[str]:
        slots = [qubit_slot(q, n) for q in range(self.baseline.qubit_count) for n in QUBIT_SLOTS]
        M = self.baseline.qubit_count
        slots += [pair_slot(i, j, n) for i in range(M) for j in range(i + 1, M) for n in PAIR_SLOTS]
        return slots


# Which parameters may vary in time for each gate; everything else is held.
TIME_DEPENDENCE = {
    "Rx": {"tau"},
    "Pphi": {"eps1", "eps2", "gamma1", "gamma2"},
    "Cphi": {"mu", "chi"},
    "Kerr": {"chi"},
}
GATE_FAMILY = {"H": "Rx", "NOT": "Rx", "Rx": "Rx", "Pphi": "Pphi", "Cphi": "Cphi", "Kerr": "Kerr"}


def validate_schedule(schedule: ControlSchedule, gate: str) -> None:
    """Check a schedule against the control pattern of its gate type.

    ``H``/``NOT``/``Rx``: only ``tau`` varies, ``mu = chi = 0``.
    ``Pphi``: ``tau = mu = chi = 0``; only on-site terms vary.
    ``Cphi``: ``tau = 0``, ``eps1 != 0``; ``mu``/``chi`` may vary.
    ``Kerr``: ``tau = mu = 0``; only ``chi`` varies.
    """
    try:
        family = GATE_FAMILY[gate]
    except KeyError:
        raise ScheduleError(f"unknown gate type {gate!r}") from None
    allowed = TIME_DEPENDENCE[family]
    for slot in schedule.time_dependent_slots():
        if parse_slot(slot)[2] not in allowed:
            raise ScheduleError(f"{gate}: {slot} must be constant")

    def must_vanish(name: str) -> None:
        for slot in schedule.all_slots():
            if parse_slot(slot)[2] == name and schedule.value_range(slot) != (0.0, 0.0):
                raise ScheduleError(f"{gate}: {slot} must be zero")

    if family in ("Rx",):
        must_vanish("mu")
        must_vanish("chi")
    if family in ("Pphi", "Cphi", "Kerr"):
        must_vanish("tau")
    if family == "Pphi":
        must_vanish("mu")
        must_vanish("chi")
    if family == "Kerr":
        must_vanish("mu")
    if family == "Cphi":
        for q in range(schedule.baseline.qubit_count):
            lo, hi = schedule.value_range(qubit_slot(q, "eps1"))
            if lo == 0.0 and hi == 0.0:
                raise ScheduleError("Cphi: the a-mode self-interaction eps1 must be nonzero")
