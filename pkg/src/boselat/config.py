"""Scenario configuration files.

INI-style text read with :mod:`configparser`::

    [scenario]
    kind = gate            ; sector | spectrum | gate | fig2 | leakage_scan
    gate = H               ; H | NOT | Pphi | Cphi | Kerr
    particles = 30

    [numerics]
    dt = 0.001             ; optional step override
    stride = 10            ; trajectory stride (fig2)

    [qubit.0]
    eps1 = 1.0
    eps2 = 1.0
    gamma1 = 58.0
    gamma2 = 0.0

    [coupling.0-1]
    mu = 0.0
    chi = 0.0

    [pulse.q0.tau]
    shape = gaussian
    amplitude = 0.11
    center = 2.0
    width = 0.5

Pulse sections replace the synthesized pulse on that control slot.  Unknown
sections and keys are rejected.  :func:`dump_config` writes the effective
configuration with every default filled in; floats use ``repr`` so a dump
reloads bit-for-bit.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, ShapeError
from .model import Coupling, QubitArraySpec, SingleQubitParams
from .pulses import (
    PAIR_SLOTS,
    QUBIT_SLOTS,
    Constant,
    ControlSchedule,
    Gaussian,
    PiecewiseLinear,
    Pulse,
    Sampled,
    Step,
    parse_slot,
)

KINDS = ("sector", "spectrum", "gate", "fig2", "leakage_scan")
GATES = ("H", "NOT", "Pphi", "Cphi", "Kerr")

# key -> (type, default); None means required.
_SCENARIO_KEYS = {
    "sector": {"modes": (int, None), "particles": (int, None)},
    "spectrum": {"particles": (int, None)},
    "gate": {"gate": (str, None)},
    "fig2": {
        "m1": (int, 2),
        "m2": (int, 6),
        "eps": (float, 1.0),
        "subtract": (str, "caption"),
    },
    "leakage_scan": {
        "particles": (int, 30),
        "areas": (str, "0.7853981633974483"),
        "sigma_fracs": (str, "0.125"),
        "eps": (float, 2.0),
        "duration": (float, 4.0),
        "step_fraction": (float, 0.5),
    },
}

_GATE_KEYS = {
    "H": {
        "particles": (int, 1),
        "duration": (float, 4.0),
        "phase_duration": (float, 1.0),
        "shape": (str, "gaussian"),
        "width_fraction": (float, 0.125),
        "eps": (float, 2.0),
    },
    "NOT": {
        "particles": (int, 1),
        "duration": (float, 4.0),
        "shape": (str, "gaussian"),
        "width_fraction": (float, 0.125),
        "eps": (float, 2.0),
    },
    "Pphi": {
        "particles": (int, 1),
        "duration": (float, 1.0),
        "phi": (float, None),
        "shape": (str, "step"),
        "width_fraction": (float, 0.5),
        "eps": (float, 2.0),
    },
    "Cphi": {"m1": (int, 2), "m2": (int, 6), "eps": (float, 1.0), "shape": (str, "constant")},
    "Kerr": {"chi": (float, None), "duration": (float, None)},
}

_NUMERIC_KEYS = {"dt": float, "stride": int}

_PULSE_KEYS = {
    "constant": {"value": (float, None)},
    "step": {"value": (float, None), "t_on": (float, None), "t_off": (float, None), "baseline": (float, 0.0)},
    "gaussian": {"amplitude": (float, None), "center": (float, None), "width": (float, None), "baseline": (float, 0.0)},
    "piecewise_linear": {"knots": (str, None)},
    "sampled": {"file": (str, ""), "grid": (str, ""), "values": (str, "")},
}


@dataclass
class ScenarioConfig:
    kind: str
    settings: dict = field(default_factory=dict)
    qubits: dict[int, SingleQubitParams] = field(default_factory=dict)
    couplings: dict[tuple[int, int], Coupling] = field(default_factory=dict)
    pulses: dict[str, Pulse] = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    source_dir: Path | None = None

    def array_spec(self, qubit_count: int, default: SingleQubitParams | None = None) -> QubitArraySpec:
        if self.qubits and max(self.qubits) >= qubit_count:
            raise ConfigError(f"config defines qubit {max(self.qubits)} but the scenario has {qubit_count}")
        qubits = tuple(self.qubits.get(q, default or SingleQubitParams()) for q in range(qubit_count))
        return QubitArraySpec(qubits, dict(self.couplings))


def _convert(kind, raw: str, where: str):
    try:
        value = kind(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot read {raw!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{where}: value must be finite")
    return value


def _read_keys(section, schema: dict, where: str) -> dict:
    unknown = set(section) - set(schema)
    if unknown:
        raise ConfigError(f"[{where}]: unknown keys {sorted(unknown)}")
    out = {}
    for key, (kind, default) in schema.items():
        if key in section:
            out[key] = _convert(kind, section[key], f"[{where}] {key}")
        elif default is None:
            raise ConfigError(f"[{where}]: missing required key {key!r}")
        else:
            out[key] = default
    return out


def parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def pulse_from_section(section: dict, where: str, base_dir: Path | None = None) -> Pulse:
    section = dict(section)
    shape = section.pop("shape", None)
    if shape not in _PULSE_KEYS:
        raise ConfigError(f"[{where}]: shape must be one of {sorted(_PULSE_KEYS)}")
    v = _read_keys(section, _PULSE_KEYS[shape], where)
    try:
        if shape == "constant":
            return Constant(v["value"])
        if shape == "step":
            return Step(v["value"], v["t_on"], v["t_off"], v["baseline"])
        if shape == "gaussian":
            return Gaussian(v["amplitude"], v["center"], v["width"], v["baseline"])
        if shape == "piecewise_linear":
            knots = []
            for item in v["knots"].split(","):
                t, val = item.split(":")
                knots.append((float(t), float(val)))
            return PiecewiseLinear(tuple(knots))
        if v["file"]:
            path = Path(v["file"])
            if not path.is_absolute() and base_dir is not None:
                path = base_dir / path
            return Sampled.from_file(path)
        return Sampled(tuple(parse_floats(v["grid"])), tuple(parse_floats(v["values"])))
    except (ShapeError, ValueError, OSError) as exc:
        raise ConfigError(f"[{where}]: {exc}") from None


def _num(x) -> str:
    return repr(float(x))


def pulse_to_section(pulse: Pulse) -> dict[str, str]:
    if isinstance(pulse, Constant):
        return {"shape": "constant", "value": _num(pulse.value)}
    if isinstance(pulse, Step):
        return {
            "shape": "step",
            "value": _num(pulse.value),
            "t_on": _num(pulse.t_on),
            "t_off": _num(pulse.t_off),
            "baseline": _num(pulse.baseline),
        }
    if isinstance(pulse, Gaussian):
        return {
            "shape": "gaussian",
            "amplitude": _num(pulse.amplitude),
            "center": _num(pulse.center),
            "width": _num(pulse.width),
            "baseline": _num(pulse.baseline),
        }
    if isinstance(pulse, PiecewiseLinear):
        return {"shape": "piecewise_linear", "knots": ", ".join(f"{_num(t)}:{_num(v)}" for t, v in pulse.knots)}
    if isinstance(pulse, Sampled):
        return {
            "shape": "sampled",
            "grid": " ".join(_num(t) for t in pulse.grid),
            "values": " ".join(_num(v) for v in pulse.values),
        }
    raise TypeError(f"not a pulse: {pulse!r}")


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    return cp


def parse_config(text: str, source_dir: Path | None = None) -> ScenarioConfig:
    cp = _parser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if "scenario" not in cp:
        raise ConfigError("missing [scenario] section")
    scen = dict(cp["scenario"])
    kind = scen.pop("kind", None)
    if kind not in KINDS:
        raise ConfigError(f"[scenario] kind must be one of {KINDS}")
    schema = dict(_SCENARIO_KEYS[kind])
    if kind == "gate":
        gate = scen.get("gate")
        if gate not in GATES:
            raise ConfigError(f"[scenario] gate must be one of {GATES}")
        schema.update(_GATE_KEYS[gate])
    settings = _read_keys(scen, schema, "scenario")
    cfg = ScenarioConfig(kind, settings, source_dir=source_dir)

    for name in cp.sections():
        sec = dict(cp[name])
        if name == "scenario":
            continue
        if name == "numerics":
            unknown = set(sec) - set(_NUMERIC_KEYS)
            if unknown:
                raise ConfigError(f"[numerics]: unknown keys {sorted(unknown)}")
            cfg.numerics = {k: _convert(_NUMERIC_KEYS[k], v, f"[numerics] {k}") for k, v in sec.items()}
        elif name.startswith("qubit."):
            q = _convert(int, name[6:], f"[{name}]")
            values = _read_keys(sec, {k: (float, 0.0) for k in QUBIT_SLOTS}, name)
            cfg.qubits[q] = SingleQubitParams(**values)
        elif name.startswith("coupling."):
            try:
                i, j = (int(x) for x in name[9:].split("-"))
            except ValueError:
                raise ConfigError(f"[{name}]: expected coupling.I-J") from None
            if i == j:
                raise ConfigError(f"[{name}]: self-coupling")
            values = _read_keys(sec, {k: (float, 0.0) for k in PAIR_SLOTS}, name)
            cfg.couplings[(min(i, j), max(i, j))] = Coupling(**values)
        elif name.startswith("pulse."):
            slot = name[6:]
            try:
                parse_slot(slot)
            except Exception as exc:
                raise ConfigError(f"[{name}]: {exc}") from None
            cfg.pulses[slot] = pulse_from_section(sec, name, source_dir)
        else:
            raise ConfigError(f"unknown section [{name}]")
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config(text, path.parent)


def _fmt(value) -> str:
    return _num(value) if isinstance(value, float) else str(value)


def dump_config(cfg: ScenarioConfig) -> str:
    """Effective configuration text (defaults included, deterministic order)."""
    cp = _parser()
    cp["scenario"] = {"kind": cfg.kind, **{k: _fmt(v) for k, v in cfg.settings.items()}}
    if cfg.numerics:
        cp["numerics"] = {k: _fmt(v) for k, v in sorted(cfg.numerics.items())}
    for q in sorted(cfg.qubits):
        cp[f"qubit.{q}"] = {k: _num(v) for k, v in cfg.qubits[q].as_dict().items()}
    for (i, j) in sorted(cfg.couplings):
        c = cfg.couplings[(i, j)]
        cp[f"coupling.{i}-{j}"] = {"mu": _num(c.mu), "chi": _num(c.chi)}
    for slot in sorted(cfg.pulses):
        cp[f"pulse.{slot}"] = pulse_to_section(cfg.pulses[slot])
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def schedule_to_config(schedule: ControlSchedule, kind: str = "gate", settings: dict | None = None) -> ScenarioConfig:
    """Express a schedule as baseline qubit/coupling sections plus pulse sections."""
    base = schedule.baseline
    return ScenarioConfig(
        kind,
        dict(settings or {}),
        qubits=dict(enumerate(base.qubits)),
        couplings=dict(base.couplings),
        pulses=dict(schedule.assignments),
    )


def schedule_from_config(cfg: ScenarioConfig, duration: float, qubit_count: int) -> ControlSchedule:
    return ControlSchedule(duration, cfg.array_spec(qubit_count), dict(cfg.pulses))
