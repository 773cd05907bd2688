"""Named experiments with deterministic file output.

Every scenario writes CSV (one header line, floats as ``%.16e``) and/or JSON
(sorted keys) so repeated runs are byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gates
from .config import ScenarioConfig, dump_config, parse_floats, schedule_to_config
from .errors import BoselatError, ConfigError, InfeasibleError, ToleranceError
from .fock import enumerate_sector
from .gates import (
    GateReport,
    SynthesisResult,
    extract_logical_report,
    simulate_single_qubit,
    simulate_two_qubit,
)
from .model import build_single_qubit_hamiltonian, degeneracy_residual, energy_levels, kerr_unitary
from .propagator import analytic_n2_constant, check_two_level_reduction
from .pulses import Constant, ControlSchedule, make_area_pulse, validate_schedule

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_TOLERANCE = 4

UNITARITY_TOL = 1e-9
ORACLE_TOL = 1e-8
SUBTRACTIONS = {"caption": 2, "derivation": 3}


@dataclass
class ScenarioOutcome:
    status: int
    files: list[Path] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    message: str = ""


def fmt(x: float) -> str:
    return format(float(x), ".16e")


def write_csv(path: Path, header: list[str], rows) -> Path:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path: Path, data: dict) -> Path:
    path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")
    return path


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def _check_unitarity(columns: np.ndarray) -> float:
    drift = float(np.abs(np.linalg.norm(columns, axis=0) - 1.0).max())
    if drift > UNITARITY_TOL:
        raise ToleranceError(f"unitarity drift {drift:.3e} exceeds {UNITARITY_TOL}")
    return drift


# ------------------------------------------------------------------ sector


def run_sector(cfg: ScenarioConfig, out: Path | None) -> ScenarioOutcome:
    sector = enumerate_sector(cfg.settings["modes"], cfg.settings["particles"])
    lines = [f"dimension {sector.dim}"] + [" ".join(map(str, s)) for s in sector.basis]
    files = []
    if out is not None:
        header = [f"n{k}" for k in range(sector.mode_count)]
        files.append(write_csv(out / "sector.csv", ["index"] + header, [(k,) + s for k, s in enumerate(sector.basis)]))
    return ScenarioOutcome(EXIT_OK, files, {"dimension": sector.dim}, "\n".join(lines))


# ---------------------------------------------------------------- spectrum


def run_spectrum(cfg: ScenarioConfig, out: Path | None) -> ScenarioOutcome:
    n = cfg.settings["particles"]
    params = cfg.array_spec(1).qubits[0]
    h = build_single_qubit_hamiltonian(params, n)
    eig = np.linalg.eigvalsh(h.matrix)
    summary = {
        "particles": n,
        "degeneracy_residual": degeneracy_residual(params, n),
        "gap_formula": 2.0 * (params.eps1 + params.eps2),
        "eigenvalues": [float(e) for e in eig],
    }
    if params.tau == 0:
        levels = energy_levels(params, n)
        summary["fock_levels"] = [float(e) for e in levels]
        if n >= 2:
            summary["gap_levels"] = float(levels[2] - levels[1])
    files = []
    if out is not None:
        files.append(write_json(out / "spectrum.json", summary))
    msg = "\n".join(f"{k}: {v}" for k, v in summary.items())
    return ScenarioOutcome(EXIT_OK, files, summary, msg)


# ------------------------------------------------------------------- gates


def _override(result: SynthesisResult, cfg: ScenarioConfig, family: str) -> SynthesisResult:
    if not cfg.pulses:
        return result
    s = result.schedule
    assignments = {**s.assignments, **cfg.pulses}
    schedule = ControlSchedule(s.duration, s.baseline, assignments)
    validate_schedule(schedule, family)
    return dataclasses.replace(result, schedule=schedule)


def _single_qubit_params(cfg: ScenarioConfig, n: int):
    return cfg.qubits[0] if 0 in cfg.qubits else gates.default_baseline(n, cfg.settings["eps"])


def run_gate(cfg: ScenarioConfig, out: Path | None) -> ScenarioOutcome:
    s = cfg.settings
    gate = s["gate"]
    dt = cfg.numerics.get("dt")
    extra: dict = {}
    if gate in ("H", "NOT", "Pphi"):
        n = s["particles"]
        params = _single_qubit_params(cfg, n)
        if gate == "H":
            seq = gates.hadamard_sequence(s["phase_duration"], s["duration"], params, n, s["shape"], s["width_fraction"])
            seq[1] = _override(seq[1], cfg, "Rx")
            target = gates.hadamard()
            main = seq[1]
        elif gate == "NOT":
            main = _override(gates.synthesize_not(s["duration"], shape=s["shape"], params=params, total_particles=n,
                                                  width_fraction=s["width_fraction"]), cfg, "NOT")
            seq, target = [main], gates.not_gate()
        else:
            main = _override(gates.synthesize_phase(s["phi"], s["duration"], params, n, s["shape"], s["width_fraction"]),
                             cfg, "Pphi")
            seq, target = [main], gates.phase_gate(s["phi"])
        cols, rows = simulate_single_qubit(seq, dt)
        drift = _check_unitarity(cols)
        report = extract_logical_report(cols, rows, target)
        cols2, rows2 = simulate_single_qubit(seq, dt, two_level=True)
        extra["two_level_fidelity"] = extract_logical_report(cols2, rows2, target).fidelity
        extra["predicted_fidelity"] = extract_logical_report(gates.compose(seq), [0, 1], target).fidelity
    elif gate == "Cphi":
        main = _override(gates.synthesize_cphase(s["m1"], s["m2"], s["eps"], s["shape"]), cfg, "Cphi")
        cols, rows, _ = simulate_two_qubit(main.schedule, dt)
        drift = _check_unitarity(cols)
        ph = main.predicted_phases
        report = extract_logical_report(cols, rows, main.predicted_unitary, gates.phase_correction(ph["theta_unreduced"]))
        mu = main.schedule.assignments.get("c0-1.mu")
        if isinstance(mu, Constant):
            oracle = analytic_n2_constant(ph["eps"], mu.value, main.schedule.duration)
            mismatch = float(np.abs(cols[3:6, 3] - oracle).max())
            extra["oracle_mismatch_n2"] = mismatch
            if mismatch > ORACLE_TOL:
                raise ToleranceError(f"n=2 oracle mismatch {mismatch:.3e}")
        extra["leakage_02_20"] = float(abs(cols[3, 3]) ** 2 + abs(cols[5, 3]) ** 2)
    else:
        main = _override(gates.synthesize_kerr(s["chi"], s["duration"]), cfg, "Kerr")
        cols, rows, _ = simulate_two_qubit(main.schedule, dt)
        drift = _check_unitarity(cols)
        report = extract_logical_report(cols, rows, kerr_unitary(s["chi"], s["duration"]))

    summary = {
        "gate": gate,
        "report": report.as_dict(),
        "unitarity_drift": drift,
        "predicted_phases": main.predicted_phases,
        "quantization": main.quantization,
        **extra,
    }
    summary = _jsonable(summary)
    files = []
    if out is not None:
        files.append(write_json(out / "report.json", summary))
        sched_cfg = schedule_to_config(main.schedule, "gate", cfg.settings)
        sched_cfg.numerics = dict(cfg.numerics)
        (out / "schedule.ini").write_text(dump_config(sched_cfg))
        files.append(out / "schedule.ini")
    msg = _report_text(gate, report)
    return ScenarioOutcome(EXIT_OK, files, summary, msg)


def _report_text(gate: str, r: GateReport) -> str:
    lines = [f"gate {gate}", f"fidelity {r.fidelity:.12f}", f"leakage {r.leakage:.3e}"]
    if r.conditional_phase is not None:
        lines.append(f"conditional_phase {r.conditional_phase:.12f} rad")
    return "\n".join(lines)


# -------------------------------------------------------------------- fig2


def run_fig2(cfg: ScenarioConfig, out: Path | None) -> ScenarioOutcome:
    s = cfg.settings
    if s["subtract"] not in SUBTRACTIONS:
        raise ConfigError(f"subtract must be one of {sorted(SUBTRACTIONS)}")
    result = gates.synthesize_cphase(s["m1"], s["m2"], s["eps"])
    eps = s["eps"]
    stride = cfg.numerics.get("stride", 1)
    cols, rows, (ts, ys) = simulate_two_qubit(result.schedule, cfg.numerics.get("dt"), record_stride=stride)
    _check_unitarity(cols)
    k = SUBTRACTIONS[s["subtract"]]
    sub = np.exp(1j * k * eps * ts)[:, None]
    amps = ys * sub
    if np.any(np.diff(ts) <= 0):
        raise ToleranceError("trajectory time grid is not increasing")
    if np.any(np.sum(np.abs(ys) ** 2, axis=1) > 1 + UNITARITY_TOL):
        raise ToleranceError("trajectory row exceeds unit norm")
    oracle = analytic_n2_constant(eps, result.predicted_phases["mu"], ts)
    mismatch = float(np.abs(ys - oracle).max())
    if mismatch > ORACLE_TOL:
        raise ToleranceError(f"trajectory differs from the closed form by {mismatch:.3e}")

    labels = {0: "20", 1: "11", 2: "02"}
    order = [1, 2, 0]  # |11>, |02>, |20>
    phases = {j: gates.unwrap_phase(amps[:, j]) / math.pi for j in order}
    header = ["t"]
    for j in order:
        header += [f"re_{labels[j]}", f"im_{labels[j]}", f"abs_{labels[j]}", f"phase_pi_{labels[j]}"]
    table = []
    for r in range(ts.size):
        row = [ts[r]]
        for j in order:
            z = amps[r, j]
            row += [z.real, z.imag, abs(z), phases[j][r]]
        table.append(row)

    report = extract_logical_report(cols, rows, result.predicted_unitary,
                                    gates.phase_correction(result.predicted_phases["theta_unreduced"]))
    subtraction = f"exp(-{k}i*eps*t)"
    summary = _jsonable({
        "m1": s["m1"],
        "m2": s["m2"],
        "eps": eps,
        "mu": result.predicted_phases["mu"],
        "duration": result.predicted_phases["duration"],
        "dynamical_phase_subtracted": subtraction,
        "final_abs_11": abs(amps[-1, 1]),
        "final_phase_pi_11": phases[1][-1],
        "predicted_phi11_over_pi": result.predicted_phases["phi11_unreduced"] / math.pi,
        "conditional_phase": report.conditional_phase,
        "conditional_phase_unwrapped": report.conditional_phase_unwrapped,
        "fidelity_corrected": report.fidelity,
        "leakage": report.leakage,
        "oracle_mismatch": mismatch,
        "samples": int(ts.size),
    })
    files = []
    if out is not None:
        files.append(write_csv(out / "fig2_trajectory.csv", header, table))
        files.append(write_json(out / "fig2_summary.json", summary))
    msg = (
        f"dynamical phase subtracted: {subtraction}\n"
        f"final |11> amplitude {summary['final_abs_11']:.12f}\n"
        f"final phase/pi of |11> {summary['final_phase_pi_11']:.12f} "
        f"(predicted {summary['predicted_phi11_over_pi']:.12f})"
    )
    return ScenarioOutcome(EXIT_OK, files, summary, msg)


# ------------------------------------------------------------ leakage scan


def leakage_for(n: int, area: float, sigma_frac: float, eps: float, duration: float, step_fraction: float, dt=None):
    """Leakage of the Rx core (logical angle ``area``) for a Gaussian and an equal-area step pulse."""
    params = gates.default_baseline(n, eps)
    tau_area = area / math.sqrt(n)
    g = make_area_pulse("gaussian", tau_area, duration, sigma_frac)
    st = make_area_pulse("step", tau_area, duration, step_fraction)
    lg = check_two_level_reduction(params, n, g, duration, dt)
    ls = check_two_level_reduction(params, n, st, duration, dt)
    peak = float(g(duration / 2))
    return {
        "area": area,
        "sigma_frac": sigma_frac,
        "duration": duration,
        "peak_tau": peak,
        "gap": 2.0 * (params.eps1 + params.eps2),
        "leakage_gaussian": lg.population_leaked,
        "leakage_step": ls.population_leaked,
        "angle_gaussian": lg.effective_angle,
    }


def run_leakage_scan(cfg: ScenarioConfig, out: Path | None) -> ScenarioOutcome:
    s = cfg.settings
    try:
        areas = parse_floats(s["areas"])
        fracs = parse_floats(s["sigma_fracs"])
    except ValueError as exc:
        raise ConfigError(f"bad list: {exc}") from None
    rows = []
    for a in areas:
        for f in fracs:
            rows.append(leakage_for(s["particles"], a, f, s["eps"], s["duration"], s["step_fraction"],
                                    cfg.numerics.get("dt")))
    keys = ["area", "sigma_frac", "duration", "peak_tau", "gap", "leakage_gaussian", "leakage_step", "angle_gaussian"]
    files = []
    if out is not None:
        files.append(write_csv(out / "leakage_scan.csv", keys, [[r[k] for k in keys] for r in rows]))
    msg = "\n".join(
        f"area={r['area']:.6g} sigma/T={r['sigma_frac']:.6g} leakage gaussian={r['leakage_gaussian']:.3e} "
        f"step={r['leakage_step']:.3e}"
        for r in rows
    )
    return ScenarioOutcome(EXIT_OK, files, {"rows": _jsonable(rows)}, msg)


RUNNERS = {
    "sector": run_sector,
    "spectrum": run_spectrum,
    "gate": run_gate,
    "fig2": run_fig2,
    "leakage_scan": run_leakage_scan,
}


def run_scenario(cfg: ScenarioConfig, out_dir=None) -> ScenarioOutcome:
    """Execute a scenario; errors map to exit status 2 (config), 3 (infeasible), 4 (tolerance)."""
    out = Path(out_dir) if out_dir is not None else None
    try:
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
        outcome = RUNNERS[cfg.kind](cfg, out)
        if out is not None:
            (out / "effective.ini").write_text(dump_config(cfg))
            outcome.files.append(out / "effective.ini")
        return outcome
    except InfeasibleError as exc:
        return ScenarioOutcome(EXIT_INFEASIBLE, message=f"infeasible: {exc}")
    except ToleranceError as exc:
        return ScenarioOutcome(EXIT_TOLERANCE, message=f"tolerance violation: {exc}")
    except (BoselatError, ValueError) as exc:
        return ScenarioOutcome(EXIT_CONFIG, message=f"config error: {exc}")
