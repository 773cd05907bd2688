import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boselat.errors import DegeneracyError, InfeasibleError, ShapeError
from boselat.gates import (
    LogicalUnitary,
    compose,
    cphase,
    cphase_report,
    default_baseline,
    extract_logical_report,
    hadamard,
    hadamard_sequence,
    not_gate,
    phase_distance,
    phase_gate,
    predicted_phase_gate_angle,
    remove_global_phase,
    rx,
    simulate_single_qubit,
    simulate_two_qubit,
    synthesize_cphase,
    synthesize_kerr,
    synthesize_not,
    synthesize_phase,
    synthesize_rx,
    two_qubit_space,
    wrap_phase,
)
from boselat.model import QubitArraySpec, SingleQubitParams
from boselat.propagator import rx_angle
from boselat.pulses import Constant, ControlSchedule, PiecewiseLinear, Sampled, Step, average


def up_to_phase(a, b, atol):
    ra, _ = remove_global_phase(a)
    rb, _ = remove_global_phase(b)
    np.testing.assert_allclose(ra, rb, atol=atol)


def test_rx_conventions():
    np.testing.assert_allclose(1j * rx(math.pi / 2), not_gate(), atol=1e-15)
    np.testing.assert_allclose(rx(0.0), np.eye(2), atol=0)


def test_synthesize_rx_areas():
    r = synthesize_rx(math.pi / 4, 4.0)
    tau = r.schedule.assignments["q0.tau"]
    assert tau.integral(0, 4.0) == pytest.approx(math.pi / 4, abs=1e-12)
    np.testing.assert_array_equal(r.predicted_unitary.matrix, rx(math.pi / 4))
    r = synthesize_rx(0.9, 2.0, "step", total_particles=9)
    assert r.schedule.assignments["q0.tau"].integral(0, 2.0) == pytest.approx(0.3, abs=1e-12)


def test_synthesize_rx_zero_angle_is_zero_pulse():
    r = synthesize_rx(0.0, 1.0, "gaussian")
    assert r.schedule.value_range("q0.tau") == (0.0, 0.0)


def test_synthesize_not_is_rx_half_pi_times_i():
    r = synthesize_not(3.0)
    np.testing.assert_array_equal(r.predicted_unitary.matrix, not_gate())
    assert r.schedule.assignments["q0.tau"].integral(0, 3.0) == pytest.approx(math.pi / 2, abs=1e-12)


def test_synthesize_rx_requires_degeneracy():
    with pytest.raises(DegeneracyError):
        synthesize_rx(0.3, 1.0, params=SingleQubitParams(eps1=1, eps2=1, gamma1=0.1))
    with pytest.raises(DegeneracyError):
        synthesize_rx(0.3, 1.0, params=SingleQubitParams())


def test_hadamard_composition():
    seq = hadamard_sequence(1.0, 4.0)
    assert [r.gate for r in seq] == ["Pphi", "Rx", "Pphi"]
    h, _ = remove_global_phase(compose(seq))
    np.testing.assert_allclose(h, hadamard(), atol=1e-12)
    np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(np.abs(h @ [1, 0]), [1 / math.sqrt(2)] * 2, atol=1e-12)


@pytest.mark.parametrize("n", [1, 3])
def test_hadamard_two_level_simulation(n):
    seq = hadamard_sequence(1.0, 4.0, total_particles=n)
    cols, rows = simulate_single_qubit(seq, two_level=True)
    rep = extract_logical_report(cols, rows, hadamard())
    assert rep.fidelity >= 1 - 1e-9
    assert rep.leakage < 1e-12


def test_phase_gate_simulation_and_prediction():
    phi = 0.77
    r = synthesize_phase(phi, 2.0, total_particles=4)
    g1 = r.schedule.assignments["q0.gamma1"]
    edge = default_baseline(4).gamma1
    assert float(g1(0.0)) == edge and float(g1(2.0)) == edge
    assert predicted_phase_gate_angle(r.schedule, 4) == pytest.approx(-phi, abs=1e-12)
    cols, rows = simulate_single_qubit([r])
    rep = extract_logical_report(cols, rows, phase_gate(phi))
    assert rep.fidelity == pytest.approx(1.0, abs=1e-12)


def test_phase_zero_is_identity():
    r = synthesize_phase(0.0, 1.0, total_particles=2)
    cols, rows = simulate_single_qubit([r])
    up_to_phase(cols[rows, :], np.eye(2), 1e-12)


@pytest.mark.parametrize("height,width", [(0.5, 1.0), (-2.0, 0.25), (3.0, 0.1)])
def test_square_bump_phase(height, width):
    n, T = 3, 2.0
    p = default_baseline(n)
    bump = Step(p.gamma1 + height, 0.4, 0.4 + width, baseline=p.gamma1)
    r = synthesize_phase(0.0, T, params=p, total_particles=n)
    r = dataclasses.replace(r, schedule=ControlSchedule(T, r.schedule.baseline, {"q0.gamma1": bump}))
    cols, rows = simulate_single_qubit([r])
    block = cols[rows, :]
    rel = np.angle(block[1, 1] / block[0, 0])
    assert phase_distance(rel, -height * width) < 1e-12


@pytest.mark.parametrize(
    "bump",
    [
        PiecewiseLinear(((0, 0), (0.5, 1), (2, 0))),
        Sampled(tuple(np.linspace(0, 2, 101)), tuple(np.r_[0.0, np.sin(np.linspace(0, np.pi, 101)[1:-1]) ** 2, 0.0])),
        Step(1.0, 0.3, 0.9),
    ],
)
def test_phase_gate_with_custom_bump(bump):
    phi, T = -1.1, 2.0
    r = synthesize_phase(phi, T, total_particles=2, bump=bump)
    cols, rows = simulate_single_qubit([r])
    rep = extract_logical_report(cols, rows, phase_gate(phi))
    assert rep.fidelity == pytest.approx(1.0, abs=1e-12)


def test_phase_gate_errors():
    with pytest.raises(ValueError):
        synthesize_phase(1.0, 0.0)
    with pytest.raises(ShapeError):
        synthesize_phase(1.0, 1.0, bump=Constant(1.0))
    with pytest.raises(ShapeError):
        synthesize_phase(1.0, 1.0, shape="gaussian")
    with pytest.raises(DegeneracyError):
        synthesize_phase(1.0, 1.0, params=SingleQubitParams(eps1=1, eps2=1, tau=0.1))


def test_cphase_two_six_example():
    eps = 1.3
    r = synthesize_cphase(2, 6, eps)
    mu = r.predicted_phases["mu"]
    assert eps / mu == pytest.approx(math.sqrt(5), rel=1e-14)
    assert r.schedule.duration == pytest.approx(2 * math.pi / mu, rel=1e-14)
    assert r.predicted_phases["phi11"] / math.pi == pytest.approx(6 - 2 * math.sqrt(5), rel=1e-14)
    assert r.quantization == {"m1": 2, "m2": 6}
    rep = cphase_report(r)
    assert rep.fidelity >= 1 - 1e-6
    assert rep.leakage < 1e-6


def test_cphase_one_three_example():
    r = synthesize_cphase(1, 3, 1.0)
    assert r.predicted_phases["mu"] == pytest.approx(1 / math.sqrt(5), rel=1e-14)
    assert r.predicted_phases["phi11"] == pytest.approx(math.pi * (3 - math.sqrt(5)), rel=1e-14)
    rep = cphase_report(r)
    assert phase_distance(rep.conditional_phase, r.predicted_phases["phi11"]) < 1e-8


def test_cphase_step_shape():
    r = synthesize_cphase(1, 3, 1.0, shape="step", width_fraction=0.4)
    assert average(r.schedule.assignments["c0-1.mu"], r.schedule.duration) * r.schedule.duration == pytest.approx(math.pi)
    # Jumps of mu fall inside steps; cell averaging keeps the error second order in dt.
    rep = cphase_report(r, dt=0.01)
    assert rep.fidelity >= 1 - 1e-10
    assert rep.leakage < 1e-10


@pytest.mark.parametrize("m1,m2", [(1, 2), (1, 1), (2, 4), (0, 3)])
def test_cphase_infeasible(m1, m2):
    with pytest.raises(InfeasibleError):
        synthesize_cphase(m1, m2, 1.0)


@settings(max_examples=40, deadline=None)
@given(m1=st.integers(1, 6), extra=st.integers(1, 10), eps=st.floats(0.1, 10))
def test_quantization_conditions(m1, extra, eps):
    m2 = 2 * m1 + extra
    r = synthesize_cphase(m1, m2, eps)
    mu, T = r.predicted_phases["mu"], r.schedule.duration
    w2 = math.sqrt(eps**2 + 4 * mu**2)
    assert mu * T == pytest.approx(m1 * math.pi, rel=1e-12)
    assert w2 * T == pytest.approx(m2 * math.pi, rel=1e-12)
    root = math.sqrt(m2**2 - 4 * m1**2)
    # The unreduced accumulation pi (m2 - 2 m1) - eps T equals phi11 modulo 2 pi.
    assert phase_distance(math.pi * (m2 - 2 * m1) - eps * T, r.predicted_phases["phi11"]) < 1e-9 * (1 + eps * T)
    assert phase_distance(r.predicted_phases["theta_correction"], math.pi * (m1 - root)) < 1e-9 * (1 + eps * T)


def test_report_identity():
    sectors, rows = two_qubit_space()
    cols = np.eye(6)[:, rows]
    rep = extract_logical_report(cols, rows, np.eye(4))
    assert rep.fidelity == 1.0
    assert rep.leakage == 0.0
    assert rep.conditional_phase == 0.0
    assert rep.realized.labels == ("00", "01", "10", "11")


def test_report_dimension_mismatch():
    with pytest.raises(ValueError):
        extract_logical_report(np.eye(6)[:, :3], [0, 1, 2], np.eye(4))
    with pytest.raises(ValueError):
        LogicalUnitary.of(np.eye(3))


def test_midgate_leakage_without_self_interaction():
    mu = 0.8
    t = math.pi / 2 / (2 * mu)  # omega2 t = pi/2 with omega2 = 2 mu
    spec = QubitArraySpec((SingleQubitParams(), SingleQubitParams()))
    sched = ControlSchedule(t, spec, {"c0-1.mu": Constant(mu)})
    cols, rows, _ = simulate_two_qubit(sched, dt=t / 2000)
    col11 = cols[:, 3]
    assert 1 - sum(abs(col11[r]) ** 2 for r in rows) == pytest.approx(1.0, abs=1e-12)
    rep = extract_logical_report(cols, rows, np.eye(4))
    assert rep.leakage == pytest.approx(0.25, abs=1e-12)
    assert rep.leakage + float(np.sum(np.abs(cols[rows, :]) ** 2)) / 4 == pytest.approx(1.0, abs=1e-9)


def test_kerr_gate():
    r = synthesize_kerr(1.0, math.pi)
    cols, rows, _ = simulate_two_qubit(r.schedule)
    rep = extract_logical_report(cols, rows, cphase(math.pi))
    assert rep.fidelity == pytest.approx(1.0, abs=1e-12)
    assert rep.conditional_phase == pytest.approx(math.pi, abs=1e-12)


def test_zero_average_tunneling_noise_leaves_angle_unchanged():
    n, T = 5, 4.0
    base = synthesize_rx(math.pi / 4, T, total_particles=n)
    tau = base.schedule.assignments["q0.tau"]
    knots = tuple((t, float(tau(t)) + 0.05 * math.sin(2 * math.pi * t / T)) for t in np.linspace(0, T, 801))
    noisy_pulse = PiecewiseLinear(knots)
    clean = PiecewiseLinear(tuple((t, float(tau(t))) for t in np.linspace(0, T, 801)))
    angles = []
    for pulse in (clean, noisy_pulse):
        sched = ControlSchedule(T, base.schedule.baseline, {"q0.tau": pulse})
        cols, rows = simulate_single_qubit([dataclasses.replace(base, schedule=sched)], dt=T / 800, two_level=True)
        angles.append(rx_angle(cols[rows, :]))
    assert abs(angles[0] - angles[1]) < 1e-12
    assert angles[0] == pytest.approx(math.pi / 4, abs=1e-3)


@pytest.mark.parametrize("x", [0.0, math.pi, -math.pi, 3 * math.pi, 7.0, -0.1])
def test_wrap_phase_range(x):
    y = wrap_phase(x)
    assert -math.pi < y <= math.pi
    assert math.isclose(math.cos(x), math.cos(y), abs_tol=1e-12)


def test_remove_global_phase_convention():
    u = np.array([[0, 1j], [1j, 0]])
    v, alpha = remove_global_phase(u)
    assert alpha == pytest.approx(math.pi / 2)
    np.testing.assert_allclose(v, [[0, 1], [1, 0]], atol=1e-15)
