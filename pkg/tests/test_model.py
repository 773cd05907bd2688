import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boselat.errors import LayoutError, NonDiagonalError, NonHermitianError, UnsupportedSectorError
from boselat.fock import enumerate_sector
from boselat.model import (
    Coupling,
    HermitianOperator,
    QubitArraySpec,
    SingleQubitParams,
    build_bose_hubbard_hamiltonian,
    build_lattice_hamiltonian,
    build_single_qubit_hamiltonian,
    build_two_qubit_hamiltonian,
    degeneracy_residual,
    degenerate_gamma1,
    energy_levels,
    kerr_unitary,
    logical_occupation,
)

from conftest import sector_isometry, truncated_ladder_ops

finite = st.floats(-3, 3, allow_nan=False)


def kron_array_hamiltonian(spec: QubitArraySpec, cutoff: int) -> np.ndarray:
    """Reference Hamiltonian from truncated ladder operators (no sector code)."""
    ops = truncated_ladder_ops(spec.mode_count, cutoff)
    num = [o.T @ o for o in ops]
    h = np.zeros_like(num[0], dtype=complex)
    for q, p in enumerate(spec.qubits):
        a, b = ops[2 * q], ops[2 * q + 1]
        na, nb = num[2 * q], num[2 * q + 1]
        h += p.eps1 * na @ na + p.eps2 * nb @ nb + p.gamma1 * na + p.gamma2 * nb
        h += p.tau * (a.T @ b + a @ b.T)
    for (i, j), c in spec.couplings.items():
        ai, aj = ops[2 * i], ops[2 * j]
        h += c.mu * (ai.T @ aj + ai @ aj.T) + c.chi * num[2 * i] @ num[2 * j]
    return h


def test_single_qubit_pure_hopping_is_sigma_x():
    h = build_single_qubit_hamiltonian(SingleQubitParams(tau=1.0), 1)
    np.testing.assert_array_equal(h.matrix, [[0, 1], [1, 0]])


def test_single_qubit_diagonal_n2():
    h = build_single_qubit_hamiltonian(SingleQubitParams(eps1=1, eps2=1), 2)
    np.testing.assert_array_equal(h.matrix, np.diag([4, 2, 4]))


def test_single_qubit_n2_offdiagonals():
    mu = 0.7
    h = build_single_qubit_hamiltonian(SingleQubitParams(tau=mu), 2).matrix
    assert h[0, 1] == pytest.approx(math.sqrt(2) * mu)
    assert h[1, 2] == pytest.approx(math.sqrt(2) * mu)
    assert h[0, 2] == 0


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_single_qubit_matches_ladder_reference(n, rng):
    p = SingleQubitParams(*rng.uniform(-2, 2, 5))
    h = build_single_qubit_hamiltonian(p, n)
    iso = sector_isometry(h.sector, n)
    ref = iso.T @ kron_array_hamiltonian(QubitArraySpec((p,)), n) @ iso
    np.testing.assert_allclose(h.matrix, ref, atol=1e-12)


def test_energy_levels_examples():
    np.testing.assert_array_equal(energy_levels(SingleQubitParams(eps1=1, eps2=1), 2), [4, 2, 4])
    np.testing.assert_array_equal(energy_levels(SingleQubitParams(), 5), np.zeros(6))
    with pytest.raises(NonDiagonalError):
        energy_levels(SingleQubitParams(tau=0.1), 2)


def test_degeneracy_examples():
    assert degeneracy_residual(SingleQubitParams(), 4) == 0
    p = SingleQubitParams(eps1=1, eps2=1, gamma1=0)
    gamma2 = p.gamma1 + p.eps1 - p.eps2  # solve the residual for gamma2 at n = 1
    assert gamma2 == 0
    p = p.replace(gamma2=gamma2)
    assert degeneracy_residual(p, 1) == 0
    e = energy_levels(p, 1)
    assert e[0] == e[1]


@settings(max_examples=100, deadline=None)
@given(e1=finite, e2=finite, g2=finite, n=st.integers(2, 40))
def test_gap_identity(e1, e2, g2, n):
    p = SingleQubitParams(eps1=e1, eps2=e2, gamma2=g2)
    p = p.replace(gamma1=degenerate_gamma1(p, n))
    e = energy_levels(p, n)
    scale = max(1.0, np.abs(e).max())
    assert abs(e[1] - e[0]) <= 1e-12 * scale
    gap = e[2] - e[1]
    assert gap == pytest.approx(4 * n * p.eps2 + 2 * (p.gamma2 - p.gamma1), abs=1e-12 * scale)
    assert gap == pytest.approx(2 * (p.eps1 + p.eps2), abs=1e-12 * scale)


@settings(max_examples=50, deadline=None)
@given(e1=finite, e2=finite, g1=finite, g2=finite, n=st.integers(0, 12))
def test_eigenvalues_equal_fock_levels(e1, e2, g1, g2, n):
    p = SingleQubitParams(e1, e2, g1, g2)
    h = build_single_qubit_hamiltonian(p, n)
    # tau = 0: the matrix is diagonal and its diagonal is the level list reversed.
    np.testing.assert_array_equal(np.diagonal(h.matrix).real, energy_levels(p, n)[::-1])
    np.testing.assert_allclose(np.linalg.eigvalsh(h.matrix), np.sort(energy_levels(p, n)), atol=1e-12 * (1 + n * n))


def test_two_qubit_builder_examples():
    np.testing.assert_array_equal(build_two_qubit_hamiltonian(1.0, 0.5, 1).matrix, [[1, 0.5], [0.5, 1]])
    r2 = math.sqrt(2)
    np.testing.assert_allclose(
        build_two_qubit_hamiltonian(1.0, 1.0, 2).matrix, [[4, r2, 0], [r2, 2, r2], [0, r2, 4]], atol=1e-15
    )
    np.testing.assert_array_equal(build_two_qubit_hamiltonian(1.0, 1.0, 0).matrix, [[0]])
    with pytest.raises(UnsupportedSectorError):
        build_two_qubit_hamiltonian(1.0, 1.0, 3)


@pytest.mark.parametrize("n", [1, 2])
def test_two_qubit_builder_is_lattice_subblock(n, rng):
    eps, mu = rng.uniform(-2, 2, 2)
    spec = QubitArraySpec((SingleQubitParams(eps1=eps), SingleQubitParams(eps1=eps)), {(0, 1): Coupling(mu=mu)})
    sector = enumerate_sector(4, n)
    h = build_lattice_hamiltonian(spec, sector).matrix
    rows = [k for k, s in enumerate(sector.basis) if s[1] == 0 and s[3] == 0]
    block = h[np.ix_(rows, rows)]
    np.testing.assert_allclose(block, build_two_qubit_hamiltonian(eps, mu, n).matrix, atol=1e-14)


def test_lattice_single_qubit_embedding(rng):
    p = SingleQubitParams(*rng.uniform(-1, 1, 5))
    h = build_lattice_hamiltonian(QubitArraySpec((p,)), enumerate_sector(2, 4))
    np.testing.assert_array_equal(h.matrix, build_single_qubit_hamiltonian(p, 4).matrix)


def test_lattice_mu_gives_sigma_x_between_a_modes():
    spec = QubitArraySpec((SingleQubitParams(), SingleQubitParams()), {(0, 1): Coupling(mu=1.0)})
    sector = enumerate_sector(4, 1)
    h = build_lattice_hamiltonian(spec, sector).matrix
    i, j = sector.position((1, 0, 0, 0)), sector.position((0, 0, 1, 0))
    np.testing.assert_array_equal(h[np.ix_([i, j], [i, j])], [[0, 1], [1, 0]])


def test_lattice_kerr_diagonal():
    spec = QubitArraySpec((SingleQubitParams(), SingleQubitParams()), {(1, 0): Coupling(chi=1.0)})
    sector = enumerate_sector(4, 2)
    h = build_lattice_hamiltonian(spec, sector).matrix
    k = sector.position((1, 0, 1, 0))
    assert h[k, k] == 1.0


@pytest.mark.parametrize("M,N", [(2, 2), (2, 3), (3, 2)])
def test_lattice_matches_kron_reference(M, N, rng):
    qubits = tuple(SingleQubitParams(*rng.uniform(-1, 1, 5)) for _ in range(M))
    couplings = {(i, j): Coupling(*rng.uniform(-1, 1, 2)) for i in range(M) for j in range(i + 1, M)}
    spec = QubitArraySpec(qubits, couplings)
    ref_full = kron_array_hamiltonian(spec, N)
    sector = enumerate_sector(2 * M, N)
    iso = sector_isometry(sector, N)
    h = build_lattice_hamiltonian(spec, sector)
    np.testing.assert_allclose(h.matrix, iso.T @ ref_full @ iso, atol=1e-12)
    # The reference commutes with total number: no matrix elements leave the sector.
    ops = truncated_ladder_ops(2 * M, N)
    number = sum(o.T @ o for o in ops)
    inside = np.abs(np.diagonal(number) - N) < 0.5
    assert np.abs(ref_full[np.ix_(~inside, inside)]).max() == 0


def test_bose_hubbard_reproduces_qubit_array(rng):
    M = 2
    qubits = tuple(SingleQubitParams(*rng.uniform(-1, 1, 5)) for _ in range(M))
    c = Coupling(*rng.uniform(-1, 1, 2))
    spec = QubitArraySpec(qubits, {(0, 1): c})
    L = 2 * M
    V2 = np.zeros((L, L))
    V1 = np.zeros((L, L), dtype=complex)
    for q, p in enumerate(qubits):
        a, b = 2 * q, 2 * q + 1
        V2[a, a], V2[b, b] = p.eps1 / 2, p.eps2 / 2
        V1[a, a], V1[b, b] = p.gamma1 / 2, p.gamma2 / 2
        V1[a, b] = p.tau
    V2[0, 2] = c.chi / 2
    V1[0, 2] = c.mu
    sector = enumerate_sector(L, 3)
    np.testing.assert_allclose(
        build_bose_hubbard_hamiltonian(sector, V2, V1).matrix, build_lattice_hamiltonian(spec, sector).matrix, atol=1e-13
    )


def test_bose_hubbard_complex_hopping_is_hermitian():
    sector = enumerate_sector(3, 3)
    V1 = np.array([[0, 1 + 1j, 0], [0, 0, 0.5j], [0.2, 0, 0]])
    h = build_bose_hubbard_hamiltonian(sector, np.eye(3), V1).matrix
    np.testing.assert_allclose(h, h.conj().T, atol=0)


def test_hermitian_operator_rejects_nonhermitian():
    s = enumerate_sector(2, 1)
    with pytest.raises(NonHermitianError):
        HermitianOperator(s, np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        HermitianOperator(s, np.eye(3))


def test_layout_validation():
    with pytest.raises(LayoutError):
        QubitArraySpec((SingleQubitParams(),), {(0, 0): Coupling(mu=1)})
    with pytest.raises(LayoutError):
        QubitArraySpec((SingleQubitParams(),), {(0, 1): Coupling(mu=1)})
    spec = QubitArraySpec((SingleQubitParams(), SingleQubitParams()), {(1, 0): Coupling(mu=2)})
    assert spec.coupling(0, 1) == spec.coupling(1, 0) == Coupling(mu=2)
    assert spec.mode_count == 4
    with pytest.raises(LayoutError):
        build_lattice_hamiltonian(spec, enumerate_sector(2, 1))
    with pytest.raises(ValueError):
        SingleQubitParams(eps1=float("nan"))


def test_kerr_unitary():
    np.testing.assert_allclose(kerr_unitary(1.0, math.pi), np.diag([1, 1, 1, -1]), atol=1e-15)
    np.testing.assert_array_equal(kerr_unitary(3.0, 0.0), np.eye(4))
    np.testing.assert_allclose(kerr_unitary(0.5, math.pi), np.diag([1, 1, 1, -1j]), atol=1e-15)
    with pytest.raises(ValueError):
        kerr_unitary(1.0, -1.0)


def test_logical_occupation():
    assert logical_occupation([0, 0, 0], 1) == (0, 1, 0, 1, 0, 1)
    assert logical_occupation([1, 0], [3, 2]) == (1, 2, 0, 2)
    with pytest.raises(ValueError):
        logical_occupation([2], 3)
