"""Hamiltonians of dual-rail qubit arrays on bosonic lattices.

Qubit ``q`` owns the mode pair ``(a_q, b_q)`` at global mode indices
``(2q, 2q + 1)``.  The logical value of a qubit is its a-mode occupation.
All energies are dimensionless with hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Mapping

import numpy as np

from .errors import LayoutError, NonDiagonalError, NonHermitianError, UnsupportedSectorError
from .fock import FockSector, enumerate_sector, hopping_matrix, number_expectations

HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class SingleQubitParams:
    eps1: float = 0.0
    eps2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value}")

    def replace(self, **changes) -> SingleQubitParams:
        return SingleQubitParams(**{**self.as_dict(), **changes})

    def as_dict(self) -> dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}


@dataclass(frozen=True)
class Coupling:
    mu: float = 0.0
    chi: float = 0.0


def _pair(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise LayoutError(f"self-coupling on qubit {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class QubitArraySpec:
    """Single-qubit parameters plus a symmetric inter-qubit coupling map.

    Keys of ``couplings`` are unordered qubit pairs; ``(1, 0)`` and ``(0, 1)``
    name the same pair.  Each pair contributes ``mu (a_i^+ a_j + h.c.)`` and
    ``chi n_ai n_aj`` exactly once.
    """

    qubits: tuple[SingleQubitParams, ...]
    couplings: Mapping[tuple[int, int], Coupling] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.qubits) < 1:
            raise LayoutError("need at least one qubit")
        normalized: dict[tuple[int, int], Coupling] = {}
        for (i, j), c in dict(self.couplings).items():
            key = _pair(i, j)
            if not (0 <= key[0] and key[1] < len(self.qubits)):
                raise LayoutError(f"coupling {key} refers to a missing qubit")
            if key in normalized and normalized[key] != c:
                raise LayoutError(f"conflicting entries for pair {key}")
            normalized[key] = c
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "couplings", normalized)

    @property
    def qubit_count(self) -> int:
        return len(self.qubits)

    @property
    def mode_count(self) -> int:
        return 2 * len(self.qubits)

    def coupling(self, i: int, j: int) -> Coupling:
        return self.couplings.get(_pair(i, j), Coupling())


def a_mode(q: int) -> int:
    return 2 * q


def b_mode(q: int) -> int:
    return 2 * q + 1


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix on a Fock sector basis."""

    sector: FockSector
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.sector.dim, self.sector.dim):
            raise ValueError(f"matrix shape {m.shape} does not match sector dim {self.sector.dim}")
        scale = np.abs(m).max() if m.size else 0.0
        if m.size and np.abs(m - m.conj().T).max() > HERMITIAN_RTOL * scale:
            raise NonHermitianError("operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.sector.dim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _hop_pair(sector: FockSector, i: int, j: int) -> np.ndarray:
    """``c_i^+ c_j + c_j^+ c_i``."""
    h = hopping_matrix(sector, i, j)
    return h + h.T


def build_single_qubit_hamiltonian(params: SingleQubitParams, total_particles: int) -> HermitianOperator:
    """Single dual-rail qubit with ``n = n_a + n_b`` particles.

    ``H = eps1 n_a^2 + eps2 n_b^2 + gamma1 n_a + gamma2 n_b + tau (a^+ b + a b^+)``
    on the sector basis ``|n_a, n_b>`` ordered by descending ``n_a``.
    """
    sector = enumerate_sector(2, total_particles)
    na, na2 = number_expectations(sector, 0)
    nb, nb2 = number_expectations(sector, 1)
    p = params
    diag = p.eps1 * na2 + p.eps2 * nb2 + p.gamma1 * na + p.gamma2 * nb
    h = np.diag(diag).astype(complex)
    if p.tau:
        h += p.tau * _hop_pair(sector, 0, 1)
    return HermitianOperator(sector, h)


def energy_levels(params: SingleQubitParams, total_particles: int) -> np.ndarray:
    """Fock-state energies ``E_i`` for ``i = n_a = 0..n`` (requires ``tau == 0``)."""
    if params.tau != 0:
        raise NonDiagonalError("Fock states are energy eigenstates only for tau == 0")
    n = total_particles
    i = np.arange(n + 1, dtype=float)
    p = params
    return p.eps1 * i**2 + p.eps2 * (n - i) ** 2 + p.gamma1 * i + p.gamma2 * (n - i)


def degeneracy_residual(params: SingleQubitParams, total_particles: int) -> float:
    """``E_1 - E_0``; zero exactly when the two logical levels are degenerate."""
    n = total_particles
    p = params
    return p.eps1 - (2 * n - 1) * p.eps2 + p.gamma1 - p.gamma2


def degenerate_gamma1(params: SingleQubitParams, total_particles: int) -> float:
    """The ``gamma1`` that zeroes :func:`degeneracy_residual` for the other parameters."""
    p = params
    return p.gamma2 - p.eps1 + (2 * total_particles - 1) * p.eps2


def level_gap(params: SingleQubitParams) -> float:
    """``E_2 - E_1`` at degeneracy."""
    return 2.0 * (params.eps1 + params.eps2)


def build_two_qubit_hamiltonian(eps: float, mu: float, sector_particles: int) -> HermitianOperator:
    """a-mode coupling Hamiltonian ``eps (n_i^2 + n_j^2) + mu (a_i^+ a_j + h.c.)``.

    The constant ``gamma (n_i + n_j)`` term is dropped.  Basis order for
    ``n = 2`` is ``(|20>, |11>, |02>)``.
    """
    if sector_particles not in (0, 1, 2):
        raise UnsupportedSectorError(f"two-qubit sectors are n in {{0, 1, 2}}, got {sector_particles}")
    sector = enumerate_sector(2, sector_particles)
    _, n0sq = number_expectations(sector, 0)
    _, n1sq = number_expectations(sector, 1)
    h = np.diag(eps * (n0sq + n1sq)).astype(complex)
    if mu:
        h += mu * _hop_pair(sector, 0, 1)
    return HermitianOperator(sector, h)


def build_lattice_hamiltonian(spec: QubitArraySpec, sector: FockSector) -> HermitianOperator:
    """Full qubit-array Hamiltonian on a sector over all ``2M`` modes.

    ``spec`` holds the parameter values at one instant; time dependence is
    handled by :meth:`boselat.pulses.ControlSchedule.snapshot`.
    """
    if sector.mode_count != spec.mode_count:
        raise LayoutError(
            f"sector has {sector.mode_count} modes, layout needs {spec.mode_count}"
        )
    occ = sector.occupations.astype(float)
    diag = np.zeros(sector.dim)
    h = np.zeros((sector.dim, sector.dim), dtype=complex)
    for q, p in enumerate(spec.qubits):
        na, nb = occ[:, a_mode(q)], occ[:, b_mode(q)]
        diag += p.eps1 * na**2 + p.eps2 * nb**2 + p.gamma1 * na + p.gamma2 * nb
        if p.tau:
            h += p.tau * _hop_pair(sector, a_mode(q), b_mode(q))
    for (i, j), c in spec.couplings.items():
        if c.chi:
            diag += c.chi * occ[:, a_mode(i)] * occ[:, a_mode(j)]
        if c.mu:
            h += c.mu * _hop_pair(sector, a_mode(i), a_mode(j))
    h += np.diag(diag)
    return HermitianOperator(sector, h)


def build_bose_hubbard_hamiltonian(
    sector: FockSector, interaction: np.ndarray, hopping: np.ndarray
) -> HermitianOperator:
    """Generalized Bose-Hubbard model on an arbitrary lattice.

    ``H = sum_ij (V2_ij n_i n_j + V1_ij c_i^+ c_j + h.c.)`` with real
    ``interaction = V2`` and complex ``hopping = V1``, both ``L x L``.  The
    Hermitian conjugate applies to every term, so diagonal contributions
    appear twice.
    """
    L = sector.mode_count
    V2 = np.asarray(interaction, dtype=float)
    V1 = np.asarray(hopping, dtype=complex)
    if V2.shape != (L, L) or V1.shape != (L, L):
        raise LayoutError(f"coupling matrices must be {L}x{L}")
    occ = sector.occupations.astype(float)
    diag = np.einsum("ki,ij,kj->k", occ, V2, occ) + occ @ np.diag(V1).real
    h = np.diag(diag).astype(complex)
    for i in range(L):
        for j in range(L):
            if i != j and V1[i, j] != 0:
                h += V1[i, j] * hopping_matrix(sector, i, j)
    h = h + h.conj().T
    return HermitianOperator(sector, h)


def kerr_unitary(chi: float, duration: float) -> np.ndarray:
    """Logical action ``diag(1, 1, 1, exp(-i chi T))`` of a constant Kerr coupling."""
    if duration < 0:
        raise ValueError("duration must be non-negative")
    return np.diag([1.0, 1.0, 1.0, np.exp(-1j * chi * duration)])


def logical_occupation(bits, particles_per_qubit) -> tuple[int, ...]:
    """Occupation vector of the logical basis state ``|bits>_L``.

    Qubit ``q`` in logical state ``b`` has ``b`` particles in ``a_q`` and the
    rest of its ``particles_per_qubit[q]`` particles in ``b_q``.
    """
    bits = [int(b) for b in bits]
    if np.isscalar(particles_per_qubit):
        particles_per_qubit = [int(particles_per_qubit)] * len(bits)
    if len(particles_per_qubit) != len(bits):
        raise LayoutError("one particle count per qubit required")
    occ: list[int] = []
    for b, n in zip(bits, particles_per_qubit):
        if b not in (0, 1):
            raise ValueError(f"logical bits are 0 or 1, got {b}")
        if n < b:
            raise ValueError("a qubit in |1>_L needs at least one particle")
        occ.extend((b, n - b))
    return tuple(occ)
