"""Fixed-particle-number Fock sectors of L bosonic modes.

A sector is the span of all occupation vectors ``(n_0, ..., n_{L-1})`` with
``sum(n) == N``.  Basis vectors are ordered lexicographically *descending*,
so for two modes ``(a, b)`` the state with ``i`` particles in ``a`` sits at
position ``N - i``::

    >>> enumerate_sector(2, 2).basis
    ((2, 0), (1, 1), (0, 2))

Every matrix built downstream depends on this ordering.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError

DEFAULT_DIM_CAP = 10**6
DIM_CAP_ENV = "BOSELAT_DIM_CAP"

OccupationVector = tuple[int, ...]


def dimension_cap() -> int:
    """Sector dimension cap, overridable through ``BOSELAT_DIM_CAP``."""
    raw = os.environ.get(DIM_CAP_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_DIM_CAP
    return int(raw)


def sector_dimension(mode_count: int, total_particles: int) -> int:
    return math.comb(total_particles + mode_count - 1, mode_count - 1)


@dataclass(frozen=True)
class FockSector:
    """Basis of the ``total_particles`` sector over ``mode_count`` modes.

    ``index`` maps an occupation tuple to its basis position and is the exact
    inverse of ``basis``.
    """

    mode_count: int
    total_particles: int
    basis: tuple[OccupationVector, ...]
    index: dict[OccupationVector, int] = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    @cached_property
    def occupations(self) -> np.ndarray:
        """Integer array of shape ``(dim, mode_count)``; read-only."""
        occ = np.array(self.basis, dtype=np.int64).reshape(self.dim, self.mode_count)
        occ.setflags(write=False)
        return occ

    def position(self, state) -> int:
        return self.index[tuple(int(n) for n in state)]

    def basis_vector(self, state) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.position(state)] = 1.0
        return vec


def _descending(mode_count: int, total: int):
    if mode_count == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _descending(mode_count - 1, total - first):
            yield (first,) + rest


def enumerate_sector(mode_count: int, total_particles: int, cap: int | None = None) -> FockSector:
    """Enumerate the fixed-``N`` sector over ``L`` modes.

    Raises
    ------
    CapacityError
        If ``C(N+L-1, L-1)`` exceeds ``cap`` (default: ``dimension_cap()``).
    """
    if mode_count < 1:
        raise ValueError(f"mode_count must be >= 1, got {mode_count}")
    if total_particles < 0:
        raise ValueError(f"total_particles must be >= 0, got {total_particles}")
    cap = dimension_cap() if cap is None else cap
    dim = sector_dimension(mode_count, total_particles)
    if dim > cap:
        raise CapacityError(
            f"sector L={mode_count}, N={total_particles} has dimension {dim} > cap {cap}"
        )
    basis = tuple(_descending(mode_count, total_particles))
    index = {state: k for k, state in enumerate(basis)}
    return FockSector(mode_count, total_particles, basis, index)


def _check_mode(mode: int, mode_count: int) -> None:
    if not 0 <= mode < mode_count:
        raise IndexError(f"mode {mode} out of range for {mode_count} modes")


def hopping_element(state, to_mode: int, from_mode: int) -> tuple[OccupationVector, float]:
    """Apply ``c_i^dagger c_j`` to a Fock state.

    Returns the image state and the amplitude ``sqrt((n_i + 1) * n_j)``.  An
    empty source mode gives amplitude 0 and the input state unchanged.
    """
    state = tuple(int(n) for n in state)
    L = len(state)
    _check_mode(to_mode, L)
    _check_mode(from_mode, L)
    if to_mode == from_mode:
        raise ValueError("hopping requires distinct modes")
    n_i, n_j = state[to_mode], state[from_mode]
    if n_j == 0:
        return state, 0.0
    image = list(state)
    image[to_mode] += 1
    image[from_mode] -= 1
    return tuple(image), math.sqrt((n_i + 1) * n_j)


def number_expectations(sector: FockSector, mode: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of ``n_mode`` and ``n_mode**2`` in basis order."""
    _check_mode(mode, sector.mode_count)
    n = sector.occupations[:, mode].astype(float)
    return n, n**2


def hopping_matrix(sector: FockSector, to_mode: int, from_mode: int) -> np.ndarray:
    """Dense real matrix of ``c_i^dagger c_j`` on ``sector``."""
    mat = np.zeros((sector.dim, sector.dim))
    for col, state in enumerate(sector.basis):
        image, amp = hopping_element(state, to_mode, from_mode)
        if amp:
            mat[sector.index[image], col] = amp
    return mat
