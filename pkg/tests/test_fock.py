import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boselat.errors import CapacityError
from boselat.fock import (
    enumerate_sector,
    hopping_element,
    hopping_matrix,
    number_expectations,
    sector_dimension,
)

from conftest import brute_force_sector, sector_isometry, truncated_ladder_ops


def test_two_modes_one_particle():
    s = enumerate_sector(2, 1)
    assert s.basis == ((1, 0), (0, 1))
    assert s.dim == 2


def test_single_qubit_sector_n30_has_n_plus_one_states():
    assert enumerate_sector(2, 30).dim == 31


def test_four_modes_two_particles():
    s = enumerate_sector(4, 2)
    assert math.comb(5, 3) == 10
    assert s.dim == 10
    assert sorted(s.basis) == sorted(brute_force_sector(4, 2))


def test_descending_order_places_na_at_n_minus_i():
    n = 7
    s = enumerate_sector(2, n)
    for i in range(n + 1):
        assert s.position((i, n - i)) == n - i
    assert list(s.basis) == sorted(s.basis, reverse=True)


def test_capacity_cap(monkeypatch):
    with pytest.raises(CapacityError):
        enumerate_sector(3, 10, cap=10)
    monkeypatch.setenv("BOSELAT_DIM_CAP", "5")
    with pytest.raises(CapacityError):
        enumerate_sector(2, 5)
    assert enumerate_sector(2, 4).dim == 5


def test_bad_mode_count():
    with pytest.raises(ValueError):
        enumerate_sector(0, 1)


@pytest.mark.parametrize(
    "state, i, j, image, amp",
    [
        ((0, 1), 0, 1, (1, 0), 1.0),
        ((1, 1), 0, 1, (2, 0), math.sqrt(2)),
        ((2, 0), 1, 0, (1, 1), math.sqrt(2)),
        ((3, 0), 0, 1, (3, 0), 0.0),
    ],
)
def test_hopping_element(state, i, j, image, amp):
    out, a = hopping_element(state, i, j)
    assert out == image
    assert a == pytest.approx(amp, abs=1e-15)


def test_hopping_element_errors():
    with pytest.raises(IndexError):
        hopping_element((1, 0), 2, 0)
    with pytest.raises(ValueError):
        hopping_element((1, 0), 1, 1)


def test_number_expectations():
    n, n2 = number_expectations(enumerate_sector(2, 1), 0)
    np.testing.assert_array_equal(n, [1, 0])
    np.testing.assert_array_equal(n2, [1, 0])
    n, n2 = number_expectations(enumerate_sector(2, 2), 0)
    np.testing.assert_array_equal(n, [2, 1, 0])
    np.testing.assert_array_equal(n2, [4, 1, 0])
    with pytest.raises(IndexError):
        number_expectations(enumerate_sector(2, 2), 3)


@pytest.mark.parametrize("L,N", [(2, 3), (3, 2), (4, 2)])
def test_hopping_matrix_matches_truncated_ladder_operators(L, N):
    s = enumerate_sector(L, N)
    ops = truncated_ladder_ops(L, N)
    iso = sector_isometry(s, N)
    for i in range(L):
        for j in range(L):
            if i != j:
                ref = iso.T @ ops[i].T @ ops[j] @ iso
                np.testing.assert_allclose(hopping_matrix(s, i, j), ref, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(L=st.integers(1, 5), N=st.integers(0, 6))
def test_sector_properties(L, N):
    s = enumerate_sector(L, N)
    assert s.dim == sector_dimension(L, N) == math.comb(N + L - 1, L - 1)
    assert all(sum(b) == N and min(b) >= 0 and len(b) == L for b in s.basis)
    assert all(s.index[b] == k for k, b in enumerate(s.basis))


@settings(max_examples=60, deadline=None)
@given(L=st.integers(2, 4), N=st.integers(1, 5), data=st.data())
def test_hopping_conserves_number_and_is_adjoint(L, N, data):
    s = enumerate_sector(L, N)
    i = data.draw(st.integers(0, L - 1))
    j = data.draw(st.integers(0, L - 1).filter(lambda x: x != i))
    state = data.draw(st.sampled_from(s.basis))
    image, _ = hopping_element(state, i, j)
    assert sum(image) == N
    np.testing.assert_array_equal(hopping_matrix(s, i, j), hopping_matrix(s, j, i).T)
