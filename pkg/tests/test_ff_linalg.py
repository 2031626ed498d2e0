from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobnil.ff_linalg import (
    MAX_MODULUS,
    PrimeFieldElement,
    PrimeFieldMatrix,
    check_prime,
    endo_nilpotence_index,
    fitting_data,
    is_prime,
    iterate_kernel_chain,
    kernel,
    multinomial_mod_p,
    rref_basis,
)

SMALL_PRIMES = [2, 3, 5, 7]


def brute_null_count(arr: np.ndarray, p: int) -> int:
    """Count solutions of ``arr v = 0`` by enumerating F_p^cols."""
    rows, cols = arr.shape
    count = 0
    for v in itertools.product(range(p), repeat=cols):
        if rows == 0 or not np.any(arr @ np.array(v, dtype=np.int64) % p):
            count += 1
    return count


def brute_power(arr: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(arr.shape[0], dtype=object)
    for _ in range(e):
        out = out.dot(arr.astype(object)) % p
    return out


@st.composite
def small_matrices(draw, square=False, max_side=4):
    p = draw(st.sampled_from(SMALL_PRIMES))
    rows = draw(st.integers(1, max_side))
    cols = rows if square else draw(st.integers(1, max_side))
    if p ** cols > 3000:
        cols = 1 if not square else cols
    flat = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return np.array(flat, dtype=np.int64).reshape(rows, cols), p


@pytest.mark.parametrize("n,expected", [(0, False), (1, False), (2, True), (3, True), (4, False),
                                        (97, True), (91, False), (7919, True)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_check_prime_rejects():
    with pytest.raises(ValueError):
        check_prime(4)
    with pytest.raises(TypeError):
        check_prime(True)
    with pytest.raises(ValueError):
        check_prime(MAX_MODULUS + 2)  # next odd above the cap; prime or not it must be refused


def test_field_element_arithmetic():
    a, b = PrimeFieldElement(3, 7), PrimeFieldElement(5, 7)
    assert (a + b).value == 1
    assert (a - b).value == 5
    assert (a * b).value == 1
    assert (a / b).value == (3 * pow(5, -1, 7)) % 7
    assert (a ** 6).value == 1
    assert a.inverse().value * 3 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        PrimeFieldElement(0, 7).inverse()


@given(small_matrices())
@settings(max_examples=150, deadline=None)
def test_kernel_matches_enumeration(data):
    arr, p = data
    m = PrimeFieldMatrix(arr, p)
    basis = kernel(m)
    for v in basis:
        assert not np.any(m.apply(v))
    assert p ** len(basis) == brute_null_count(arr, p)
    assert m.rank() + m.nullity() == m.cols


@given(small_matrices())
@settings(max_examples=80, deadline=None)
def test_kernel_deterministic(data):
    arr, p = data
    k1 = kernel(PrimeFieldMatrix(arr, p))
    k2 = kernel(PrimeFieldMatrix(arr.copy(), p))
    assert [list(v) for v in k1] == [list(v) for v in k2]


def test_rref_basis_span():
    basis = rref_basis([[1, 2, 3], [2, 4, 6], [0, 1, 1]], 7, 3)
    assert basis.shape[0] == 2


@given(st.lists(st.integers(0, 60), min_size=1, max_size=4), st.sampled_from([2, 3, 5, 7, 11, 13, 101]))
@settings(max_examples=300, deadline=None)
def test_multinomial_against_big_integers(parts, p):
    exact = math.factorial(sum(parts))
    for x in parts:
        exact //= math.factorial(x)
    assert multinomial_mod_p(parts, p).value == exact % p


def test_multinomial_large_arguments():
    # Lucas digits handle arguments far beyond factorial range
    p = 1_000_003
    assert multinomial_mod_p([p ** 3, 2 * p ** 3], p).value == 3
    with pytest.raises(ValueError):
        multinomial_mod_p([], 5)
    with pytest.raises(ValueError):
        multinomial_mod_p([-1, 2], 5)


@given(small_matrices(square=True))
@settings(max_examples=150, deadline=None)
def test_nilpotence_index_against_powers(data):
    arr, p = data
    d = arr.shape[0]
    expected = None
    for e in range(1, d + 1):
        if not np.any(brute_power(arr, e, p)):
            expected = e
            break
    assert endo_nilpotence_index(PrimeFieldMatrix(arr, p)) == expected


@given(small_matrices(square=True))
@settings(max_examples=150, deadline=None)
def test_fitting_data_against_powers(data):
    arr, p = data
    d = arr.shape[0]
    nullities = [brute_null_count(brute_power(arr, e, p).astype(np.int64), p) for e in range(d + 1)]
    stable = nullities[d]
    hsl = min(e for e in range(d + 1) if nullities[e] == stable)
    got_stable, got_hsl = fitting_data(PrimeFieldMatrix(arr, p))
    assert p ** got_stable == stable
    assert got_hsl == hsl


def test_jordan_block_data():
    j3 = PrimeFieldMatrix(np.diag([1, 1], k=1), 5)
    assert endo_nilpotence_index(j3) == 3
    assert fitting_data(j3) == (3, 3)
    mixed = PrimeFieldMatrix(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 2]]), 5)
    assert endo_nilpotence_index(mixed) is None
    assert fitting_data(mixed) == (2, 2)


def test_kernel_chain_fills():
    p = 3
    a = PrimeFieldMatrix(np.array([[0, 1], [0, 0]]), p)
    chain = iterate_kernel_chain([a, a, a], 5)
    assert chain.dims == (1, 2)
    assert chain.full_at == 2 and chain.stabilized
    assert chain.nullity(0) == 0


def test_kernel_chain_stabilizes_without_filling():
    p = 5
    a = PrimeFieldMatrix(np.array([[1, 0], [0, 0]]), p)
    chain = iterate_kernel_chain([a] * 4, 4)
    assert chain.dims == (1, 1, 1, 1)
    assert chain.stabilized and chain.full_at is None


def test_kernel_chain_shape_mismatch():
    with pytest.raises(ValueError):
        iterate_kernel_chain([PrimeFieldMatrix.zeros(2, 3, 5), PrimeFieldMatrix.zeros(2, 3, 5)], 2)
