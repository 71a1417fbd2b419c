import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zetamoments.arith import (
    ArithTable, cached_sieve_dk, dirichlet_convolve, dk_prime_power, load_table, ones_table,
    primes_up_to, save_table, sieve_dk, sieve_mu, sieve_phi,
)
from zetamoments.errors import CapacityError, LengthMismatchError


def brute_dk(k: int, n: int) -> int:
    if k == 1:
        return 1
    return sum(brute_dk(k - 1, n // d) for d in range(1, n + 1) if n % d == 0)


def test_divisor_tables_against_brute_force():
    for k in (1, 2, 3, 4):
        table = sieve_dk(k, 300)
        assert [table[n] for n in range(1, 301)] == [brute_dk(k, n) for n in range(1, 301)]


def test_phi_and_mu_against_definitions():
    phi, mu = sieve_phi(500), sieve_mu(500)
    for n in range(1, 501):
        assert phi[n] == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)
    # sum_{d | n} mu(d) = [n = 1]
    for n in range(1, 501):
        assert sum(mu[d] for d in range(1, n + 1) if n % d == 0) == (n == 1)


def test_primes():
    assert list(primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(10**6).size == 78498


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 12))
def test_dk_prime_power(k, m):
    assert sieve_dk(k, 2**m)[2**m] == dk_prime_power(k, m) == math.comb(k + m - 1, m)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 2000), st.integers(2, 2000))
def test_dk_multiplicative(a, b):
    if math.gcd(a, b) != 1 or a * b > 10**5:
        return
    d3 = sieve_dk(3, a * b)
    assert d3[a * b] == d3[a] * d3[b]


def test_convolution_identities():
    N = 2000
    mu, one = sieve_mu(N), ones_table(N)
    delta = dirichlet_convolve(mu, one)
    assert delta[1] == 1 and not np.any(delta.values[1:])
    # phi * 1 = identity
    ident = dirichlet_convolve(sieve_phi(N), one)
    assert np.array_equal(ident.values, np.arange(1, N + 1))


def test_length_mismatch_and_capacity():
    with pytest.raises(LengthMismatchError):
        dirichlet_convolve(ones_table(10), ones_table(11))
    with pytest.raises(CapacityError):
        sieve_dk(2, 10**9)


def test_partial_sums_and_indexing():
    d = sieve_dk(2, 10)
    assert d.partial_sums()[-1] == 27
    assert d[1] == 1 and d[10] == 4


def test_cache_round_trip(tmp_path, monkeypatch):
    table = sieve_dk(3, 1000)
    path = save_table(table, tmp_path / "d3.bin", k=3)
    loaded, k = load_table(path)
    assert k == 3 and loaded.label == table.label and np.array_equal(loaded.values, table.values)
    monkeypatch.setenv("ZETAMOMENTS_CACHE", str(tmp_path))
    first = cached_sieve_dk(2, 500)
    again = cached_sieve_dk(2, 500)
    assert np.array_equal(first.values, again.values)
    assert any(tmp_path.iterdir())


def test_table_is_read_only():
    t = sieve_dk(2, 10)
    assert isinstance(t, ArithTable)
    with pytest.raises(ValueError):
        t.values[0] = 5
