import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cantor_spectra import (
    IntPoly,
    bloshchitsyn_params,
    cyclotomic_poly,
    multiplicative_order,
    order_lower_bound_constant,
    vanishing_root_sum,
)
from cantor_spectra.errors import NotCoprime, NotPrime
from cantor_spectra.numtheory import divisors, factorize, is_prime, radical, totient

from oracles import brute_force_order, float_cyclotomic, root_sum_magnitude


def _sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
    return flags


def test_is_prime_against_sieve():
    flags = _sieve(20000)
    assert all(is_prime(n) == flags[n] for n in range(20001))


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


@settings(max_examples=200)
@given(st.integers(1, 10**15))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


def test_factorize_semiprime():
    p, q = 1000003, 998244353
    assert factorize(p * q) == {p: 1, q: 1}


@given(st.integers(1, 3000))
def test_totient_radical_divisors(n):
    assert totient(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    assert radical(n) == math.prod(factorize(n))
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


@pytest.mark.parametrize("a,m,order", [(2, 7, 3), (3, 5, 4), (3, 2, 1), (5, 1, 1), (10, 49, 42)])
def test_order_examples(a, m, order):
    assert multiplicative_order(a, m) == order


def test_order_not_coprime():
    with pytest.raises(NotCoprime):
        multiplicative_order(6, 9)


@given(st.integers(2, 500), st.integers(1, 2000))
def test_order_matches_brute_force(a, m):
    if math.gcd(a, m) != 1:
        return
    n = multiplicative_order(a, m)
    assert n == brute_force_order(a, m)
    assert totient(m) % n == 0


@pytest.mark.parametrize(
    "p,q,m,d",
    [(5, 3, 1, 4), (11, 3, 2, 5), (7, 2, 1, 3), (2, 3, 3, 2)],
)
def test_bloshchitsyn_examples(p, q, m, d):
    params = bloshchitsyn_params(p, q)
    assert (params.m, params.d) == (m, d)


def test_bloshchitsyn_orders_by_direct_computation():
    for p in (2, 3, 5, 7, 11, 13):
        for q in range(2, 30):
            if q % p == 0:
                continue
            par = bloshchitsyn_params(p, q)
            for n in range(1, 4):
                assert brute_force_order(q, p ** (par.m + n)) == p**n * par.d
            for j in range(par.plateau_from, par.m + 1):
                assert brute_force_order(q, p**j) == par.d


def test_bloshchitsyn_rejects():
    with pytest.raises(NotPrime):
        bloshchitsyn_params(9, 2)
    with pytest.raises(NotCoprime):
        bloshchitsyn_params(3, 6)


@pytest.mark.parametrize("primes,q,c", [((5,), 3, F(1, 5)), ((11,), 3, F(1, 121)), ((5, 11), 3, F(1, 605))])
def test_order_constant_examples(primes, q, c):
    assert order_lower_bound_constant(primes, q) == c


@settings(max_examples=100)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=2))
def test_order_lower_bound(ns):
    primes, q = (5, 11), 3
    M = 5 ** ns[0] * 11 ** ns[1]
    assert multiplicative_order(q, M) >= order_lower_bound_constant(primes, q) * M


def test_cyclotomic_examples():
    assert str(cyclotomic_poly(4)) == "x^2 + 1"
    assert str(cyclotomic_poly(6)) == "x^2 - x + 1"
    assert cyclotomic_poly(1).coeffs == (-1, 1)


@pytest.mark.parametrize("n", range(1, 41))
def test_cyclotomic_against_float_roots(n):
    phi = cyclotomic_poly(n)
    assert list(phi.coeffs) == float_cyclotomic(n)
    assert phi.degree == totient(n)
    if n > 1:
        assert phi(0) == 1


def test_cyclotomic_product_identity():
    for n in range(1, 60):
        prod = IntPoly((1,))
        for d in divisors(n):
            prod = prod * cyclotomic_poly(d)
        assert prod.coeffs == (-1,) + (0,) * (n - 1) + (1,)


def test_polynomial_division():
    num = IntPoly.from_exponents([0, 2, 2, 5])
    q, r = num.divmod_monic(cyclotomic_poly(3))
    assert r.degree < 2
    for x in range(-5, 6):
        assert num(x) == q(x) * cyclotomic_poly(3)(x) + r(x)


def test_vanishing_examples():
    assert vanishing_root_sum([0, 2], 4)
    assert not vanishing_root_sum([0, 1], 4)
    assert vanishing_root_sum([0, 1, 2], 3)
    assert vanishing_root_sum([1, 7, 13, 19, 25, 0, 10, 20], 30)
    assert vanishing_root_sum([], 5)  # empty sum is zero


@settings(max_examples=300)
@given(st.integers(1, 60), st.lists(st.integers(0, 200), min_size=1, max_size=8))
def test_vanishing_reduce_matches_direct(N, exps):
    assert vanishing_root_sum(exps, N) == vanishing_root_sum(exps, N, reduce=False)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 200), st.lists(st.integers(0, 400), min_size=1, max_size=8))
def test_vanishing_matches_numeric(N, exps):
    mag = root_sum_magnitude(exps, N)
    if mag < 1e-20:
        assert vanishing_root_sum(exps, N)
    else:
        assert mag > 1e-9
        assert not vanishing_root_sum(exps, N)
