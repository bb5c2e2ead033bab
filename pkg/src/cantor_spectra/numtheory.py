"""Multiplicative orders, prime-power order growth, and cyclotomic tests."""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import FactorizationLimit, NotCoprime, NotPrime

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)  # gaps between residues coprime to 30
_TRIAL_LIMIT = 100_000
_RHO_WORK_LIMIT = 2_000_000


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, probabilistic above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int | None:
    if n % 2 == 0:
        return 2
    work = 0
    for _ in range(8):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = x = q = 1
        ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            work += r
            if work > _RHO_WORK_LIMIT:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: k}`` of ``n >= 1``.

    Trial division over a mod-30 wheel, then Pollard-Brent on what remains.
    Raises FactorizationLimit if the work budget runs out.
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: Counter[int] = Counter()
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] += 1
            n //= p
    p, i = 7, 0
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] += 1
            n //= p
        p += _WHEEL[i]
        i = (i + 1) % len(_WHEEL)
    if n > 1:
        rng = random.Random(n)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] += 1
                continue
            f = _pollard_brent(m, rng)
            if f is None:
                raise FactorizationLimit(f"could not factor {m} within the work limit")
            stack.extend((f, m // f))
    return dict(sorted(out.items()))


def totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def radical(n: int) -> int:
    return math.prod(factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, k in factorize(n).items():
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return sorted(divs)


def multiplicative_order(a: int, m: int) -> int:
    """Least ``n >= 1`` with ``a**n ≡ 1 (mod m)``; ``ord_1(a) = 1``."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1, order undefined")
    # totient factored via the factorization of m: phi = prod p^(k-1) (p-1)
    phi_factors: Counter[int] = Counter()
    for p, k in factorize(m).items():
        if k > 1:
            phi_factors[p] += k - 1
        phi_factors.update(factorize(p - 1))
    order = math.prod(p**k for p, k in phi_factors.items())
    a %= m
    for p in phi_factors:
        while order % p == 0 and pow(a, order // p, m) == 1:
            order //= p
    return order


def _p_adic_valuation_of_power_minus_one(q: int, d: int, p: int) -> int:
    """Largest ``j`` with ``q**d ≡ 1 (mod p**j)``."""
    j = 0
    while pow(q, d, p ** (j + 1)) == 1:
        j += 1
    return j


@dataclass(frozen=True)
class BloshchitsynParams:
    """Order growth of ``q`` modulo powers of ``p``.

    ``ord_{p^j}(q) = d`` for ``plateau_from <= j <= m`` and
    ``ord_{p^{m+n}}(q) = p^n d`` for every ``n >= 1``. ``plateau_from`` is 1
    except for ``p = 2, q ≡ 3 (mod 4)`` where ``ord_2(q) = 1 < d = 2``.
    """

    prime: int
    base: int
    m: int
    d: int
    plateau_from: int = 1

    def order_at(self, j: int) -> int:
        """Predicted ``ord_{p^j}(q)`` for ``j >= plateau_from``."""
        if j < self.plateau_from:
            raise ValueError("prediction only holds from plateau_from on")
        return self.d if j <= self.m else self.prime ** (j - self.m) * self.d


def bloshchitsyn_params(p: int, q: int) -> BloshchitsynParams:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if q < 2:
        raise ValueError("base q must be >= 2")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    plateau_from = 1
    if p == 2:
        # lifting needs q^d ≡ 1 (mod 4), not just (mod 2)
        d = multiplicative_order(q, 4)
        if d != multiplicative_order(q, 2):
            plateau_from = 2
    else:
        d = multiplicative_order(q, p)
    m = _p_adic_valuation_of_power_minus_one(q, d, p)
    params = BloshchitsynParams(prime=p, base=q, m=m, d=d, plateau_from=plateau_from)
    if multiplicative_order(q, p ** (m + 1)) != p * d:
        raise AssertionError(f"order growth check failed for p={p}, q={q}")
    return params


def order_lower_bound_constant(primes: Sequence[int], q: int) -> Fraction:
    """``c2 = 1 / prod p_i^{m_i}`` with ``ord_{prod p_i^{n_i}}(q) >= c2 prod p_i^{n_i}``."""
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    denom = 1
    for p in primes:
        params = bloshchitsyn_params(p, q)
        denom *= p**params.m
    return Fraction(1, denom)


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending degree, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "IntPoly":
        counts = Counter(exponents)
        if not counts:
            return cls(())
        c = [0] * (max(counts) + 1)
        for e, k in counts.items():
            c[e] += k
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def divmod_monic(self, divisor: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) <= dd:
            return IntPoly(()), IntPoly(tuple(rem))
        quot = [0] * (len(rem) - dd)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j in range(dd + 1):
                    rem[i - dd + j] -= c * dc[j]
        return IntPoly(tuple(quot)), IntPoly(tuple(rem[:dd]))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            body = str(mag) if (mag != 1 or e == 0) else ""
            terms.append(("-" if c < 0 else "+", body + mono))
        sign, first = terms[0]
        text = ("-" if sign == "-" else "") + first
        for sign, t in terms[1:]:
            text += f" {sign} {t}"
        return text


@lru_cache(maxsize=512)
def cyclotomic_poly(n: int) -> IntPoly:
    """``Φ_n`` from ``x^n - 1 = prod_{d | n} Φ_d``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    poly = IntPoly((-1,) + (0,) * (n - 1) + (1,))
    for d in divisors(n)[:-1]:
        poly, rem = poly.divmod_monic(cyclotomic_poly(d))
        if not rem.is_zero():
            raise AssertionError(f"non-exact division building Φ_{n}")
    return poly


def vanishing_root_sum(exponents: Iterable[int], N: int, *, reduce: bool = True) -> bool:
    """Whether ``sum_k exp(2πi k/N)`` over the multiset ``exponents`` is zero.

    Decided exactly as ``Φ_N | sum x^k``. With ``reduce`` (default) the test
    runs over the radical ``r`` of ``N``: writing ``k = s j + t`` with
    ``s = N / r`` and ``0 <= t < s``, the powers ``ζ_N^t`` are linearly
    independent over ``Q(ζ_r)``, so the sum vanishes iff each residue class
    ``t`` gives ``Φ_r | sum x^j``. ``reduce=False`` divides by ``Φ_N`` directly.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    exps = [e % N for e in exponents]
    if not exps:
        return True
    if not reduce:
        _, rem = IntPoly.from_exponents(exps).divmod_monic(cyclotomic_poly(N))
        return rem.is_zero()
    r = radical(N)
    s = N // r
    phi_r = cyclotomic_poly(r)
    classes: dict[int, list[int]] = {}
    for e in exps:
        classes.setdefault(e % s, []).append(e // s)
    for group in classes.values():
        _, rem = IntPoly.from_exponents(group).divmod_monic(phi_r)
        if not rem.is_zero():
            return False
    return True
