"""Independent reference computations used only by the tests.

None of these share code paths with the package: they work forward from
partial sums, loop over powers, or evaluate numerically.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np


def brute_force_member(q: int, digits, x: Fraction) -> bool:
    """Depth-pruned search over digit words.

    Keeps every distinct partial sum ``s`` of length ``L`` whose cylinder
    ``[s + lo q^-L, s + hi q^-L]`` contains ``x``. ``x`` is a member iff the
    surviving set is never empty. Stops when the rescaled positions
    ``q^L (x - s)`` repeat as a set (the future is then periodic), or at
    ``L = floor(u N diam) + 2`` where any surviving word must already have
    revisited a position.
    """
    digits = sorted(Fraction(a) for a in digits)
    x = Fraction(x)
    lo = digits[0] / (q - 1)
    hi = digits[-1] / (q - 1)
    if not lo <= x <= hi:
        return False
    N = math.lcm(*(a.denominator for a in digits))
    max_len = math.floor(x.denominator * N * (hi - lo)) + 2
    live = {Fraction(0)}
    seen = set()
    for L in range(1, max_len + 1):
        w = Fraction(1, q**L)
        nxt = set()
        for s in live:
            for a in digits:
                t = s + a * w
                if t + lo * w <= x <= t + hi * w:
                    nxt.add(t)
        if not nxt:
            return False
        live = nxt
        key = frozenset((x - t) * q**L for t in live)
        if key in seen:
            return True
        seen.add(key)
    return True


def brute_force_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    x, n = a % m, 1
    while x != 1:
        x = x * a % m
        n += 1
        if n > m:
            raise ValueError("not invertible")
    return n


def float_cyclotomic(n: int) -> list[int]:
    roots = [cmath.exp(2j * math.pi * k / n) for k in range(1, n + 1) if math.gcd(k, n) == 1]
    coeffs = np.poly(roots)[::-1]
    return [int(round(c.real)) for c in coeffs]


def root_sum_magnitude(exponents, N: int) -> float:
    with mpmath.workdps(50):
        s = mpmath.fsum(mpmath.expjpi(mpmath.mpf(2 * e) / N) for e in exponents)
        return float(abs(s))


def cylinder_mu_hat(N: int, B, xi: float, depth: int = 10) -> complex:
    """Transform of the uniform measure on the depth-``depth`` cylinder
    left endpoints ``sum_{i<=depth} b_i N^-i``, summed directly."""
    pts = np.zeros(1)
    for i in range(1, depth + 1):
        pts = (pts[:, None] + np.asarray(B, float)[None, :] / float(N) ** i).ravel()
    return complex(np.exp(-2j * np.pi * xi * pts).mean())


def brute_force_ladder(N: int, L, seed, depth: int) -> list[set]:
    out = [set(seed)]
    for _ in range(depth):
        out.append({N * x + l for x in out[-1] for l in L})
    return out
