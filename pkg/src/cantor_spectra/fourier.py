"""Fourier-side checks for mu_{N,B}.

The transform factors as ``mu^(ξ) = prod_{k>=1} m_B(-ξ / N^k)`` with the
mask ``m_B(x) = mean_b exp(2πi b x)``. Orthogonality of exponentials is
decided exactly (a factor vanishes iff a cyclotomic divisibility holds);
completeness is only probed numerically through
``Q(ξ) = sum_λ |mu^(ξ + λ)|^2``, which equals 1 everywhere exactly for a
spectrum.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .numtheory import vanishing_root_sum

# Rationals with denominators up to this are evaluated through exact angle
# reduction and an exact zero test.
EXACT_DENOMINATOR_LIMIT = 10**6
FLOAT_SLACK = 1e-12


def mB_eval(B: Sequence[int], x):
    """Mask ``m_B(x)``; exact zero/one for rationals of modest denominator.

    Accepts a Fraction/int (scalar) or a float / numpy array (vectorized).
    """
    B = [int(b) for b in B]
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        x = Fraction(x)
        if x.denominator <= EXACT_DENOMINATOR_LIMIT:
            den = x.denominator
            exps = [b * x.numerator % den for b in B]
            if all(e == 0 for e in exps):
                return complex(1.0)
            if vanishing_root_sum(exps, den):
                return complex(0.0)
            return sum(cmath.exp(2j * math.pi * e / den) for e in exps) / len(B)
        x = float(x)
    arr = np.asarray(x, dtype=float)
    vals = np.exp(2j * np.pi * np.multiply.outer(arr, np.asarray(B, dtype=float))).mean(axis=-1)
    return complex(vals) if vals.ndim == 0 else vals


def mu_hat(N: int, B: Sequence[int], xi, depth: int = 30):
    """Truncated product ``prod_{k=1}^{depth} m_B(-ξ/N^k)``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(xi, (Fraction, int)) and not isinstance(xi, bool):
        xi = Fraction(xi)
        acc = complex(1.0)
        for k in range(1, depth + 1):
            acc *= mB_eval(B, -xi / N**k)
            if acc == 0:
                return complex(0.0)
        return acc
    arr = np.asarray(xi, dtype=float)
    Bf = np.asarray(B, dtype=float)
    acc = np.ones(arr.shape, dtype=complex)
    for k in range(1, depth + 1):
        acc *= np.exp(-2j * np.pi * np.multiply.outer(arr / float(N) ** k, Bf)).mean(axis=-1)
    return complex(acc) if acc.ndim == 0 else acc


def mu_hat_tail(N: int, B: Sequence[int], xi, depth: int):
    """Bound on ``|1 - prod_{k>depth} m_B(-ξ/N^k)|``.

    Each neglected factor is within ``2π max|b| |ξ| / N^k`` of 1, and the
    geometric tail sums to ``2π max|b| |ξ| / (N^depth (N - 1))``.
    """
    bmax = max(abs(int(b)) for b in B)
    return 2 * math.pi * bmax * np.abs(np.asarray(xi, dtype=float)) / (float(N) ** depth * (N - 1))


@dataclass(frozen=True)
class GramCheck:
    valid: bool
    witness: tuple[int, int] | None = None
    pairs_checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


def zero_factor_cutoff(N: int, bmax: int, delta: int) -> int:
    """Index past which no factor ``m_B(delta / N^k)`` can vanish.

    Once ``N^k >= 4 max|b| |delta|`` all phases lie in ``(-π/2, π/2)``, the
    factor has positive real part, so ``ceil(log_N(4 bmax |delta|)) + 1``
    levels suffice.
    """
    target = 4 * bmax * abs(delta)
    k, power = 0, 1
    while power < target:
        power *= N
        k += 1
    return k + 1


def orthogonal_exact(N: int, B: Sequence[int], delta: int) -> bool:
    """Whether ``mu^(delta) = 0``, i.e. some factor vanishes exactly."""
    if delta == 0:
        return False
    bmax = max(abs(b) for b in B)
    for k in range(1, zero_factor_cutoff(N, bmax, delta) + 1):
        M = N**k
        if vanishing_root_sum((b * delta % M for b in B), M):
            return True
    return False


def gram_offdiag_exact(spectrum: Sequence, N: int, B: Sequence[int]) -> GramCheck:
    """Exact pairwise orthogonality of ``{exp(2πi λ x)}`` in ``L^2(mu_{N,B})``."""
    lams = []
    for x in spectrum:
        fx = Fraction(x)
        if fx.denominator != 1:
            raise ValueError(f"non-integer spectrum element {x}")
        lams.append(int(fx))
    lams = sorted(set(lams))
    B = [int(b) for b in B]
    first_pair: dict[int, tuple[int, int]] = {}
    for i, a in enumerate(lams):
        for b in lams[i + 1:]:
            first_pair.setdefault(b - a, (a, b))
    for delta in sorted(first_pair):
        if not orthogonal_exact(N, B, delta):
            return GramCheck(False, first_pair[delta], len(first_pair))
    return GramCheck(True, None, len(first_pair))


def default_xi_grid(N: int, B: Sequence[int], points: int = 101) -> np.ndarray:
    """``points`` equispaced values on one hull-length interval ``[0, diam]``."""
    diam = (max(B) - min(B)) / (N - 1)
    return np.linspace(0.0, diam, points)


@dataclass(frozen=True)
class ParsevalReport:
    N: int
    B: tuple[int, ...]
    spectrum_cut: tuple
    xi_grid: tuple[float, ...]
    product_depth: int
    Q_values: tuple[float, ...]
    max_deviation: float
    eps_trunc: float
    extended_precision: bool = False
    tolerance: float | None = None

    @property
    def passes(self) -> bool | None:
        if self.tolerance is None:
            return None
        return self.max_deviation <= self.tolerance

    @property
    def bessel_ok(self) -> bool:
        return all(0.0 <= v <= 1.0 + self.eps_trunc for v in self.Q_values)

    def to_json(self) -> dict:
        return {
            "N": str(self.N),
            "B": [str(b) for b in self.B],
            "spectrum_size": len(self.spectrum_cut),
            "product_depth": self.product_depth,
            "grid_points": len(self.xi_grid),
            "max_deviation": self.max_deviation,
            "eps_trunc": self.eps_trunc,
            "extended_precision": self.extended_precision,
            "tolerance": self.tolerance,
            "passes": self.passes,
            "bessel_ok": self.bessel_ok,
        }

    def csv_rows(self) -> list[list[str]]:
        return [["xi", "Q"]] + [[repr(x), repr(q)] for x, q in zip(self.xi_grid, self.Q_values)]


def _q_values(N, B, lam, xi, depth):
    pts = xi[:, None] + lam[None, :]
    vals = np.abs(mu_hat(N, B, pts, depth)) ** 2
    tails = np.minimum(1.0, 2.0 * mu_hat_tail(N, B, pts, depth))
    return vals.sum(axis=1), (vals * tails).sum(axis=1)


def _q_value_mp(N, B, lam, xi, depth, dps=40) -> float:
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        two_pi_i = 2j * mpmath.pi
        for l in lam:
            x = mpmath.mpf(xi) + mpmath.mpf(int(l))
            acc = mpmath.mpc(1)
            for k in range(1, depth + 1):
                t = -x / mpmath.mpf(N) ** k
                acc *= mpmath.fsum(mpmath.exp(two_pi_i * b * t) for b in B) / len(B)
            total += abs(acc) ** 2
        return float(total)


def parseval_check(
    N: int,
    B: Sequence[int],
    spectrum_cut: Sequence,
    xi_grid: Sequence[float] | None = None,
    product_depth: int = 30,
    tolerance: float | None = None,
) -> ParsevalReport:
    """Evaluate ``Q(ξ)`` on a grid and report ``max |Q - 1|``.

    ``eps_trunc`` bounds how far the truncated product can overshoot
    (plus float slack); Q can only be *over*-estimated by truncation.
    Grid points whose deviation sits within 1e-9 of ``tolerance`` are
    recomputed at 40 significant digits.
    """
    B = tuple(int(b) for b in B)
    cut = tuple(sorted(Fraction(x) for x in spectrum_cut))
    xi = default_xi_grid(N, B) if xi_grid is None else np.asarray(xi_grid, dtype=float)
    lam = np.array([float(x) for x in cut])
    Q, over = _q_values(N, B, lam, xi, product_depth)
    eps = float(over.max()) + FLOAT_SLACK * (len(cut) + 1) if len(xi) else FLOAT_SLACK
    extended = False
    if tolerance is not None:
        near = np.nonzero(np.abs(np.abs(Q - 1.0) - tolerance) <= 1e-9)[0]
        for i in near:
            Q[i] = _q_value_mp(N, B, [Fraction(x) for x in cut], float(xi[i]), product_depth)
            extended = True
    dev = float(np.abs(Q - 1.0).max()) if len(Q) else 0.0
    return ParsevalReport(
        N=N,
        B=B,
        spectrum_cut=cut,
        xi_grid=tuple(float(v) for v in xi),
        product_depth=product_depth,
        Q_values=tuple(float(v) for v in Q),
        max_deviation=dev,
        eps_trunc=eps,
        extended_precision=extended,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class ParsevalSweep:
    depths: tuple[int, ...]
    reports: tuple[ParsevalReport, ...]

    @property
    def deviations(self) -> tuple[float, ...]:
        return tuple(r.max_deviation for r in self.reports)

    @property
    def monotone(self) -> bool:
        """Q never drops by more than the truncation allowance as depth grows."""
        for a, b in zip(self.reports, self.reports[1:]):
            slack = max(a.eps_trunc, b.eps_trunc)
            if any(qb < qa - slack for qa, qb in zip(a.Q_values, b.Q_values)):
                return False
        return True

    @property
    def strictly_decreasing(self) -> bool:
        devs = self.deviations
        return all(b < a for a, b in zip(devs, devs[1:]))

    def to_json(self) -> dict:
        return {
            "depths": list(self.depths),
            "deviations": list(self.deviations),
            "monotone": self.monotone,
            "strictly_decreasing": self.strictly_decreasing,
            "reports": [r.to_json() for r in self.reports],
        }


def parseval_sweep(
    N: int,
    B: Sequence[int],
    levels: Sequence[Sequence],
    depths: Sequence[int],
    xi_grid: Sequence[float] | None = None,
    product_depth: int = 30,
    tolerance: float | None = None,
) -> ParsevalSweep:
    """Parseval reports for the ladder levels at each requested depth."""
    reports = tuple(
        parseval_check(N, B, levels[n], xi_grid, product_depth, tolerance) for n in depths
    )
    return ParsevalSweep(tuple(depths), reports)
