"""Enumeration of D_p ∩ K(q, A) by levels, dimension bounds, and the
uniform bound over translates.

Level ``n`` means denominators dividing ``p**n``. Every scan is exact for
the levels it covers; whether the set is *complete* is only a heuristic
(no new points over a window of trailing levels), and reports keep those
two claims apart.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .automaton import grid_members, is_member
from .exact import CantorSystem, RationalLike, affine_digit_transform, as_rational, format_rational, make_system
from .numtheory import factorize

# Per-point membership beats a whole-grid pass when the grid is this much
# finer than the candidate lattice.
_GRID_OVERHEAD = 32


def _check_coprime(p: int, q: int) -> None:
    if math.gcd(p, q) != 1:
        warnings.warn(f"gcd(p={p}, q={q}) != 1; finiteness is not guaranteed", stacklevel=3)


def _members_with_denominator(sys: CantorSystem, denominator: int) -> list[Fraction]:
    candidates = math.floor(denominator * sys.diam) + 1
    grid = math.lcm(denominator, sys.scale)
    if math.floor(grid * sys.diam) + 1 <= _GRID_OVERHEAD * candidates:
        return grid_members(sys, denominator)
    lo = math.ceil(sys.hull_lo * denominator)
    hi = math.floor(sys.hull_hi * denominator)
    out = []
    for k in range(lo, hi + 1):
        x = Fraction(k, denominator)
        if is_member(sys, x).member:
            out.append(x)
    return out


def dp_level_points(sys: CantorSystem, p: int, n: int) -> list[Fraction]:
    """Members of K(q, A) whose denominator divides ``p**n``, sorted."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if n < 0:
        raise ValueError("level must be >= 0")
    _check_coprime(p, sys.q)
    return _members_with_denominator(sys, p**n)


def minimal_level(x: Fraction, p: int) -> int | None:
    """Smallest ``n`` with ``denominator(x) | p**n``, or None if x is not in D_p."""
    den = x.denominator
    n = 0
    while den != 1:
        g = math.gcd(den, p)
        if g == 1:
            return None
        den //= g
        n += 1
    # den | p^n may still need fewer levels when p has repeated factors
    while n > 0 and p ** (n - 1) % x.denominator == 0:
        n -= 1
    return n


@dataclass(frozen=True)
class IntersectionReport:
    system: CantorSystem
    p: int
    prime_base: tuple[int, ...]
    max_level: int
    window: int
    points: tuple[Fraction, ...]
    levels: tuple[int, ...]
    cumulative_counts: tuple[int, ...]
    stabilized: bool
    empty_levels_trailing: int

    @property
    def max_denominator(self) -> int:
        return max((x.denominator for x in self.points), default=1)

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "p": str(self.p),
            "prime_base": [str(x) for x in self.prime_base],
            "max_level": self.max_level,
            "window": self.window,
            "points": [format_rational(x) for x in self.points],
            "levels": list(self.levels),
            "cumulative_counts": list(self.cumulative_counts),
            "stabilized": self.stabilized,
            "claim": "complete (heuristic window)" if self.stabilized else "exact up to max_level",
            "empty_levels_trailing": self.empty_levels_trailing,
        }

    def csv_rows(self) -> list[list[str]]:
        return [["point", "level"]] + [[format_rational(x), str(n)] for x, n in zip(self.points, self.levels)]


def intersect_dp(sys: CantorSystem, p: int, max_level: int, window: int = 6) -> IntersectionReport:
    """Union of the level sets for ``n = 0 .. max_level`` with a stabilization flag.

    ``stabilized`` is true iff the last ``window`` levels added nothing new.
    """
    if max_level < 0:
        raise ValueError("max_level must be >= 0")
    if window < 1:
        raise ValueError("window must be >= 1")
    if p < 2:
        raise ValueError("p must be >= 2")
    _check_coprime(p, sys.q)
    pts = _members_with_denominator(sys, p**max_level)
    for x in pts:
        if not is_member(sys, x).member:
            raise AssertionError(f"grid member {x} failed the pointwise membership check")
    levels = [minimal_level(x, p) for x in pts]
    new_per_level = [0] * (max_level + 1)
    for n in levels:
        new_per_level[n] += 1
    cumulative = []
    total = 0
    for c in new_per_level:
        total += c
        cumulative.append(total)
    trailing = 0
    for c in reversed(new_per_level):
        if c:
            break
        trailing += 1
    stabilized = trailing >= window and max_level + 1 > window
    return IntersectionReport(
        system=sys,
        p=p,
        prime_base=tuple(factorize(p)),
        max_level=max_level,
        window=window,
        points=tuple(pts),
        levels=tuple(levels),
        cumulative_counts=tuple(cumulative),
        stabilized=stabilized,
        empty_levels_trailing=trailing,
    )


def digit_expansion(sys: CantorSystem, m: int) -> list[Fraction]:
    """Digit set of the m-fold system: ``q^{m-1} A + ... + q A + A``, deduplicated.

    ``K(q, A) = K(q^m, A_m)``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    scaled = {int(a * sys.scale) for a in sys.digits}
    base = set(scaled)
    acc = set(scaled)
    for _ in range(m - 1):
        acc = {sys.q * x + a for x in acc for a in base}
    return sorted(Fraction(x, sys.scale) for x in acc)


def dimension_upper_bound(sys: CantorSystem, max_m: int) -> tuple[float, int]:
    """``min_m log #A_m / (m log q)`` over ``1 <= m <= max_m`` and its argmin.

    A value below 1 certifies ``dim_H K(q, A) < 1``.
    """
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    best = None
    best_m = 1
    with mpmath.workdps(40):
        log_q = mpmath.log(sys.q)
        for m in range(1, max_m + 1):
            size = len(digit_expansion(sys, m))
            val = mpmath.log(size) / (m * log_q)
            if best is None or val < best:
                best, best_m = val, m
        return float(best), best_m


@dataclass(frozen=True)
class UniformBoundReport:
    system: CantorSystem
    p: int
    level: int
    alphas: tuple[Fraction, ...]
    counts: tuple[int, ...]
    points: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    difference_report: IntersectionReport | None
    difference_size: int
    certified_bound: int | None
    reason: str | None
    within_bound: bool | None

    @property
    def difference_denominator(self) -> int | None:
        if self.certified_bound is None or self.difference_report is None:
            return None
        return self.difference_report.max_denominator

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "p": str(self.p),
            "level": self.level,
            "counts": [
                {"alpha": format_rational(a), "count": c} for a, c in zip(self.alphas, self.counts)
            ],
            "difference_set_size": self.difference_size,
            "difference_points": (
                [format_rational(x) for x in self.difference_report.points]
                if self.difference_report is not None
                else None
            ),
            "difference_denominator": (
                str(self.difference_denominator) if self.difference_denominator is not None else None
            ),
            "certified_bound": str(self.certified_bound) if self.certified_bound is not None else None,
            "reason": self.reason,
            "within_bound": self.within_bound,
        }

    def csv_rows(self) -> list[list[str]]:
        return [["alpha", "count"]] + [[format_rational(a), str(c)] for a, c in zip(self.alphas, self.counts)]


def translate_points(sys: CantorSystem, p: int, alpha: RationalLike, level: int) -> list[Fraction]:
    """All ``x`` with denominator dividing ``p**level`` and ``x + alpha`` in K(q, A)."""
    shifted = affine_digit_transform(sys, 1, as_rational(alpha))
    return dp_level_points(shifted, p, level)


def difference_system(sys: CantorSystem) -> CantorSystem | None:
    diffs = {a - b for a in sys.digits for b in sys.digits}
    return make_system(sys.q, diffs)


def uniform_bound_experiment(
    sys: CantorSystem,
    p: int,
    alphas: Sequence[RationalLike],
    level: int,
    *,
    window: int = 6,
    difference_level: int | None = None,
) -> UniformBoundReport:
    """Count ``(D_p + alpha) ∩ K(q, A)`` up to ``level`` for each alpha.

    When ``#(A - A) < q`` and the scan of ``D_p ∩ K(q, A - A)`` stabilizes,
    every gap between two counted points is a nonzero element of that finite
    set, so it is at least ``1/N_Q`` with ``N_Q`` its largest denominator and
    the count is at most ``floor(N_Q diam K(q, A)) + 1``.
    """
    _check_coprime(p, sys.q)
    alphas = tuple(as_rational(a) for a in alphas)
    pts = tuple(tuple(translate_points(sys, p, a, level)) for a in alphas)
    counts = tuple(len(x) for x in pts)

    diff = difference_system(sys)
    diff_size = len(diff.digits)
    diff_report = None
    bound = None
    reason = None
    within = None
    if diff_size >= sys.q:
        reason = f"#(A-A) = {diff_size} >= q = {sys.q}"
    else:
        diff_level = level if difference_level is None else difference_level
        diff_report = intersect_dp(diff, p, diff_level, window)
        if not diff_report.stabilized:
            reason = "difference-set enumeration did not stabilize"
        else:
            bound = math.floor(diff_report.max_denominator * sys.diam) + 1
            within = all(c <= bound for c in counts)
    return UniformBoundReport(
        system=sys,
        p=p,
        level=level,
        alphas=alphas,
        counts=counts,
        points=pts,
        difference_report=diff_report,
        difference_size=diff_size,
        certified_bound=bound,
        reason=reason,
        within_bound=within,
    )
