"""Exact scalars and the digit-system types shared by every other module.

Rationals are :class:`fractions.Fraction`, which is always reduced with a
positive denominator, so structural equality and hashing are canonical.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import InvalidRational, InvalidSystem

Rational = Fraction
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or a plain integer into an exact Fraction."""
    if not isinstance(text, str):
        raise InvalidRational(f"expected rational text, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise InvalidRational(f"malformed rational {text!r}; expected 'num/den' or an integer")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InvalidRational(f"zero denominator in {text!r}")
    return Fraction(num, den)


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidRational("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InvalidRational(f"cannot interpret {value!r} as an exact rational")


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational_list(text: str) -> list[Fraction]:
    parts = [p for p in text.split(",") if p.strip()]
    return [parse_rational(p) for p in parts]


@dataclass(frozen=True)
class CantorSystem:
    """The digit system ``(q, A)`` with its integer scale and convex hull.

    ``K(q, A)`` is the set of sums ``sum a_i q^-i`` with every ``a_i`` in
    ``digits``; its convex hull is ``[min A/(q-1), max A/(q-1)]``.
    """

    q: int
    digits: tuple[Fraction, ...]
    scale: int
    hull_lo: Fraction
    hull_hi: Fraction

    @property
    def diam(self) -> Fraction:
        return self.hull_hi - self.hull_lo

    @property
    def integer_digits(self) -> tuple[int, ...]:
        """``scale * a`` for each digit, all integers."""
        return tuple(int(a * self.scale) for a in self.digits)

    def in_hull(self, x: Fraction) -> bool:
        return self.hull_lo <= x <= self.hull_hi

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "digits": [format_rational(a) for a in self.digits],
            "scale": str(self.scale),
            "hull": [format_rational(self.hull_lo), format_rational(self.hull_hi)],
        }


def make_system(q: int, digits: Iterable[RationalLike], *, min_base: int = 3) -> CantorSystem:
    """Normalized system: digits sorted, minimal integer scale, hull attached.

    ``min_base=2`` admits the interval-filling base 2, which only the
    spectrum code needs (dual systems ``K(N, L)`` with ``N = 2``).
    """
    if not isinstance(q, int) or q < min_base:
        raise InvalidSystem(f"base q must be an integer >= {min_base}, got {q!r}")
    ds = [as_rational(a) for a in digits]
    if len(set(ds)) != len(ds):
        raise InvalidSystem("digit set contains duplicates")
    if len(ds) < 2:
        raise InvalidSystem("digit set needs at least two digits")
    ds.sort()
    scale = math.lcm(*(a.denominator for a in ds))
    return CantorSystem(
        q=q,
        digits=tuple(ds),
        scale=scale,
        hull_lo=ds[0] / (q - 1),
        hull_hi=ds[-1] / (q - 1),
    )


def affine_digit_transform(sys: CantorSystem, r: RationalLike, alpha: RationalLike) -> CantorSystem:
    """Digit set ``A/r - alpha (q-1)/r``, so that ``K(q, new) = (K(q, A) - alpha)/r``.

    Counting ``(r D_p + alpha) ∩ K(q, A)`` is then the same as counting
    ``D_p ∩ K(q, new)``.
    """
    r = as_rational(r)
    alpha = as_rational(alpha)
    if r == 0:
        raise InvalidSystem("scaling factor r must be nonzero")
    shift = alpha * (sys.q - 1)
    return make_system(sys.q, [(a - shift) / r for a in sys.digits], min_base=min(sys.q, 3))


@dataclass(frozen=True)
class DpLevel:
    """The level ``D_p^n``: rationals whose reduced denominator divides
    ``prod p_i^{n_i}``."""

    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.exponents):
            raise InvalidSystem("primes and exponents differ in length")
        if len(set(self.primes)) != len(self.primes):
            raise InvalidSystem("primes must be pairwise distinct")
        if any(n < 0 for n in self.exponents):
            raise InvalidSystem("exponents must be nonnegative")

    @property
    def modulus(self) -> int:
        return math.prod(p**n for p, n in zip(self.primes, self.exponents))

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, Fraction)) and self.modulus % Fraction(x).denominator == 0
