"""Exact verification of Hadamard triples (N, B, L).

``(N, B, L)`` is a Hadamard triple when ``(exp(2πi b l / N) / sqrt(#B))`` is
unitary, i.e. ``sum_b exp(2πi b (l - l') / N) = 0`` for all ``l != l'``.
Each such sum is decided by cyclotomic divisibility, never by tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidTriple, NotCoprime
from .numtheory import vanishing_root_sum


@dataclass(frozen=True)
class HadamardTriple:
    modulus: int
    B: tuple[int, ...]
    L: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise InvalidTriple("modulus N must be >= 2")
        if len(set(self.B)) != len(self.B) or len(set(self.L)) != len(self.L):
            raise InvalidTriple("B and L must not contain repeated integers")
        if len(self.B) != len(self.L):
            raise InvalidTriple(f"#B = {len(self.B)} differs from #L = {len(self.L)}")
        if len(self.B) < 2:
            raise InvalidTriple("#B must be at least 2")

    @classmethod
    def of(cls, N: int, B: Iterable[int], L: Iterable[int]) -> "HadamardTriple":
        return cls(int(N), tuple(sorted(int(b) for b in B)), tuple(sorted(int(x) for x in L)))

    def to_json(self) -> dict:
        return {"N": str(self.modulus), "B": [str(b) for b in self.B], "L": [str(x) for x in self.L]}


@dataclass(frozen=True)
class HadamardCheck:
    valid: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        out: dict = {"valid": self.valid}
        if self.witness is not None:
            out["witness"] = [str(self.witness[0]), str(self.witness[1])]
        return out


def check_hadamard(N: int | HadamardTriple, B: Iterable[int] | None = None, L: Iterable[int] | None = None) -> HadamardCheck:
    """Exact unitarity test; on failure the witness is the first bad ``(l, l')``."""
    T = N if isinstance(N, HadamardTriple) else HadamardTriple.of(N, B, L)
    n = T.modulus
    for l1 in T.L:
        for l2 in T.L:
            if l1 == l2:
                continue
            delta = l1 - l2
            if not vanishing_root_sum((b * delta % n for b in T.B), n):
                return HadamardCheck(False, (l1, l2))
    return HadamardCheck(True)


def _require_valid(T: HadamardTriple, what: str) -> HadamardTriple:
    check = check_hadamard(T)
    if not check:
        raise InvalidTriple(f"{what} produced a non-Hadamard triple, witness {check.witness}")
    return T


def translate_triple(T: HadamardTriple, b0: int, l0: int) -> HadamardTriple:
    """``(N, B + b0, L + l0)``; translations preserve the Hadamard property."""
    out = HadamardTriple.of(T.modulus, (b + b0 for b in T.B), (x + l0 for x in T.L))
    return _require_valid(out, "translation")


def scale_spectrum_digits(T: HadamardTriple, p: int) -> HadamardTriple:
    """``(N, B, p L)`` for ``gcd(p, N) = 1``: ``Φ_N`` vanishes at every
    primitive N-th root, so orthogonality survives ``ζ -> ζ^p``."""
    if p < 1:
        raise ValueError("p must be positive")
    if math.gcd(p, T.modulus) != 1:
        raise NotCoprime(f"gcd({p}, {T.modulus}) != 1")
    out = HadamardTriple.of(T.modulus, T.B, (p * x for x in T.L))
    return _require_valid(out, "scaling")
