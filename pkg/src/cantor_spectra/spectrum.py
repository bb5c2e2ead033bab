"""Spectra of self-similar measures mu_{N,B} from Hadamard triples.

With ``0 ∈ B ∩ L`` and ``d = gcd(B)``, the seed ``Λ_0 = -(K(N, L) ∩ Z/d)`` is
the negated union of all m_B-cycles of the dual maps ``τ_l(x) = (x + l)/N``,
and ``Λ_n = N Λ_{n-1} + L`` is an increasing ladder whose union is a
spectrum. Scaling ``L`` by a power of ``p`` (coprime to ``N``) past the level
where ``K(N, L) ∩ D_p/d`` stops growing makes every ``p``-power multiple of
that spectrum a spectrum too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .automaton import grid_members
from .errors import Inconclusive, InvalidTriple, NotCoprime
from .exact import CantorSystem, format_rational, make_system
from .hadamard import HadamardTriple, check_hadamard, scale_spectrum_digits, translate_triple


def dual_system(T: HadamardTriple) -> CantorSystem:
    """``K(N, L)``, the attractor of the maps ``τ_l``."""
    return make_system(T.modulus, T.L, min_base=2)


def digit_gcd(T: HadamardTriple) -> int:
    return math.gcd(*T.B)


def normalize_triple(T: HadamardTriple) -> HadamardTriple:
    """Translate so that ``0 ∈ B ∩ L`` by subtracting ``min B`` and ``min L``."""
    return translate_triple(T, -min(T.B), -min(T.L))


def _require_normalized(T: HadamardTriple) -> None:
    if 0 not in T.B or 0 not in T.L:
        raise InvalidTriple("triple must contain 0 in both B and L; call normalize_triple first")


def lambda0(T: HadamardTriple) -> tuple[Fraction, ...]:
    """``-(K(N, L) ∩ Z/d)`` sorted ascending."""
    _require_normalized(T)
    members = grid_members(dual_system(T), digit_gcd(T))
    return tuple(sorted(-x for x in members))


@dataclass(frozen=True)
class Cycle:
    """Points ``x_1..x_k`` with ``τ_{labels[i]}(x_i) = x_{i+1}`` cyclically."""

    points: tuple[Fraction, ...]
    labels: tuple[int, ...]

    def to_json(self) -> dict:
        return {"points": [format_rational(x) for x in self.points], "labels": [str(x) for x in self.labels]}


def mB_cycles(T: HadamardTriple) -> list[Cycle]:
    """All simple cycles of the ``τ_l`` on ``(Z/d) ∩ hull K(N, L)``.

    For ``x`` in ``Z/d`` every ``b x`` is an integer, so ``|m_B(x)| = 1``:
    these are exactly the m_B-cycles. Each cycle starts at its least point.
    """
    if 0 not in T.B:
        raise InvalidTriple("m_B-cycles are defined for 0 in B")
    sys = dual_system(T)
    d = digit_gcd(T)
    N = T.modulus
    lo = math.ceil(sys.hull_lo * d)
    hi = math.floor(sys.hull_hi * d)
    # node k stands for k/d; tau_l(k/d) = (k + l d)/(N d), in Z/d iff N | k + l d
    succ: dict[int, list[tuple[int, int]]] = {}
    for k in range(lo, hi + 1):
        succ[k] = [((k + l * d) // N, l) for l in T.L if (k + l * d) % N == 0]

    cycles: list[Cycle] = []
    for start in range(lo, hi + 1):
        # paths from start through nodes > start, closing back at start
        stack = [(start, iter(succ[start]))]
        path_nodes = [start]
        path_labels: list[int] = []
        on_path = {start}
        while stack:
            node, it = stack[-1]
            step = next(it, None)
            if step is None:
                stack.pop()
                on_path.discard(path_nodes.pop())
                if path_labels:
                    path_labels.pop()
                continue
            nxt, label = step
            if nxt == start:
                cycles.append(
                    Cycle(tuple(Fraction(k, d) for k in path_nodes), tuple(path_labels + [label]))
                )
            elif nxt > start and nxt not in on_path:
                stack.append((nxt, iter(succ[nxt])))
                path_nodes.append(nxt)
                path_labels.append(label)
                on_path.add(nxt)
    return cycles


@dataclass(frozen=True)
class SpectrumLadder:
    triple: HadamardTriple
    d: int
    lambda0: tuple[Fraction, ...]
    levels: tuple[tuple[Fraction, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def integer_level(self, n: int) -> tuple[int, ...]:
        lvl = self.levels[n]
        if any(x.denominator != 1 for x in lvl):
            raise ValueError(f"level {n} has non-integer elements")
        return tuple(int(x) for x in lvl)

    def scaled(self, t: int) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(sorted(t * x for x in lvl)) for lvl in self.levels)

    def to_json(self) -> dict:
        return {
            "triple": self.triple.to_json(),
            "d": str(self.d),
            "lambda0": [format_rational(x) for x in self.lambda0],
            "levels": [[format_rational(x) for x in lvl] for lvl in self.levels],
        }


def spectrum_ladder(T: HadamardTriple, depth: int) -> SpectrumLadder:
    """Levels ``Λ_0 .. Λ_depth``; raises if a level fails to contain the previous."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    _require_normalized(T)
    check = check_hadamard(T)
    if not check:
        raise InvalidTriple(f"not a Hadamard triple, witness {check.witness}")
    seed = lambda0(T)
    levels = [seed]
    N = T.modulus
    for n in range(1, depth + 1):
        prev = levels[-1]
        nxt = tuple(sorted({N * x + l for x in prev for l in T.L}))
        if not set(prev) <= set(nxt):
            raise InvalidTriple(f"ladder nesting violated at level {n}")
        levels.append(nxt)
    return SpectrumLadder(triple=T, d=digit_gcd(T), lambda0=seed, levels=tuple(levels))


@dataclass(frozen=True)
class EigenSpectrumReport:
    base_triple: HadamardTriple
    factors: tuple[int, ...]
    p: int
    n0: int
    window: int
    level_sizes: tuple[int, ...]
    ladder: SpectrumLadder
    identities: tuple[tuple[tuple[int, ...], bool], ...]
    ladders: dict = field(repr=False, compare=False)

    @property
    def all_identities_hold(self) -> bool:
        return all(ok for _, ok in self.identities)

    def scale_for(self, exponents: Sequence[int]) -> int:
        return math.prod(f**n for f, n in zip(self.factors, exponents))

    def to_json(self) -> dict:
        return {
            "base_triple": self.base_triple.to_json(),
            "factors": [str(x) for x in self.factors],
            "p": str(self.p),
            "n0": self.n0,
            "n0_status": "observed",
            "window": self.window,
            "level_sizes": list(self.level_sizes),
            "ladder": self.ladder.to_json(),
            "scaling_identities_checked": [
                {"exponents": list(e), "holds": ok} for e, ok in self.identities
            ],
        }


# Largest hull grid scanned while looking for n0.
MAX_SCAN_GRID = 2 * 10**7


def observed_n0(T: HadamardTriple, p: int, max_n0_scan: int, window: int) -> tuple[int, tuple[int, ...], list[Fraction]]:
    """Smallest ``n`` such that ``K(N, L) ∩ Z/(d p^m)`` is unchanged for
    ``m = n .. n + window``. Returns ``(n0, sizes per scanned level, points at n0)``.

    Levels are nested, so equal sizes mean equal sets; the scan stops at the
    first level that completes a window.
    """
    sys = dual_system(T)
    d = digit_gcd(T)
    sizes: list[int] = []
    points: dict[int, list[Fraction]] = {}
    for n in range(max_n0_scan + 1):
        den = d * p**n
        if den * sys.diam > MAX_SCAN_GRID:
            break
        points[n] = grid_members(sys, den)
        sizes.append(len(points[n]))
        n0 = n - window
        if n0 >= 0 and all(sizes[m] == sizes[n0] for m in range(n0, n + 1)):
            return n0, tuple(sizes), points[n0]
    raise Inconclusive(
        f"no stabilization over {window} levels within n <= {len(sizes) - 1} (max_n0_scan={max_n0_scan})"
    )


def eigen_spectrum(
    T: HadamardTriple,
    factors: Sequence[int],
    depth: int,
    max_n0_scan: int = 10,
    window: int = 4,
    exponent_tuples: Sequence[Sequence[int]] | None = None,
) -> EigenSpectrumReport:
    """Spectrum ``Λ`` such that ``prod p_i^{n_i} Λ`` is again a spectrum.

    Builds the ladder of ``(N, B, p^{n0} L)`` and, for every requested
    exponent tuple ``e``, rebuilds the ladder of ``(N, B, t p^{n0} L)`` with
    ``t = prod p_i^{e_i}`` from scratch and compares it with ``t Λ_n`` level
    by level.
    """
    factors = tuple(int(f) for f in factors)
    if not factors or any(f < 2 for f in factors):
        raise ValueError("factors must be integers >= 2")
    p = math.prod(factors)
    if math.gcd(p, T.modulus) != 1:
        raise NotCoprime(f"gcd({p}, {T.modulus}) != 1")
    if len(T.B) >= T.modulus:
        raise InvalidTriple("need #B < N")
    base = normalize_triple(T)
    n0, sizes, seed_points = observed_n0(base, p, max_n0_scan, window)

    scale0 = p**n0
    ladder = spectrum_ladder(scale_spectrum_digits(base, scale0), depth)
    if set(ladder.lambda0) != {-scale0 * x for x in seed_points}:
        raise AssertionError("seed of the scaled triple disagrees with the stabilized intersection")

    if exponent_tuples is None:
        exponent_tuples = [tuple(0 for _ in factors)] + [
            tuple(int(i == j) for j in range(len(factors))) for i in range(len(factors))
        ]
    identities = []
    ladders = {}
    for exps in exponent_tuples:
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(factors) or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent tuple {exps}")
        t = math.prod(f**e for f, e in zip(factors, exps))
        other = spectrum_ladder(scale_spectrum_digits(base, t * scale0), depth)
        ladders[exps] = other
        identities.append((exps, other.levels == ladder.scaled(t)))
    return EigenSpectrumReport(
        base_triple=base,
        factors=factors,
        p=p,
        n0=n0,
        window=window,
        level_sizes=sizes,
        ladder=ladder,
        identities=tuple(identities),
        ladders=ladders,
    )
