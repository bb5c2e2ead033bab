"""Exact rational points in self-similar Cantor sets, Hadamard triples, and
spectra of self-similar spectral measures."""

__version__ = "0.1.0"

from .automaton import MembershipCertificate, OrbitGraph, build_orbit_graph, is_member, state_bound
from .dp import IntersectionReport, dimension_upper_bound, dp_level_points, intersect_dp, uniform_bound_experiment
from .exact import CantorSystem, DpLevel, Rational, affine_digit_transform, make_system, parse_rational
from .fourier import gram_offdiag_exact, mB_eval, mu_hat, parseval_check
from .hadamard import HadamardTriple, check_hadamard, scale_spectrum_digits, translate_triple
from .numtheory import (
    BloshchitsynParams,
    IntPoly,
    bloshchitsyn_params,
    cyclotomic_poly,
    multiplicative_order,
    order_lower_bound_constant,
    vanishing_root_sum,
)
from .spectrum import EigenSpectrumReport, SpectrumLadder, eigen_spectrum, lambda0, mB_cycles, normalize_triple, spectrum_ladder
