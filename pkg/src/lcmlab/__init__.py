"""Exact experiments on the least common multiple of consecutive polynomial values."""

__version__ = "0.1.0"

from .poly import Polynomial, parse_poly, evaluate, is_even, is_squarefree, irreducibility_witness
from .valuation import build_table, prime_stats, mass_split, verify_mu_bounds
from .zerosum import find_roots, minimal_u, search_zero_sums
from .tuples import Sah, BaierDey, GenericU, Conjunction, enumerate_profiles, max_weight
