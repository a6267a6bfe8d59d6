"""Lattice-point visibility along power curves f(x) = a * x**b."""

from .forest import (
    Forest,
    PrimeMatrix,
    SearchResult,
    WitnessGrid,
    build_prime_matrix,
    construct_forest,
    crt_solve,
    find_nearest_forest,
    moduli,
    verify_forest,
)
from .numtheory import Factorization, factorize, ggcd, moebius, primes_up_to, valuation
from .visibility import (
    DensityReport,
    Point,
    VisibilityGrid,
    count_invisible_brute,
    count_visible_moebius,
    density_report,
    is_b_visible,
    sieve_grid,
    sight_coefficient,
)
from .zeta import ZetaValue, predicted_proportions, table_rows, zeta_int

__version__ = "0.1.0"
