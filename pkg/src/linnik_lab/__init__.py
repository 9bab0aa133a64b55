"""Computational toolkit for primes in progressions via sifted sums and y-rough L-series."""

__version__ = "0.1.0"

from .errors import (CapacityError, ConditioningError, ConfigurationError, DomainError, ImaginaryResidueWarning,
                     LinnikLabError, PoleError, PrecisionWarning)
from .residues import (DirichletCharacter, UnitGroupStructure, build_unit_group, char_eval, classify_character,
                       enumerate_characters)
from .sieve import mertens_product, primes_in, psi_ap, rough_stream, von_mangoldt_stream
from .lemma_lab import ShiuSpec, shiu_ratio, sifted_ap_sum, sifted_char_sum, verify_sifted_lemma
from .lseries import (dirichlet_l, find_exceptional, hurwitz_zeta, l_q_one, l_rough, l_rough_deriv,
                      measure_lseries_bounds, siegel_zero_scan)
from .analysis import DirichletPolynomial, mean_square_window, montgomery_check, mvt_probe, taylor_log_deriv_KN
from .linnik import (DeltaInput, delta, delta_star, exponent_fit, hybrid_identity_residual, parameter_schedule,
                     recursion_residual, theorem_probe)
