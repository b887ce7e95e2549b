"""Exact counting and verification for consecutive patterns in permutations and words."""

__version__ = "0.1.0"

from .core import (Pattern, Word, all_patterns, complement, complement_word,
                   count_consecutive, is_monotone, is_nonoverlapping, is_standard_form,
                   overlap_set, reduce, reverse, standardize, symmetry_orbit)
from .enumeration import (PERMS, WORDS, BudgetExceeded, CountTable, ProbTable,
                          brute_perm_counts, brute_table, brute_word_counts,
                          dp_perm_counts, dp_word_counts, monte_carlo_a, perm_table,
                          perms_from_words, word_table)
from .events import perm_event_probability, word_event_probability
from .recursion import (H_closed, H_oracle, L_closed, L_oracle, M_closed, M_oracle,
                        Mtilde_closed, Mtilde_oracle, beta, beta_w, verify_monotone_recursion,
                        verify_nonoverlapping_recursion, verify_sandwich, verify_word_recursion)
from .wilf import (check_sufficiency, classify, khor_condition,
                   nonoverlapping_fraction, nonoverlapping_signature_check)
from .growth import (bound_report, extremal_ordering, lower_bound_closed, poly_bounds,
                     rho_estimate, upper_bound_block, verify_mineq)
from .correlation import (alpha_correlation, build_R, build_R_modified, expected_alpha_T1,
                          expected_alpha_Tr, genfunc_value, instances, verify_T1_system)
