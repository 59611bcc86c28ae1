"""Dunkl harmonic analysis on the real line and Besov-Dunkl spaces."""

from .errors import DomainError, RangeError
from .special import AlphaParameter, as_alpha, bessel_j_normalized, dunkl_kernel, gamma
from .measure import (QuadGrid, SampledFunction, build_grid, integrate, lp_norm,
                      function_from_csv, function_from_json)
from .transform import (Spectrum, forward_transform, inverse_transform, bandlimit_project,
                        spectral_filter, spectral_tail_norm)
from .translation import (AngularRule, make_angular_rule, translate_angular, translate_kernel,
                          kernel_W, kernel_abs_mass, bessel_translate, convolve)
from .operator import (apply_dunkl_operator, theta_weight, taylor_remainder, KDecomposition,
                       k_decomposition)
from .smoothness import (ScaleSet, modulus_of_smoothness, k_functional_estimate, best_approx,
                         make_mollifier, dilate_mollifier, mollify)
from .besov import (BesovParams, SeminormReport, besov_w_seminorm, besov_k_seminorm,
                    besov_e_seminorm, equivalence_report, smoothness_profile)
from .profile import VerifyProfile, load_profile

__version__ = "0.1.0"
