"""Grand Lebesgue norms, fundamental functions, and continuity bounds."""

from .bounds import (BoundParams, BoundReport, HolderWeight, MorreyForm,
                     bound_report, continuity_bound_1d, derivative_window,
                     eta_from_gradient_bound, gradient_continuity_bound,
                     higher_order_continuity_bound, holder_exponent,
                     holder_norm, morrey_bound, per_p_continuity_bound,
                     talenti_constant)
from .errors import (DegenerateBoundWarning, DegradedAccuracyWarning,
                     EmptyWindowError, GrandLpError, InvalidParameterError,
                     QuadratureError, SupportTooLowError,
                     UnsupportedFamilyError)
from .extremals import (ExtremalFamily, FamilyKind, make_interval_log_family,
                        make_radial_log_family, make_shift_witness_family,
                        make_singular_radial_family, noncompactness_check,
                        sharpness_ratio, shift_witness_eta)
from .fundamental import (FundamentalResult, asymptotic_fundamental,
                          fundamental_function, truncated_fundamental)
from .gls import (GlsNormResult, gls_norm, natural_psi,
                  reduced_sobolev_gls_norm, sobolev_gls_norm)
from .modulus import (ModulusEstimate, ModulusStrategy, empirical_modulus,
                      piecewise_linear_modulus)
from .norms import (DomainKind, DomainSpec, TestFunction,
                    gradient_magnitude_function, grad_lp_norm, lp_norm,
                    omega_d, parse_domain_spec)
from .psi import (PsiFamily, PsiFunction, SlowlyVaryingKind,
                  SlowlyVaryingSpec, make_degenerate_psi, make_exponent_psi,
                  make_power_psi, make_slowly_varying_psi, parse_psi_spec,
                  support)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
