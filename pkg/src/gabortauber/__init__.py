"""Gabor-frame STFT tools and Tauberian detectors for S-asymptotic behaviour."""

from .asymptotics import (AsymptoticConfig, AsymptoticReport, monotone_tauberian,
                          solve_asymptote_constants, verify_sasymptotics, wiener_condition_check,
                          wiener_tauberian)
from .catalog import signal_from_spec, window_from_spec
from .comparison import ComparisonFunction, SlowlyVarying
from .errors import (CapabilityError, ConfigurationError, ConvergenceError, GaborError,
                     NumericError, PreconditionError, QuadratureError, UsageError)
from .frame import compute_dual_window, estimate_frame_bounds, reconstruct
from .growth import check_bounded_family, classify_grid_growth, detect_net_convergence
from .model import CoefficientGrid, Lattice, SignalModel, Window
from .stft import gabor_coefficients, stft_point, synthesize

__version__ = "0.1.0"
