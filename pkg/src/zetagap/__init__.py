"""zetagap: ordinates of zeta zeros at desk scale, consecutive-gap
statistics, explicit inequality checks, and GUE spacing comparison."""

__version__ = "0.1.0"

from .counting import BoundCheck, CountingTerms, check_S_bounds, n_main, s_of_T
from .errors import ZetaGapError
from .gaps import (GapSequence, LargeGapCount, MomentReport, MuLambdaProxy,
                   ReciprocalReport, count_large_gaps, extremes, fujii_window,
                   gaps, moment_sum, reciprocal_sum)
from .gue import (GaudinTable, GuePrediction, c1, compare_histogram,
                  fredholm_E, gaudin_cdf, gaudin_p, predicted_moment)
from .store import TableSource, export_table, import_zeros
from .zeros import (Bracket, ZeroRecord, ZeroTable, build_table, gram_point,
                    refine_zero, scan_zeros, turing_certify)
from .zeta import (EvalResult, Method, Precision, hardy_Z, theta, zeta_general,
                   zeta_half)

__all__ = [
    "__version__",
    "ZetaGapError",
    "EvalResult", "Precision", "Method",
    "theta", "hardy_Z", "zeta_half", "zeta_general",
    "Bracket", "ZeroRecord", "ZeroTable",
    "gram_point", "scan_zeros", "refine_zero", "build_table", "turing_certify",
    "TableSource", "import_zeros", "export_table",
    "CountingTerms", "BoundCheck", "n_main", "s_of_T", "check_S_bounds",
    "GapSequence", "MomentReport", "LargeGapCount", "ReciprocalReport",
    "MuLambdaProxy",
    "gaps", "moment_sum", "count_large_gaps", "reciprocal_sum", "extremes",
    "fujii_window",
    "GaudinTable", "GuePrediction",
    "fredholm_E", "gaudin_p", "gaudin_cdf", "c1", "predicted_moment",
    "compare_histogram",
]
