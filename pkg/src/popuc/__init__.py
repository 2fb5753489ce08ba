"""Paraorthogonal polynomials on the unit circle: zeros via the Prufer phase."""

from .analysis import (CountingMeasure, MeasureReport, SpacingReport, counting_measure,
                       gap_scaling_sweep, interval_weight, mhaskar_saff_check, spacing_report,
                       weak_type_check)
from .opuc import BlaschkeTrace, PolyPairValue, blaschke_trace, poly_pair, popuc_value
from .prufer import PhaseEvaluator, phase, phase_increment
from .verblunsky import (CesaroStats, RearrangementReport, VerblunskyModel, cesaro_mean,
                         coefficient, decreasing_rearrangement, lp_norm)
from .zeros import BracketError, ConvergenceError, ZeroSet, count_zeros_in, find_zeros, oracle_zeros

__version__ = "0.1.0"
