"""Exact twisted J-functions of split concavex bundles over products of
projective spaces, the mirror normalization turning the hypergeometric
I-series into J, and the enumerative numbers read off from it."""

from .algebra import HBAR, LAMBDA, CohElement, LaurentScalar, SpaceShape, integrate, invert_unit, lambda_limit
from .geometry import LineBundleSpec, Polarity, TargetSpec, classify_polarity, degree_rule, pairing
from .ifunction import ambient_j, build_I, correcting_class
from .invariants import extract_K, instanton_inversion, j_pairing, multiple_cover_table
from .mirror import MirrorData, apply_mirror, solve_mirror, verify_theorem_form
from .oracle import lines_on_hypersurface, weight_independence_check
from .pipeline import run_pipeline
from .qseries import QSeries, ScalarQSeries, hbar_slice, rescale_q, series_exp, series_log, series_mul

__version__ = "0.1.0"
