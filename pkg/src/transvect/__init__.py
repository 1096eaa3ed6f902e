"""Exact classification of invariant ternary differential operators on tensor densities."""
from .scalars import QuadExt, Rational, SQRT21, format_scalar, kappa, parse_scalar, rat
from .densities import WeightedDensity, VectorField1D, apply_op, defect, lie_derivative, oracle_invariant
from .opcore import DensityOp, Permutation3, dualize, insert, permute, reorder, scalar_op
from .invariance import build_system, classify, in_kernel, kernel, kernel_dimension, match_catalog, rank18_check
from .conformal import ConformalSymbol, b2_closed_form, build_neqs, conformal_defect, solve_b2k, vectn_obstruction

__version__ = "0.1.0"
