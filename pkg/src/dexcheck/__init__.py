"""Dimensionally checked order-of-magnitude verification of physical relations.

Relations are written in a small catalog language over a registry of
Gaussian-CGS constants and classified by their gap in dex (orders of
magnitude).
"""

from .constants import Constant, Provenance, ProvenanceTag, Registry, load_defaults, lookup, override
from .dimension import DIMENSIONLESS, Dimension, Quantity, dex_gap, dim_combine, dim_pow, qty_arith, qty_pow
from .dsl import ParseError, format_catalog, infer_dimension, parse, parse_expr, parse_quantity, parse_unit
from .engine import CheckResult, Report, Status, check_relation, evaluate, run_catalog
from .catalog import builtin_catalog, procedure_checks

__version__ = "0.1.0"
