"""Hayashi-type quadrature error bounds, their audit, and certified integration."""

from .core import (
    BoundEvaluation, Case, DerivativeBounds, FunctionModel, HalfWidths, Interval, Status,
    case_bounds, endpoint_trapezoid_bound, evaluate_claim, half_widths, lambda_general,
    rule_value,
)
from .errors import (
    BadFamilyParameters, BudgetExhausted, DomainError, HypothesisViolation, LambdaOutOfRange,
    MeanSlopeOutOfRange, NoConvergence, NotNonincreasing, ParseError, PointOutOfRange,
    QuadboundError, RangeViolation,
)
from .expr import derivative_range, differentiate, evaluate, function_model, parse
from .oracle import OracleResult, integrate, integrate_product, mean_value
from .hayashi import HayashiTriple, check_hayashi, hayashi_margins, steffensen_margins
from .certquad import CertifiedResult, certify
from .auditor import AuditConfig, AuditReport, audit, violation
from .families import sample_family

__version__ = "0.1.0"
