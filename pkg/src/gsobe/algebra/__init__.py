"""Exact differential-polynomial algebra and the long-wave reduction check."""
from .derivation import ABCDParams, reduction_report, verify_reduction
from .diffpoly import DiffPoly, OrderIdeal, SubstitutionRule
from .parampoly import ParamPoly
from .rescaling import solve_rescaling, theta_sign_survey
