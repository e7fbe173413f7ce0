"""Exception hierarchy shared by the engine, the CLI and the HTTP service.

Every error carries a stable ``code`` that ends up in JSON error bodies.
"""
from typing import Any, Dict


class AlgebraError(Exception):
    code = "algebra_error"
    http_status = 422
    exit_code = 2

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": str(self)}


class DivisionByZeroError(AlgebraError, ZeroDivisionError):
    code = "division_by_zero"


class IllegalPromotionError(AlgebraError):
    code = "illegal_promotion"


class ClosureError(AlgebraError):
    """An exact-mode operation would leave the rationals (e.g. 2**(1/2))."""

    code = "closure_error"


class NotPolynomialError(AlgebraError):
    code = "not_polynomial"


class ZeroPolynomialError(AlgebraError):
    code = "zero_polynomial"


class InvalidBaseError(AlgebraError):
    code = "invalid_base"


class ValidationError(AlgebraError):
    code = "validation_error"

    def __init__(self, report: Any) -> None:
        self.report = report
        super().__init__("; ".join(report.violations))

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["violations"] = list(self.report.violations)
        return data


class NoSolutionInAnsatzError(AlgebraError):
    code = "no_solution_in_ansatz"


class DimensionMismatchError(AlgebraError):
    code = "dimension_mismatch"


class NotDiagonalError(AlgebraError):
    code = "not_diagonal"


class InconsistentSystemError(AlgebraError):
    code = "inconsistent"


class DegenerateWeightError(AlgebraError):
    code = "degenerate_weight"


class UnsupportedCoefficientError(AlgebraError):
    code = "unsupported_coefficient"


class RewriteBudgetExceededError(AlgebraError):
    code = "rewrite_budget_exceeded"


class UnknownPresetError(AlgebraError):
    code = "unknown_preset"
    http_status = 404


class MissingParamError(AlgebraError):
    code = "missing_param"


class InvalidParamError(AlgebraError):
    code = "invalid_param"


class UnsupportedRootClassError(AlgebraError):
    code = "unsupported_root_class"
