"""Structured errors shared by every module.

Each error carries a stable machine-readable ``code`` so that callers
(and the CLI report writer) never have to parse messages.
"""


class SkewConnectError(Exception):
    code = "ERROR"
    module = "skewconnect"

    def __init__(self, message, *, code=None, module=None, detail=None):
        super().__init__(message)
        if code is not None:
            self.code = code
        if module is not None:
            self.module = module
        self.detail = detail or {}

    def to_dict(self):
        return {"code": self.code, "module": self.module, "message": str(self)}


class ExactAlgError(SkewConnectError):
    module = "exactalg"


class DivisionByNoninvertible(ExactAlgError):
    code = "DIVISION_BY_NONINVERTIBLE"


class SingularMatrix(ExactAlgError):
    code = "SINGULAR_MATRIX"


class InvalidTower(ExactAlgError):
    code = "INVALID_TOWER"


class SigmaBaseError(SkewConnectError):
    module = "sigma_base"


class SubstitutionSingular(SigmaBaseError):
    code = "SUBSTITUTION_SINGULAR"


class NotMonic(SigmaBaseError):
    code = "NOT_MONIC"


class NoninvertibleA0(SigmaBaseError):
    code = "NONINVERTIBLE_A0"


class ConnectionError_(SkewConnectError):
    module = "connection_core"


class SingularA(ConnectionError_):
    code = "SINGULAR_A"


class SingularP(ConnectionError_):
    code = "SINGULAR_P"


class OrderMismatch(ConnectionError_):
    code = "ORDER_MISMATCH"


class InvalidSystem(ConnectionError_):
    code = "INVALID_SYSTEM"


class ConstructionError(SkewConnectError):
    module = "constructions"


class BaseMismatch(ConstructionError):
    code = "BASE_MISMATCH"


class BadDegree(ConstructionError):
    code = "BAD_DEGREE"


class NotDifferenceDirection(ConstructionError):
    code = "NOT_DIFFERENCE_DIRECTION"


class CurvatureError(SkewConnectError):
    module = "curvature"


class SameDirection(CurvatureError):
    code = "SAME_DIRECTION"


class WrongCharacteristic(CurvatureError):
    code = "WRONG_CHARACTERISTIC"


class NotDifferential(CurvatureError):
    code = "NOT_DIFFERENTIAL"


class SolutionsError(SkewConnectError):
    module = "solutions"


class NotOrdinary(SolutionsError):
    code = "NOT_ORDINARY"


class NotIntegrable(SolutionsError):
    code = "NOT_INTEGRABLE"


class SingularDivisor(SolutionsError):
    code = "SINGULAR_DIVISOR"


class ConfluenceError(SkewConnectError):
    module = "confluence"


class ParameterModeMismatch(ConfluenceError):
    code = "PARAMETER_MODE_MISMATCH"


class DegenerateParameters(ConfluenceError):
    code = "DEGENERATE_PARAMETERS"


class ConfluenceObstructed(ConfluenceError):
    code = "CONFLUENCE_OBSTRUCTED"


class CliError(SkewConnectError):
    module = "cli"
    code = "INPUT_ERROR"


class ParseError(CliError):
    code = "PARSE_ERROR"

    def __init__(self, message, *, position=None, **kw):
        super().__init__(message, **kw)
        self.position = position
        if position is not None:
            self.detail["position"] = position

    def to_dict(self):
        d = super().to_dict()
        if self.position is not None:
            d["position"] = self.position
        return d


class UndefinedName(CliError):
    code = "UNDEFINED_NAME"
