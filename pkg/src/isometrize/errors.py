"""Exception hierarchy.

Every error carries a short machine code (``code``) used by the command line
front end and by reports.
"""


class IsometrizeError(Exception):
    code = "ERROR"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RejectedInstance(IsometrizeError):
    code = "REJECT"


class NotHomeomorphism(IsometrizeError):
    code = "NOT_HOMEOMORPHISM"


class NotDevelopment(IsometrizeError):
    code = "NOT_DEVELOPMENT"


class BudgetExceeded(IsometrizeError):
    code = "BUDGET_EXCEEDED"


class SearchBudget(IsometrizeError):
    code = "SEARCH_BUDGET"


class InvalidTunnels(IsometrizeError):
    code = "INVALID_TUNNELS"


class HypothesisFail(IsometrizeError):
    code = "HYPOTHESIS_FAIL"


class NotInvariantGauge(IsometrizeError):
    code = "NOT_INVARIANT_GAUGE"


class NotEquiregular(IsometrizeError):
    code = "NOT_EQUIREGULAR"


class NotNearlyProper(IsometrizeError):
    code = "NOT_NEARLY_PROPER"


class NotSeparating(IsometrizeError):
    code = "NOT_SEPARATING"


class BadExhaustion(IsometrizeError):
    code = "BAD_EXHAUSTION"


class ParseError(IsometrizeError):
    code = "PARSE_ERROR"


class ValidationError(IsometrizeError):
    code = "VALIDATION_ERROR"


class UnknownCommand(IsometrizeError):
    code = "UNKNOWN_COMMAND"


class NotSeparatingWarning(UserWarning):
    pass
