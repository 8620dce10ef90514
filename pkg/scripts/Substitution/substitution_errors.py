"""
Substitution Analysis Errors

Exceptions raised by the substitution, spectrum and oracle modules. The pipeline
runner maps them onto exit codes.
"""


class SubstitutionError(Exception):
    """Base class for all analysis errors"""


class SubstitutionInputError(SubstitutionError, ValueError):
    """Invalid substitution definition or incompatible operands"""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = list(diagnostics or [message])
        super().__init__(message)


class CellBudgetExceeded(SubstitutionError):
    """An expansion would materialise more cells than the configured budget"""

    def __init__(self, requested, budget):
        self.requested = requested
        self.budget = budget
        super().__init__(f"cell budget exceeded: {requested} cells requested, limit is {budget}")


class AnalysisPreconditionError(SubstitutionError):
    """A computation was asked for on input that violates its preconditions"""
