"""Exception hierarchy shared by every qcf module."""


class QCFError(Exception):
    """Base class for all library errors."""


class DomainError(QCFError, ValueError):
    """A parameter lies outside the region where an object is defined.

    Raised for |q| >= 1, for parameters within the exclusion radius of a
    pole, and for any division by a vanishing symbol.
    """


class NoConvergence(QCFError, ArithmeticError):
    """A series did not meet its tolerance within ``max_terms`` terms."""

    def __init__(self, message, terms_used=None, last_bound=None):
        super().__init__(message)
        self.terms_used = terms_used
        self.last_bound = last_bound


class SpecError(QCFError, ValueError):
    """A continued fraction rule produced an illegal coefficient."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SingularModification(QCFError, ZeroDivisionError):
    """B_n + w B_{n-1} vanishes, so S_n(w) is not a finite number."""


class BMDegenerate(QCFError, ValueError):
    """lambda_n = a_n - w_{n-1}(b_n + w_n) vanished in a Bauer-Muir step."""

    def __init__(self, index, step=None):
        where = f"lambda_{index} vanishes"
        if step is not None:
            where += f" at chain step {step}"
        super().__init__(where)
        self.index = index
        self.step = step


class UnknownIdentity(QCFError, KeyError):
    def __str__(self):
        return f"unknown identity {self.args[0]!r}"


class SamplingExhausted(QCFError, RuntimeError):
    """No admissible parameter point was found within the retry budget."""


class BudgetExhausted(QCFError, RuntimeError):
    """A verification exceeded its wall-time cap."""
