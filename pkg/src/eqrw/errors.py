"""Exception hierarchy shared by every module."""


class EqrwError(Exception):
    """Base class for all library errors."""


class LexError(EqrwError, ValueError):
    """Unknown token in program or sequence text."""


class ParseError(EqrwError, ValueError):
    """Malformed text: unbalanced parentheses, arity mismatch, stray tokens."""


class SignatureError(EqrwError, TypeError):
    """An operator was given operand types outside its signature."""


class PathError(EqrwError, LookupError):
    """A path does not resolve to a node of the expression."""


class NotApplicable(EqrwError, ValueError):
    """No rule of the requested category matches at the given path."""


class NumericError(EqrwError, ArithmeticError):
    """Division by zero or inversion of a (near) singular matrix."""


class DegenerateInput(EqrwError, ValueError):
    """The program offers no node where an illegal edit can be made."""


class SearchFailure(EqrwError):
    """Base for prover failures; carries the number of states explored."""

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


class BudgetExceeded(SearchFailure):
    """Search stopped on its state or time budget before exhausting the depth."""


class NotFoundWithinDepth(SearchFailure):
    """Every program reachable within max_steps was explored; none matched."""


class ExhaustionError(EqrwError, RuntimeError):
    """Corpus generation hit its attempt budget before reaching the target size."""


class FormatError(EqrwError, ValueError):
    """A corpus file line could not be decoded."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
