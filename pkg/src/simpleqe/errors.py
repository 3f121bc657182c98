"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """A record, tree or configuration violates its invariants."""


class ParseError(ValueError):
    """Malformed input text; ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class BudgetError(ValueError):
    """Text exceeds the encoder's subword budget."""

    def __init__(self, length, budget):
        super().__init__(f"input has {length} subword units, budget is {budget}")
        self.length = length
        self.budget = budget


class NumericError(RuntimeError):
    """Training diverged (non-finite loss or weights)."""
