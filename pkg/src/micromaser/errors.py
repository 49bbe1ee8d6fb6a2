"""Exception hierarchy shared by all micromaser modules."""


class MicromaserError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(MicromaserError, ValueError):
    """A model parameter is outside its admissible range.

    ``name`` carries the offending parameter so callers (the CLI in
    particular) can point at it.
    """

    def __init__(self, name, message):
        super().__init__(f"{name}: {message}")
        self.name = name


class TruncationError(MicromaserError):
    """Probability mass reached the top of the truncated Fock ladder."""

    def __init__(self, message, tail=None, n_max=None):
        super().__init__(message)
        self.tail = tail
        self.n_max = n_max


class IntegrationError(MicromaserError):
    """The fixed-step transit integrator failed its accuracy check."""


class SolveError(MicromaserError):
    """A stationary linear solve was singular or produced non-finite output."""
