"""Exception hierarchy shared by all modules."""


class UnisignError(Exception):
    """Base class for errors raised by this package."""


class DomainError(UnisignError, ValueError):
    """An argument lies outside the domain of the function."""


class DivergenceError(UnisignError, ValueError):
    """A quantity is infinite at the requested argument (e.g. K(1))."""


class PoleError(UnisignError, ZeroDivisionError):
    """A rational function was evaluated at one of its poles."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SingularityError(UnisignError, ArithmeticError):
    """A matrix that must be inverted (implicitly or explicitly) is singular."""

    def __init__(self, message, a=None, iteration=None):
        super().__init__(message)
        self.a = a
        self.iteration = iteration


class ConvergenceError(UnisignError, RuntimeError):
    """An iteration failed to meet its stopping criterion within the cap."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class DecouplingError(UnisignError, RuntimeError):
    """Invariant subspaces could not be separated to the required residual."""

    def __init__(self, message, residual=None, path=""):
        super().__init__(message)
        self.residual = residual
        self.path = path


class BalanceError(UnisignError, RuntimeError):
    """Spectral splitting kept producing an empty block."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path
