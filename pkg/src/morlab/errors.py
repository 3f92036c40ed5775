"""Exception hierarchy shared by every morlab module."""


class MorlabError(Exception):
    """Base class for all morlab failures."""


class InvalidInput(MorlabError, ValueError):
    """Malformed or inconsistent arguments (wrong modulus, singular matrix, ...)."""


class NoSolutionError(MorlabError):
    """A solver proved that the requested logarithm does not exist."""


class CapExceededError(MorlabError):
    """A desk-scale search or iteration cap was hit before an answer was found."""


class FactorizationTimeout(CapExceededError):
    """Pollard rho ran out of iterations; distinct from a wrong factorization."""
