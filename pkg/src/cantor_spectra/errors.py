"""Exception hierarchy. Every error carries a stable machine-readable code."""


class CantorSpectraError(ValueError):
    code = "E_INPUT"


class InvalidRational(CantorSpectraError):
    code = "E_RATIONAL"


class InvalidSystem(CantorSpectraError):
    code = "E_SYSTEM"


class NotCoprime(CantorSpectraError):
    code = "E_COPRIME"


class NotPrime(CantorSpectraError):
    code = "E_PRIME"


class InvalidTriple(CantorSpectraError):
    code = "E_TRIPLE"


class FactorizationLimit(CantorSpectraError):
    code = "E_FACTOR_LIMIT"


class Inconclusive(CantorSpectraError):
    """Raised when a heuristic stabilization scan ends without stabilizing."""

    code = "E_INCONCLUSIVE"
