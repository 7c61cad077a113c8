"""Exception types shared across the package.

Argument validation uses plain ValueError; the classes below mark failure
modes that callers (and the CLI exit-code mapping) need to tell apart.
"""

__all__ = [
    "CertificationError",
    "InfeasibleClassError",
    "InfiniteEnergyError",
    "NumericsError",
]


class InfeasibleClassError(ValueError):
    """The requested cardinality exceeds the Levenshtein bound for (n, s)."""


class CertificationError(RuntimeError):
    """A computed object failed one of its own certification checks."""


class NumericsError(RuntimeError):
    """A numerical routine did not converge to the requested accuracy."""


class InfiniteEnergyError(ValueError):
    """Energy diverges: coincident points under a kernel unbounded at t = 1."""
