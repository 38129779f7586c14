"""Exception types shared across the package.

The CLI maps these onto exit codes, so library code should raise the most
specific class that applies rather than bare ValueError.
"""


class PdclabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(PdclabError):
    """Invalid configuration: bad dimensions, ranges, keys or preconditions."""


class FockError(PdclabError):
    """State-algebra guard tripped (e.g. the defensive photon-number ceiling)."""


class EstimateError(PdclabError):
    """A count record cannot support the requested estimate (zero counts)."""
