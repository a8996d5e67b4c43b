"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: usage errors exit 2, I/O errors exit 3,
internal invariant violations exit 4.
"""


class DcfSimError(Exception):
    """Base class for all package errors."""


class ConfigError(DcfSimError):
    """Invalid user-supplied configuration (CLI exit code 2)."""


class InternalError(DcfSimError):
    """Broken internal invariant, e.g. an event scheduled in the past or a
    flow-conservation failure (CLI exit code 4)."""
