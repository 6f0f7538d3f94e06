"""Error hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI reports for it.
"""

CHECK_FAILURE_EXIT_CODE = 5


class BraidDilatationError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class BraidParseError(BraidDilatationError):
    """Raised when braid text contains a malformed token."""

    exit_code = 2


class BraidRangeError(BraidDilatationError):
    """Raised when a generator index is outside 1..n-1."""

    exit_code = 2


class StrandCountMismatchError(BraidDilatationError):
    """Raised when two braids with different strand counts are combined."""

    exit_code = 2


class GeneratorIndexError(BraidDilatationError):
    """Raised when a free-group generator index is out of range."""

    exit_code = 2


class VarCountMismatchError(BraidDilatationError):
    """Raised when Laurent polynomials over different variable counts meet."""

    exit_code = 2


class DimensionError(BraidDilatationError):
    """Raised on non-square or mismatched matrix shapes."""

    exit_code = 2


class ModulusError(BraidDilatationError):
    """Raised when an evaluation point is not on the unit torus."""

    exit_code = 2


class DomainError(BraidDilatationError):
    """Raised when an argument is outside the domain of an operation."""

    exit_code = 2


class NotApplicableError(BraidDilatationError):
    """Raised when a request does not apply to the given braid."""

    exit_code = 3


class ResourceGuardError(BraidDilatationError):
    """Raised when a computation would exceed a configured size cap."""

    exit_code = 4
