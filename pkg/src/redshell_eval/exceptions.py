"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: domain/validation errors exit 1,
I/O errors exit 2, remote endpoint failures exit 3.
"""


class RedshellError(Exception):
    """Base class for all package errors."""


class ValidationError(RedshellError):
    """A domain rule was violated (bad record, bad argument, key mismatch)."""


class CorpusFormatError(ValidationError):
    """A corpus file contains a malformed or invalid record."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReportAssemblyError(ValidationError):
    """Report inputs are inconsistent (e.g. mismatched sample ids)."""


class GenerationError(RedshellError):
    """Base class for generation-endpoint failures."""


class TransportError(GenerationError):
    """The endpoint could not be reached, or retries were exhausted."""


class EndpointStatusError(GenerationError):
    """The endpoint answered with a non-2xx status."""

    def __init__(self, status_code: int, message: str = ""):
        self.status_code = status_code
        super().__init__(message or f"endpoint returned HTTP {status_code}")


class GenerationTimeout(GenerationError):
    """The request exceeded the configured timeout."""


class EmptyCompletionError(GenerationError):
    """The endpoint returned an empty completion after normalization."""
