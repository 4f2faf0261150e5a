"""Shared exception bases.

The CLI maps these onto exit codes: schema problems exit 2, domain
validation failures exit 3, configured resource limits exit 4.
Concrete error types live next to the operations that raise them.
"""


class IrboxError(Exception):
    """Base class for all package errors."""


class SchemaError(IrboxError):
    """Input could not be parsed against its declared schema."""


class ValidationError(IrboxError):
    """Input parsed but violates a domain invariant."""


class LimitError(IrboxError):
    """A configured resource limit would be exceeded."""
