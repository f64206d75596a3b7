"""Shared exception types."""


class InputError(ValueError):
    """Structurally malformed input (bad JSON, wrong shapes, non-integers).
    The CLI maps this to exit code 2."""


class PreconditionError(ValueError):
    """Input is well formed but violates a documented precondition of the
    requested operation (e.g. reduction on a bundle that does not glue).
    The CLI also maps this to exit code 2."""
