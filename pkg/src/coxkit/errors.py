"""Shared exception types.

Every violated operation precondition raises a subclass of
:class:`PreconditionError`, so the CLI can map them uniformly to exit code 2.
"""


class CoxkitError(Exception):
    pass


class PreconditionError(CoxkitError):
    """An operation was called outside its stated preconditions."""
