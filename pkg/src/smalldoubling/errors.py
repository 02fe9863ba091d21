"""Exception types shared by every module."""


class PreconditionError(ValueError):
    """An operation was called outside its stated domain."""


class ResourceError(RuntimeError):
    """A configured enumeration or search budget would be exceeded.

    ``partial`` is True when some work was done before giving up, and
    ``best`` carries whatever best-so-far result existed at that point.
    """

    def __init__(self, message, *, partial=False, best=None):
        super().__init__(message)
        self.partial = partial
        self.best = best


class InvariantError(RuntimeError):
    """A certificate that must hold by construction failed to verify."""
