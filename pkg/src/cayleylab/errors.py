"""Exception hierarchy shared by every cayleylab module."""


class CayleyLabError(Exception):
    pass


class DomainError(CayleyLabError, TypeError):
    """An element was used with a group of a different kind."""


class LimitError(CayleyLabError):
    """A configured cap (enumeration, power set, subgroup search) was exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PreconditionError(CayleyLabError, ValueError):
    pass


class ParseError(CayleyLabError, ValueError):
    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class FormatError(CayleyLabError, ValueError):
    """A multiplication-table or generator file is malformed."""
