"""Exception hierarchy shared by every module."""


class MackeyPicError(Exception):
    """Base class for library errors."""


class InvalidInputError(MackeyPicError, ValueError):
    """Arguments violate a documented precondition."""


class ResourceLimitError(MackeyPicError):
    """A configured size cap would be exceeded."""


class UnrepresentableError(MackeyPicError):
    """The result exists but has a level that is not free abelian."""


class ConsistencyError(MackeyPicError):
    """An internal identity failed; indicates a bug or a transcription error."""
