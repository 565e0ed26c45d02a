"""
Exceptions raised by the library. The command line maps them to exit codes:
malformed input exits with 1; violated preconditions, unsupported
requests and `verify` runs with failing instances exit with 2.
"""


class HomextError(Exception):
    """ Base class for every error raised by homext. """


class MalformedInputError(HomextError, ValueError):
    """ The input does not describe a valid object (bad shape, factor, name...). """

    def __init__(self, message: str, field: str | None = None):
        # The offending field, reported by the command line
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class PreconditionError(HomextError, ValueError):
    """ The objects are well formed but the operation does not apply to them. """


class UnsupportedError(HomextError, NotImplementedError):
    """ The request is outside of what the engine computes (e.g. Baer sums for i >= 2). """
