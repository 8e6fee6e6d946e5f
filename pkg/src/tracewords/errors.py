"""Exception types shared across the package."""


class TracewordsError(Exception):
    """Base class for all errors raised by this package."""


class WordSyntaxError(TracewordsError, ValueError):
    """Malformed word text.

    ``position`` is the 0-based character offset where parsing failed and
    ``expected`` names the token the parser was looking for.
    """

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        pointer = " " * position + "^"
        super().__init__(
            f"expected {expected} at position {position}\n  {text}\n  {pointer}"
        )


class EmptyWordError(TracewordsError, ValueError):
    """The word expanded to zero letters, e.g. ``(G1)^0``."""


class InvalidPairingError(TracewordsError, ValueError):
    """A pairing does not match the words it is applied to."""


class NoPairingError(TracewordsError, ValueError):
    """The set of admissible pairings is empty where one was required."""


class NotStarFreeError(TracewordsError, ValueError):
    """The operation needs a star-free word."""


class UnsupportedConfigurationError(TracewordsError, ValueError):
    """The inputs are outside what the operation handles."""


class MissingLetterError(TracewordsError, KeyError):
    """A letter of the word has no sampled matrix."""


class ResourceLimitError(TracewordsError):
    """A documented size cap was exceeded."""


class ConsistencyError(TracewordsError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class TooLargeError(ResourceLimitError):
    """Input exceeds the bounds of an exhaustive check."""
