"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: InvalidInputError -> 3,
RefusalError (and subclasses) -> 2, NotApplicableError -> 1.
"""


class NimlabError(Exception):
    """Base class; carries a short machine-readable reason code."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class InvalidInputError(NimlabError):
    """Malformed descriptors, non-bipartitions, bad files, bad parameters."""


class NotApplicableError(NimlabError):
    """The requested check has nothing to say about this input."""


class RefusalError(NimlabError):
    """The operation refuses to answer rather than approximate."""


class ResourceLimitError(RefusalError):
    """Input is beyond a configured exact-computation ceiling."""


class NonExactRecordError(RefusalError):
    """An exact Turan value was required but only a bound is available."""
