"""Exception types raised across the package."""


class NTWError(Exception):
    """Base class for all package errors."""


class InputError(NTWError, ValueError):
    """Bad user input (maps to CLI exit code 2)."""


class EmptyDocument(InputError):
    pass


class EmptyLabelSet(InputError):
    pass


class NotTextNode(InputError):
    pass


class NotFeatureBased(NTWError, TypeError):
    pass


class TooManyLabels(InputError):
    pass


class DegenerateModel(InputError):
    pass


class EmptySample(InputError):
    pass


class UnfittedModel(NTWError):
    pass


class BadPattern(InputError):
    pass


class NoGold(InputError):
    pass


class EmptyGold(InputError):
    pass


class MissingType(InputError):
    pass


class BadTemplate(InputError):
    pass


class NoSingleEntityWrapper(NTWError):
    pass


class AssemblyFailure(NTWError):
    """A page could not be assembled into records.

    ``segment`` holds the offending run of typed nodes.
    """

    def __init__(self, page_id, segment):
        super().__init__(f"cannot assemble records on page {page_id!r}")
        self.page_id = page_id
        self.segment = segment
