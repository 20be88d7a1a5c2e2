"""Exception hierarchy shared by all gcx modules."""


class GcxError(Exception):
    """Base class for every error raised by this package."""


class InputError(GcxError, ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class CheckFailed(GcxError):
    """A mathematical check did not hold (CLI exit code 1)."""


# graph_core
class EmptyGraph(InputError):
    pass


class NotConnected(InputError):
    pass


class ValenceTooLow(InputError):
    def __init__(self, vertex: int, valence: int):
        super().__init__(f"vertex {vertex} has valence {valence} < 3")
        self.vertex = vertex
        self.valence = valence


class SelfLoopContraction(InputError):
    pass


class NotAnAutomorphism(InputError):
    pass


# signed_perm
class DomainMismatch(InputError):
    pass


class LengthMismatch(InputError):
    pass


# intlinalg
class DimensionMismatch(InputError):
    pass


# graph_complex
class BasisMismatch(CheckFailed):
    pass


class MixedBidegree(InputError):
    pass


class NotClosed(CheckFailed):
    pass


class PairingNotFound(CheckFailed):
    pass


# strata
class SubsetTooSmall(InputError):
    pass


class LabelOutOfRange(InputError):
    pass


class Unclassifiable(CheckFailed):
    pass


class NotTypeTwo(InputError):
    pass


class NotAPair(InputError):
    pass


class RepeatedEdgesStrictMode(InputError):
    pass


class NotTrivalent(InputError):
    pass


class AuditFailure(CheckFailed):
    pass
