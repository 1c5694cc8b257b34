"""Exception hierarchy.

Every domain error derives from :class:`ElectionError`, which the CLI maps
to exit code 1.
"""


class ElectionError(Exception):
    pass


class ProfileError(ElectionError, ValueError):
    pass


class EmptyApprovalSet(ProfileError):
    pass


class UnknownCandidate(ProfileError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DuplicateApproval(ProfileError):
    pass


class ParseError(ProfileError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConfigError(ElectionError, ValueError):
    pass


class ZeroSeats(ElectionError, ValueError):
    pass


class InsufficientCandidates(ElectionError):
    pass


class NonPositiveSupport(ElectionError, ValueError):
    pass


class BranchCapExceeded(ElectionError):
    pass


class UnlimitedCapacityUnsupported(ElectionError):
    pass


class ZeroVotes(ElectionError, ValueError):
    pass


class EllExceedsCapacity(ElectionError, ValueError):
    pass


class TooManyCandidates(ElectionError):
    pass


class NotUninominal(ElectionError):
    pass


class IllegalModification(ElectionError, ValueError):
    pass


class StateExhausted(ElectionError):
    pass


class BetaExceedsAlpha(ElectionError, ValueError):
    pass


class DegenerateShares(ElectionError, ValueError):
    pass


class BadRange(ElectionError, ValueError):
    pass
