"""Exception hierarchy.

Each top-level family maps onto a CLI exit code: configuration problems exit 1,
bad input exits 2, broken internal identities exit 3.
"""


class CrimError(Exception):
    exit_code = 2


class ConfigError(CrimError, ValueError):
    exit_code = 1


class InputError(CrimError):
    exit_code = 2


class NotARepository(InputError):
    pass


class UnreadableObject(InputError):
    def __init__(self, commit_id: str, detail: str = ""):
        super().__init__(f"unreadable object in commit {commit_id}: {detail}".rstrip(": "))
        self.commit_id = commit_id


class MalformedHeader(InputError, ValueError):
    pass


class EmptyInput(InputError, ValueError):
    pass


class NonFiniteValue(InputError, ValueError):
    pass


class NonpositiveCtd(InputError, ValueError):
    pass


class NoCandidates(InputError):
    """No commit falls inside the model CTD range."""


class ZeroRate(InputError):
    """Imputation rate is zero while nonzero sizes need imputing."""


class MismatchedCommitSets(CrimError, ValueError):
    exit_code = 3


class InternalInconsistency(CrimError):
    exit_code = 3
