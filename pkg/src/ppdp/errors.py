"""Exception hierarchy shared by all toolkit modules."""


class PpdpError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# parsing / serialization

class ParseError(PpdpError):
    """Input document cannot be turned into a model value."""


class MalformedXml(ParseError):
    pass


class MissingActivity(ParseError):
    pass


class MissingTimestamp(ParseError):
    pass


class DuplicateCaseId(ParseError):
    pass


class InvalidLog(ParseError):
    """An in-memory log violates model invariants on write."""


class UnknownMethod(ParseError):
    pass


class PayloadMismatch(ParseError):
    pass


# ---------------------------------------------------------------------------
# technique engines

class EngineError(PpdpError):
    """A privacy technique refused or failed on its input."""


class NoResources(EngineError):
    pass


class EmptyLog(EngineError):
    pass


class EmptyPassphrase(EngineError):
    pass


class DecryptionFailure(EngineError):
    pass


class BrokenChain(EngineError):
    pass


class WrongMethod(EngineError):
    pass


class GuardExceeded(EngineError):
    """Input is beyond the exact-mode bounds of the TLKC enforcer."""


# ---------------------------------------------------------------------------
# metadata / repository

class UnknownTechnique(PpdpError):
    pass


class NotFound(PpdpError):
    pass


class HasDependents(PpdpError):
    pass


class WrongKind(PpdpError):
    pass


class ParameterInvalid(PpdpError):
    pass


class UnparsableArtifact(PpdpError):
    pass
