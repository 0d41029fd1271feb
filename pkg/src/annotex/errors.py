"""Error types shared by every annotex module.

Each error carries a stable machine-readable ``code`` (its class name unless
overridden) so the service layer and the CLI can map failures to wire codes
without string matching on messages.
"""

from __future__ import annotations


class AnnotexError(Exception):
    """Base class for all annotex failures."""

    code = "InternalError"

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.detail = detail

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if "code" not in cls.__dict__:
            cls.code = cls.__name__


# -- annotation model -------------------------------------------------------

class EmptyAttribute(AnnotexError):
    """Attribute name is empty after trimming."""


class EmptyValueLabel(AnnotexError):
    """A value entry has an empty label."""


class EmptyValueList(AnnotexError):
    """An explicit object needs at least one value."""


class DuplicateValueLabel(AnnotexError):
    """The same label occurs twice in one value list."""


class BothHalvesEmpty(AnnotexError):
    """An implicit object needs at least an attribute or values."""


class EmptyAnnotationObject(AnnotexError):
    """An annotation object needs at least one implicit or explicit object."""


class InvalidContextKind(AnnotexError):
    """Context kind outside the closed enumeration."""


class InvalidRole(AnnotexError):
    """Annotator role outside the closed enumeration."""


class InvalidTier(AnnotexError):
    """Target tier outside {primary, secondary, tertiary}."""


class InvalidSemanticFunction(AnnotexError):
    """Semantic function kind outside the registered set."""


# -- knowledge store --------------------------------------------------------

class EmptyId(AnnotexError):
    """Record, document or profile id is empty."""


class DuplicateId(AnnotexError):
    """An id is already taken in its registry."""


class UnresolvableTarget(AnnotexError):
    """Annotation target does not resolve to a known document or annotation."""


class TargetCycle(AnnotexError):
    """Adding this annotation-of-annotation edge would create a cycle."""


class NotFound(AnnotexError):
    """No record/document/profile under this id."""


class TargetInUse(AnnotexError):
    """Refusing to delete a record other annotations still point at."""


class IoFailure(AnnotexError):
    """Reading or writing a store file failed at the OS level."""


class CorruptStoreFile(AnnotexError):
    """A store file failed to parse or violates store invariants.

    ``line`` is the 1-based line number of the offending line.
    """

    def __init__(self, message: str = "", line: int | None = None, path: str | None = None):
        super().__init__(message, line=line, path=path)
        self.line = line
        self.path = path


# -- inference engine -------------------------------------------------------

class EmptyQueryValues(AnnotexError):
    """Attribute explicitation needs a non-empty value list."""


class EmptyQueryAttribute(AnnotexError):
    """Value explicitation needs a non-empty attribute."""


class EmptyLabel(AnnotexError):
    """Token resolution needs a non-empty label."""


# -- query engine -----------------------------------------------------------

class QuerySyntaxError(AnnotexError):
    """Query text failed to parse.

    ``position`` is a 0-based character offset into the query text and
    ``expected`` names the token kinds that would have been accepted there.
    """

    code = "SyntaxError"

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        super().__init__(message, position=position, expected=list(expected))
        self.position = position
        self.expected = expected


class UnrewrittenBareValues(AnnotexError):
    """Classic evaluation got a query that still contains bare value lists."""


class EmptyTokenList(AnnotexError):
    """Constrained rewriting needs at least one token."""


class UnresolvableToken(AnnotexError):
    """Strict mode: a constrained-search token bound to no stored fact."""


# -- semantic functions -----------------------------------------------------

class NoRuleFired(AnnotexError):
    """No rule of the selected pack matched the content."""


class InvalidRulePack(AnnotexError):
    """Rule pack failed structural validation."""


class VersionMismatch(AnnotexError):
    """Optimistic-concurrency precondition failed: store version moved."""
