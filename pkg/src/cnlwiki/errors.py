"""Error vocabulary shared by the engine, the HTTP API, and the CLI.

Every exception carries a stable ``code`` string; the HTTP layer maps codes
to status codes and serializes them as ``{code, message, position?}``.
Token positions are 0-based indices into the token list.
"""

from __future__ import annotations


class CnlWikiError(Exception):
    """Base class for all domain errors."""

    code = "InternalError"


class MissingFormError(CnlWikiError):
    code = "MissingForm"


class InvalidFormError(CnlWikiError):
    code = "InvalidForm"


class DuplicateSurfaceError(CnlWikiError):
    code = "DuplicateSurface"


class ReservedWordError(CnlWikiError):
    code = "ReservedWord"


class UnknownEntityError(CnlWikiError):
    code = "UnknownEntity"


class EntityInUseError(CnlWikiError):
    code = "EntityInUse"


class UnknownWordError(CnlWikiError):
    code = "UnknownWord"

    def __init__(self, position: int, surface: str):
        super().__init__(f"unknown word {surface!r} at token {position}")
        self.position = position
        self.surface = surface


class CnlSyntaxError(CnlWikiError):
    """A token sequence that no sentence of the language starts with."""

    code = "SyntaxError"

    def __init__(self, position: int, expected: tuple[str, ...]):
        super().__init__(
            f"syntax error at token {position}, expected one of: {', '.join(expected)}"
        )
        self.position = position
        self.expected = expected


class AmbiguityError(CnlWikiError):
    """Defensive: the grammar is unambiguous, so this must never fire."""

    code = "AmbiguityError"


class DeadPrefixError(CnlWikiError):
    code = "DeadPrefix"


class OutOfFragmentError(CnlWikiError):
    """Grammatical sentence whose meaning falls outside the logic fragment."""

    code = "OutOfFragment"

    def __init__(self, reason: str):
        super().__init__(f"out of fragment: {reason}")
        self.reason = reason


class NotVerbalizableError(CnlWikiError):
    code = "NotVerbalizable"


class ResourceLimitError(CnlWikiError):
    code = "ResourceLimit"


class UnknownSentenceError(CnlWikiError):
    code = "UnknownSentence"


class NotRejectedError(CnlWikiError):
    code = "NotRejected"


class HomeEntityNotMentionedError(CnlWikiError):
    code = "HomeEntityNotMentioned"


class NotAQuestionError(CnlWikiError):
    code = "NotAQuestion"


class IoError(CnlWikiError):
    code = "IoError"


class FormatError(CnlWikiError):
    code = "FormatError"


class CorpusFormatError(CnlWikiError):
    code = "CorpusFormatError"

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
