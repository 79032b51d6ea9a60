"""Exception hierarchy shared by the kernels, the embedding and the parser."""

from __future__ import annotations


class LpmodError(Exception):
    """Base class for every error raised by this package."""


class FuelExhausted(LpmodError):
    """A reduction budget ran out; the verdict is unknown, not negative."""

    def __init__(self, limit, last=None):
        super().__init__(f"fuel exhausted after {limit} steps")
        self.limit = limit
        self.last = last


class TypingError(LpmodError):
    """A judgment is not derivable.

    ``rule`` names the typing rule that failed and ``term`` is the subterm
    being typed when it did.
    """

    code = "not-typable"

    def __init__(self, message, rule=None, term=None):
        super().__init__(message)
        self.rule = rule
        self.term = term


class TypeMismatch(TypingError):
    code = "type-mismatch"

    def __init__(self, message, expected=None, inferred=None, rule="Conversion", term=None):
        super().__init__(message, rule=rule, term=term)
        self.expected = expected
        self.inferred = inferred


class UntypableSort(TypingError):
    code = "untypable-sort"


class KindHasNoType(TypingError):
    code = "kind-has-no-type"


class RuleError(LpmodError):
    """A rewrite rule is rejected; ``code`` is one of the rule-check codes."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


class SpecInvalid(LpmodError):
    def __init__(self, violations):
        super().__init__("invalid PTS specification: " + "; ".join(violations))
        self.violations = list(violations)


class TopSortUntranslatable(LpmodError):
    code = "top-sort-untranslatable"


class NotAType(LpmodError):
    code = "not-a-type"


class PreconditionViolated(LpmodError):
    code = "precondition-violated"


class ExtractionFailed(LpmodError):
    code = "extraction-failed"


class UnsupportedSignature(LpmodError):
    code = "unsupported"


class ParseError(LpmodError):
    def __init__(self, message, span=None, expected=()):
        loc = f"{span}: " if span is not None else ""
        exp = f" (expected {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{loc}{message}{exp}")
        self.span = span
        self.expected = frozenset(expected)


class UnknownSortName(ParseError):
    pass


class DuplicateName(ParseError):
    pass
