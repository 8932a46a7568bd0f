from __future__ import annotations


class MttError(Exception):
    """Base class for every error raised by this package."""


class ModeTheoryError(MttError):
    pass


class TheoryParseError(ModeTheoryError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class DanglingReference(ModeTheoryError):
    pass


class ConflictingEntry(ModeTheoryError):
    pass


class ModeMismatch(ModeTheoryError):
    pass


class MissingEntry(ModeTheoryError):
    """A composite is absent from a table, so the theory is not closed."""


class ScopeError(MttError):
    def __init__(self, message: str, culprit: object = None):
        super().__init__(message)
        self.culprit = culprit


class SyntaxParseError(MttError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"at offset {pos}: {message}")
        self.pos = pos


class GenerationExhausted(MttError):
    pass
