class FlagItError(Exception):
    """Base class for all flagit errors."""


class GlossaryError(FlagItError):
    pass


class RuleSyntaxError(FlagItError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = "<rule>"):
        self.line = line
        self.column = column
        self.source = source
        self.reason = message
        super().__init__(f"{source}:{line}:{column}: {message}")


class UnknownSentenceError(FlagItError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InsufficientLabelsError(FlagItError):
    pass


class DegenerateTrainingSetError(FlagItError):
    pass


class KeyMismatchError(FlagItError):
    pass


class StageError(FlagItError):
    """A pipeline stage cannot run because a predecessor is missing or stale."""

    def __init__(self, missing: str, message: str | None = None):
        self.missing = missing
        super().__init__(message or f"stage {missing!r} has not been completed; run `flagit {missing}` first")


class LabelingGateError(FlagItError):
    def __init__(self, indicator: str, missing: list[str]):
        self.indicator = indicator
        self.missing = missing
        preview = ", ".join(missing[:10]) + (" ..." if len(missing) > 10 else "")
        super().__init__(f"{len(missing)} sampled sentence(s) unlabeled for {indicator!r}: {preview}")
