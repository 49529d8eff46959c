"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, MissingArtifactError -> 3,
NumericalError -> 4. InputError signals a rejected call argument and is treated
as a config-class failure at the command line.
"""


class SeqSkillError(Exception):
    """Base class for all package errors."""


class InputError(SeqSkillError, ValueError):
    """An operation received an argument violating its preconditions."""


class ConfigError(SeqSkillError, ValueError):
    """A configuration is inconsistent, unknown, or out of range."""


class NumericalError(SeqSkillError, RuntimeError):
    """Training or evaluation hit non-finite values or diverged.

    Carries a ``diagnostics`` dict describing where the failure occurred.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class MissingArtifactError(SeqSkillError, FileNotFoundError):
    """A required upstream artifact (checkpoint, corpus) is absent."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


class CorpusFormatError(SeqSkillError, ValueError):
    """A corpus or checkpoint file failed to parse.

    ``offset`` is the byte position at which parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ContractViolation(SeqSkillError, RuntimeError):
    """A runtime contract (e.g. a frozen-parameter requirement) was broken."""
