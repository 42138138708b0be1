"""Exception hierarchy shared by all modules."""


class EffHomError(Exception):
    """Base class for every error raised by effhom."""

    exit_code = 1


class ParseError(EffHomError):
    exit_code = 2


class AuditError(EffHomError):
    """A construction audit failed (category law, functoriality, action law...).

    ``law`` names the violated law and ``witness`` holds the offending data.
    """

    exit_code = 3

    def __init__(self, law, witness=None, message=None):
        self.law = law
        self.witness = witness
        text = message or f"{law} violated"
        if witness is not None:
            text += f": {witness!r}"
        super().__init__(text)


class Unsupported(EffHomError):
    exit_code = 4


class NonNilpotent(EffHomError):
    """A perturbation series did not reach zero within its bound."""

    exit_code = 5


class ComplexMismatch(EffHomError):
    exit_code = 6


class IllFormed(EffHomError):
    exit_code = 7


class LocalFinitenessViolation(EffHomError):
    exit_code = 8
