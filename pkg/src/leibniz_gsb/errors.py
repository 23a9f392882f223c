from __future__ import annotations
from typing import Optional


class LeibnizGsbError(Exception):
    """Base class for every error raised by leibniz_gsb."""


class AlphabetMismatchError(LeibnizGsbError, ValueError):
    pass


class NotALSWError(LeibnizGsbError, ValueError):
    pass


class NotALieElementError(LeibnizGsbError, ValueError):
    pass


class CompositionShapeError(LeibnizGsbError, ValueError):
    pass


class MalformedRelationError(LeibnizGsbError, ValueError):
    pass


class InvalidInputError(LeibnizGsbError, ValueError):
    """Input data (tables, subalgebras, derivations) fails a defining law."""


class InternalConsistencyError(LeibnizGsbError, AssertionError):
    """A fact that holds for every valid input did not hold; indicates a bug."""


class PresentationSyntaxError(LeibnizGsbError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, col: Optional[int] = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)
