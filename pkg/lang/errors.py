from __future__ import annotations

from typing import Optional


class AnalysisError(Exception):
    """Root of every error the tool reports to its callers (exit code 2 / HTTP 400)."""


class ParseError(AnalysisError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class WellFormednessError(AnalysisError):
    pass
