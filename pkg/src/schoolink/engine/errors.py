# Copyright (c) 2024 Schoolink Contributors
# MIT License

"""
Schoolink Error Classes.

All custom exceptions for clear error handling and exit codes.
The CLI maps every exception below onto the exit code it carries.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable


class ExitCode(enum.IntEnum):
    """Process exit codes of the schoolink CLI."""

    SUCCESS = 0
    VALIDATION_ERROR = 1
    IO_ERROR = 2
    KEYBOARD_INTERRUPT = 130


class SchoolinkError(Exception):
    """Base exception for all Schoolink errors."""

    exit_code: int = ExitCode.VALIDATION_ERROR

    def __init__(self, message: str, details: str | None = None) -> None:
        self.message = message
        self.details = details
        super().__init__(message)

    def __str__(self) -> str:
        if self.details:
            return f"{self.message}\n  Details: {self.details}"
        return self.message


class ValidationError(SchoolinkError):
    """Input data or parameters violate a module contract."""

    exit_code: int = ExitCode.VALIDATION_ERROR


class ParseError(ValidationError):
    """Error parsing a researchers, publications, organisations or config file."""

    def __init__(
        self,
        message: str,
        file_path: str | None = None,
        line: int | None = None,
        details: str | None = None,
    ) -> None:
        self.file_path = file_path
        self.line = line
        location = ""
        if file_path:
            location = f" in {file_path}"
            if line:
                location += f" at line {line}"
        super().__init__(f"Parse error{location}: {message}", details)


class DanglingReferenceError(ValidationError):
    """Publications reference researcher ids that are not in the cohort."""

    def __init__(self, offending: dict[str, Iterable[str]]) -> None:
        self.offending = {pub_id: sorted(ids) for pub_id, ids in offending.items()}
        listing = "; ".join(
            f"{pub_id} -> {', '.join(ids)}" for pub_id, ids in sorted(self.offending.items())
        )
        super().__init__(
            f"{len(self.offending)} publication(s) reference unknown researchers",
            listing,
        )


class ConfigError(ValidationError):
    """Invalid run configuration."""

    def __init__(self, message: str, source: str | None = None) -> None:
        self.source = source
        if source:
            message = f"{message} (config: {source})"
        super().__init__(f"Config error: {message}")


class DataIOError(SchoolinkError):
    """Reading or writing a data file failed."""

    exit_code: int = ExitCode.IO_ERROR

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"I/O error on {path}: {message}")


class TemplateError(SchoolinkError):
    """Error rendering one of the packaged Jinja2 report templates."""

    def __init__(self, message: str, template: str | None = None) -> None:
        self.template = template
        details = f"Template: {template}" if template else None
        super().__init__(message, details)
