"""
Filesystem operations for pipeline artefacts.

Every output file goes through ``atomic_write`` so a failed run never
leaves a half-written CSV or graph file behind.
"""

import os
import tempfile
from pathlib import Path
from typing import Union

from schoolink.engine.errors import DataIOError

PathLike = Union[str, "os.PathLike[str]"]


def _io_error(path: PathLike, e: OSError) -> DataIOError:
    return DataIOError(str(path), e.strerror or str(e))


def read_file(path: PathLike, encoding: str = "utf-8") -> str:
    """Read a whole text file; OS failures become DataIOError."""
    try:
        return Path(path).read_text(encoding=encoding)
    except OSError as e:
        raise _io_error(path, e) from e


def atomic_write(path: PathLike, content: Union[str, bytes], encoding: str = "utf-8") -> Path:
    """
    Write ``content`` to ``path`` through a sibling temporary file.

    The target is replaced in one step, so readers see either the old file
    or the complete new one.
    """
    target = Path(path)
    data = content if isinstance(content, bytes) else content.encode(encoding)
    try:
        with tempfile.NamedTemporaryFile(
            dir=target.parent, prefix=f".{target.name}.", delete=False
        ) as tmp:
            tmp.write(data)
    except OSError as e:
        raise _io_error(target, e) from e

    try:
        os.replace(tmp.name, target)
    except OSError as e:
        Path(tmp.name).unlink(missing_ok=True)
        raise _io_error(target, e) from e
    return target


def makedirs(path: PathLike, exist_ok: bool = True) -> Path:
    """``mkdir -p``; returns the directory."""
    directory = Path(path)
    try:
        directory.mkdir(parents=True, exist_ok=exist_ok)
    except OSError as e:
        raise _io_error(directory, e) from e
    return directory
