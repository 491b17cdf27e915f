# Copyright (c) 2024 Schoolink Contributors
# MIT License

"""Schoolink release metadata."""

from __future__ import annotations

__version__ = "0.1.0"
__author__ = "Schoolink Contributors"

# Version info tuple for programmatic comparison
VERSION_INFO = (0, 1, 0)
