"""CLI package for schoolink commands."""
