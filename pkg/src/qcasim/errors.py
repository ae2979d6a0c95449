"""Shared exception types."""


class EnumerationLimitError(RuntimeError):
    """A brute-force enumeration would exceed its configured size guard."""


class SpecFormatError(ValueError):
    """An input spec file is malformed (missing keys, wrong shapes, bad JSON)."""
