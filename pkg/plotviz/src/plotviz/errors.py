"""Errors raised while reading sweep outputs."""


class PlotvizError(Exception):
    """Base class for figure-rendering errors."""


class SchemaMismatch(PlotvizError):
    """Input file does not match the expected schema."""


class MissingColumn(PlotvizError):
    """A required column carries no values."""
