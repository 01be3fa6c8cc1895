"""Exception hierarchy shared by all plugsearch subsystems."""

from __future__ import annotations


class PlugsearchError(Exception):
    """Base class for all plugsearch errors."""


class LoadError(PlugsearchError):
    """A source record could not be parsed or read.

    Carries ``line`` (1-based) or ``row``/``record`` index when known.
    """

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message)
        self.line = line


class DuplicateIdError(LoadError):
    """Two records in one dataset pass share an explicit id."""


class FieldMissingError(LoadError):
    """A record lacks the configured text (or id) field."""


class SchemaError(LoadError):
    """A tabular source header does not match expectations."""


class SizeParseError(PlugsearchError):
    """A human-readable size string could not be parsed."""


class ConfigError(PlugsearchError):
    """An analyzer or service configuration is invalid or mismatched."""


class IndexIntegrityError(PlugsearchError):
    """An on-disk index is incomplete or corrupt."""


class EmptyCorpusError(PlugsearchError):
    """An index build was attempted over zero documents."""


class EmptyQueryError(PlugsearchError):
    """A query analyzed to zero tokens."""


class PageRangeError(PlugsearchError):
    """A requested result page lies outside the valid span."""

    def __init__(self, message: str, *, num_pages: int):
        super().__init__(message)
        self.num_pages = num_pages


class ParameterError(PlugsearchError):
    """A scoring parameter violates its domain."""


class RegistryError(PlugsearchError):
    """Base class for registry transport and storage failures."""


class AuthError(RegistryError):
    """The registry rejected the request's credentials."""


class NotFoundError(RegistryError):
    """The requested slug or version does not exist at the registry."""


class CorruptionError(RegistryError):
    """A downloaded archive failed digest verification."""


class TransportError(RegistryError):
    """A network-level failure; safe to retry."""


class TemplateError(PlugsearchError):
    """A scaffold template or its context is invalid."""
