"""Exception types shared across the package.

ValidationError covers malformed inputs (bad files, bad arguments, unknown
relations); the CLI maps it to exit code 2. RuntimeFailure covers errors in
otherwise valid requests (backend unreachable, unsatisfiable construction);
the CLI maps it to exit code 1.
"""

from __future__ import annotations


class FormtabError(Exception):
    """Base class for package errors."""


class ValidationError(FormtabError, ValueError):
    """Invalid input: bad values, malformed files, unknown names."""


class UnsupportedRelationError(ValidationError):
    """A relation name outside the library (or outside a backend's support)."""


class ArityError(ValidationError):
    """Atom argument count incompatible with its relation."""


class UnsatisfiableSampleError(FormtabError):
    """Constructive placement failed for the requested relation and shapes."""


class ProposalFailedError(FormtabError):
    """The proposer backend could not produce a usable relation graph."""


class BackendUnavailableError(FormtabError):
    """The external text-generation service could not be reached."""


class CheckpointError(ValidationError):
    """Malformed or truncated checkpoint file."""
