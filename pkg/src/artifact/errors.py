"""Exception types shared by the library and the command line."""


class ArtifactError(Exception):
    """Base class for every error raised on purpose by this package."""


class InputError(ArtifactError, ValueError):
    """Malformed or out-of-range input (bad letters, bad JSON, bad labels)."""


class SemanticError(ArtifactError):
    """Input that is well formed but violates a semantic precondition."""


class ResourceError(ArtifactError):
    """A configurable size cap was exceeded."""


class InternalError(ArtifactError):
    """An invariant that should hold by construction did not."""
