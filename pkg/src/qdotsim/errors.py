"""Exception hierarchy. The CLI maps these onto distinct exit codes."""


class QdotsimError(Exception):
    """Base class for all package errors."""


class StateError(QdotsimError):
    """Bad register state: wrong representation, dimension, index, or norm."""


class BlockadeError(QdotsimError):
    """Attempt to put a second electron on an occupied dot."""


class AdjacencyError(QdotsimError):
    """Operation on dots that are not grid neighbors (or not a valid chain)."""


class RoutingError(QdotsimError):
    """No admissible path through empty dots exists."""


class ProtocolError(QdotsimError):
    """Protocol precondition violated (missing EPR pair, non-ground input, ...)."""


class SchemaError(QdotsimError):
    """Scenario file fails static validation."""
