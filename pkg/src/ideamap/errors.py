"""Exception hierarchy shared across the package.

Every error the public operations can raise is defined here so callers
(and the HTTP layer) can map them uniformly.
"""


class IdeamapError(Exception):
    """Base class for all package errors."""


class PreconditionError(IdeamapError, ValueError):
    """An operation was called with input that violates its precondition."""


# --- graph -----------------------------------------------------------------

class UnknownFlow(IdeamapError):
    pass


class UnknownNode(IdeamapError):
    pass


class UnknownParent(IdeamapError):
    pass


class UnknownField(IdeamapError):
    pass


class InvalidEdgeKind(IdeamapError):
    pass


class CycleDetected(IdeamapError):
    pass


class DuplicateEdge(IdeamapError):
    pass


class PayloadMismatch(IdeamapError):
    pass


class DimensionMismatch(IdeamapError):
    pass


class OutOfRange(IdeamapError):
    pass


class NodeInUse(IdeamapError):
    """Soft delete refused because the node still has children."""


class SchemaVersionMismatch(IdeamapError):
    pass


class CorruptDocument(IdeamapError):
    pass


# --- gateway ---------------------------------------------------------------

class TemplateError(IdeamapError):
    pass


class MissingBinding(TemplateError):
    pass


class UnknownPlaceholder(TemplateError):
    pass


class MalformedPayload(IdeamapError):
    """Provider output could not be turned into JSON at all."""


class ArityViolation(IdeamapError):
    """A fixed-count payload came back with the wrong number of items."""


class SchemaViolation(IdeamapError):
    """JSON parsed but the keys or value types do not match the contract."""


class TransientProviderError(IdeamapError):
    """Raised by provider implementations for retryable failures."""


class ProviderTimeout(TransientProviderError):
    pass


class ProviderUnavailable(IdeamapError):
    """Provider still failing after the configured retries."""


# --- personas --------------------------------------------------------------

class ClassifierUnavailable(IdeamapError):
    pass


class NoAbstracts(PreconditionError):
    pass


class UnknownTrait(IdeamapError):
    pass


class ContractViolation(IdeamapError):
    """Generated content broke an explicit generation contract."""


# --- retrieval -------------------------------------------------------------

class RateLimited(IdeamapError):
    """Upstream kept answering 429 after bounded retries."""


class UpstreamError(IdeamapError):
    pass


class UnknownAuthor(IdeamapError):
    pass
