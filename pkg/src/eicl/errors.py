"""Exception types shared across the pipeline."""


class EiclError(Exception):
    """Base class for all pipeline errors."""


class CorpusError(EiclError):
    """Raised for malformed corpus files or label-space violations."""


class StoreError(EiclError):
    """Raised for malformed vector-store files or missing records."""


class ConfigError(EiclError):
    """Raised for invalid run configuration before any work starts."""


class TemplateError(EiclError):
    """Raised for missing or malformed prompt templates."""


class GatewayError(EiclError):
    """Base class for chat-endpoint failures; carries the request tag."""

    def __init__(self, message: str, request_tag: str = ""):
        super().__init__(message)
        self.request_tag = request_tag


class TransportError(GatewayError):
    """HTTP-level failure: exhausted retries, or a non-retryable status."""


class ProtocolError(GatewayError):
    """Endpoint answered but the body did not match the expected shape."""
