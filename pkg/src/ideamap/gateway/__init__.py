from .core import Gateway
from .payloads import (
    PAYLOAD_KINDS,
    TEMPLATE_PAYLOAD_KIND,
    ParsedPayload,
    extract_json,
    parse_json_object,
    parse_payload,
    serialize_payload,
)
from .provider import (
    CompletionRequest,
    GenerationParams,
    HttpChatProvider,
    RetryPolicy,
    TextProvider,
    call_with_retry,
)
from .templates import (
    TEMPLATE_NAMES,
    TEMPLATE_PLACEHOLDERS,
    PromptTemplate,
    load_template,
    render,
    render_template,
    tokenize,
)

__all__ = [
    "Gateway",
    "PAYLOAD_KINDS",
    "TEMPLATE_PAYLOAD_KIND",
    "ParsedPayload",
    "extract_json",
    "parse_json_object",
    "parse_payload",
    "serialize_payload",
    "CompletionRequest",
    "GenerationParams",
    "HttpChatProvider",
    "RetryPolicy",
    "TextProvider",
    "call_with_retry",
    "TEMPLATE_NAMES",
    "TEMPLATE_PLACEHOLDERS",
    "PromptTemplate",
    "load_template",
    "render",
    "render_template",
    "tokenize",
]
