"""The gateway: render a template, call the provider, parse the payload.

One automatic repair round: if the reply has no JSON in it at all, the
provider is re-asked once with the parse error appended; a second failure
surfaces MalformedPayload to the caller. Key/arity violations are not
repaired; they indicate contract drift, not formatting noise.
"""
from __future__ import annotations

from typing import Mapping

from ..errors import MalformedPayload
from .payloads import TEMPLATE_PAYLOAD_KIND, ParsedPayload, parse_payload
from .provider import CompletionRequest, GenerationParams, RetryPolicy, TextProvider, call_with_retry
from .templates import render_template

_REPAIR_NOTE = (
    "\n\nYour previous reply could not be parsed ({error})."
    " Reply again with only the JSON payload in the requested format, no other text."
)


class Gateway:
    def __init__(
        self,
        provider: TextProvider,
        params: GenerationParams | None = None,
        retry: RetryPolicy | None = None,
    ):
        self.provider = provider
        self.params = params or GenerationParams()
        self.retry = retry or RetryPolicy()

    def complete_text(self, prompt: str, params: GenerationParams | None = None) -> str:
        """Raw prompt in, raw text out, with retry on transient failures."""
        use = params or self.params
        return call_with_retry(lambda: self.provider.complete(prompt, use), self.retry)

    def complete(self, request: CompletionRequest) -> str:
        prompt = render_template(request.template, request.bindings)
        return call_with_retry(lambda: self.provider.complete(prompt, request.params), self.retry)

    def generate(
        self,
        template: str,
        bindings: Mapping[str, str],
        params: GenerationParams | None = None,
    ) -> ParsedPayload:
        """Render, complete, and parse against the template's payload kind."""
        kind = TEMPLATE_PAYLOAD_KIND[template]
        prompt = render_template(template, bindings)
        raw = self.complete_text(prompt, params)
        try:
            return parse_payload(raw, kind)
        except MalformedPayload as exc:
            repair = prompt + _REPAIR_NOTE.format(error=exc)
            raw = self.complete_text(repair, params)
            return parse_payload(raw, kind)
