"""Scientific sentence classification for abstract summarization.

Two implementations behind one protocol: a keyword-rule classifier that
runs offline (the default), and a zero-shot classifier that asks the text
provider. Neither claims parity with a fine-tuned encoder; the pipeline
only needs a reasonable Background/Method/Conclusion split.
"""
from __future__ import annotations

import re
from typing import Protocol

from ..errors import ClassifierUnavailable, IdeamapError, PreconditionError
from ..gateway.core import Gateway
from ..gateway.payloads import extract_json
from ..models import LabeledSentence

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


def split_sentences(text: str) -> list[str]:
    return [part.strip() for part in _SENTENCE_SPLIT.split(text.strip()) if part.strip()]


class SentenceClassifier(Protocol):
    def classify(self, abstract: str) -> list[LabeledSentence]: ...


# Cue phrases checked in priority order: conclusion, then method, then background.
CONCLUSION_CUES = (
    "results show",
    "results indicate",
    "our results",
    "we find",
    "we found",
    "we show that",
    "we demonstrate",
    "findings suggest",
    "we conclude",
    "in conclusion",
    "experiments show",
    "outperforms",
    "significantly improve",
)
METHOD_CUES = (
    "we propose",
    "we present",
    "we introduce",
    "we develop",
    "we design",
    "we implement",
    "we evaluate",
    "we conduct",
    "we apply",
    "our method",
    "our approach",
    "this paper presents",
    "is proposed",
    "is trained",
)
BACKGROUND_CUES = (
    "we study",
    "has become",
    "have become",
    "has been",
    "have been",
    "is important",
    "are important",
    "recent",
    "increasingly",
    "prior work",
    "existing",
    "traditionally",
    "remains an open",
    "little is known",
    "however",
    "challenge",
    "motivated by",
)


class KeywordSentenceClassifier:
    """Cue-phrase rules with a positional fallback; fragments become Other."""

    def classify(self, abstract: str) -> list[LabeledSentence]:
        if not abstract or not abstract.strip():
            raise PreconditionError("abstract must be nonempty")
        sentences = split_sentences(abstract)
        total = len(sentences)
        labeled = []
        for index, sentence in enumerate(sentences):
            labeled.append(LabeledSentence(sentence, self._label(sentence, index, total)).validate())
        return labeled

    def _label(self, sentence: str, index: int, total: int) -> str:
        if len(sentence.split()) < 3:
            return "Other"
        lower = sentence.lower()
        if any(cue in lower for cue in CONCLUSION_CUES):
            return "Conclusion"
        if any(cue in lower for cue in METHOD_CUES):
            return "Method"
        if any(cue in lower for cue in BACKGROUND_CUES):
            return "Background"
        # Positional fallback: abstracts open with background and close with findings.
        if total >= 2 and index < max(1, total // 3):
            return "Background"
        if total >= 2 and index >= total - max(1, total // 3):
            return "Conclusion"
        return "Method"


_ZERO_SHOT_PROMPT = """Label each numbered sentence from a paper abstract with exactly one of:
Background, Method, Conclusion, Other.

Sentences:
{sentences}

Reply with only JSON in this format: {{"labels": ["Background", ...]}}
The list must contain exactly {count} labels, one per sentence, in order."""


class GatewaySentenceClassifier:
    """Zero-shot labeling through the text provider."""

    def __init__(self, gateway: Gateway):
        self._gateway = gateway

    def classify(self, abstract: str) -> list[LabeledSentence]:
        if not abstract or not abstract.strip():
            raise PreconditionError("abstract must be nonempty")
        sentences = split_sentences(abstract)
        numbered = "\n".join(f"{i + 1}. {s}" for i, s in enumerate(sentences))
        prompt = _ZERO_SHOT_PROMPT.format(sentences=numbered, count=len(sentences))
        try:
            raw = self._gateway.complete_text(prompt)
            data = extract_json(raw)
        except IdeamapError as exc:
            raise ClassifierUnavailable(f"zero-shot labeling failed: {exc}") from exc
        if not isinstance(data, dict) or set(data) != {"labels"} or not isinstance(data["labels"], list):
            raise ClassifierUnavailable("labeling payload must be an object with a 'labels' list")
        labels = data["labels"]
        if len(labels) != len(sentences):
            raise ClassifierUnavailable(f"expected {len(sentences)} labels, got {len(labels)}")
        labeled = []
        for sentence, label in zip(sentences, labels):
            if label not in ("Background", "Method", "Conclusion", "Other"):
                raise ClassifierUnavailable(f"unknown label {label!r}")
            labeled.append(LabeledSentence(sentence, label))
        return labeled
