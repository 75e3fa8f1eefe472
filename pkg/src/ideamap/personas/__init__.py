from .classifier import (
    GatewaySentenceClassifier,
    KeywordSentenceClassifier,
    SentenceClassifier,
    split_sentences,
)
from .engine import (
    DEFAULT_META_PERSONA,
    KNOWN_REAL_NAMES,
    PersonaEngine,
    TraitEdit,
    check_persona_name,
)

__all__ = [
    "GatewaySentenceClassifier",
    "KeywordSentenceClassifier",
    "SentenceClassifier",
    "split_sentences",
    "DEFAULT_META_PERSONA",
    "KNOWN_REAL_NAMES",
    "PersonaEngine",
    "TraitEdit",
    "check_persona_name",
]
