"""Service layer: configuration, persistence, runtime wiring, HTTP API, CLI."""
from .config import Config, EmbedderConfig, ProviderConfig, ScholarConfig
from .pipeline import run_pipeline
from .runtime import Runtime
from .storage import FileFlowStorage, FlowStorage, MemoryFlowStorage

__all__ = [
    "Config",
    "EmbedderConfig",
    "FileFlowStorage",
    "FlowStorage",
    "MemoryFlowStorage",
    "ProviderConfig",
    "Runtime",
    "ScholarConfig",
    "run_pipeline",
]
