# Storage package
from src.storage.run_store import RunStore, config_digest

__all__ = ["RunStore", "config_digest"]
