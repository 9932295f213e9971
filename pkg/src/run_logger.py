"""
Registro de uma execução da CLI: identidade do run (id, hash da configuração,
semente), etapas cronometradas, contadores de tentativas e desfecho, gravados
em run_log.json ao lado dos artefatos.
"""
import json
import time
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from src.logging_config import get_logger
from src.storage.run_store import RunStore, _jsonable, config_digest

log = get_logger(__name__)

RUN_LOG_NAME = "run_log.json"


class RunLogger:
    """Linha do tempo de um run; usado como context manager em volta do comando."""

    def __init__(self, command: str, run_dir: Optional[Path] = None):
        self.command = command
        self.run_dir = Path(run_dir) if run_dir is not None else None
        self.data: Dict[str, Any] = {
            "command": command,
            "started_at": datetime.now().isoformat(),
            "run_id": None,
            "config_digest": None,
            "seed": None,
            "config": {},
            "steps": [],
            "counters": {},
            "warnings": [],
            "result": {},
            "status": "running",
        }
        self._start = time.perf_counter()
        self._log = log.bind(command=command)

    def attach(self, store: RunStore) -> None:
        """Liga o log ao diretório do run e copia a identidade da configuração."""
        self.run_dir = store.path
        self.data.update({
            "run_id": store.run_id,
            "config_digest": config_digest(store.snapshot),
            "seed": store.snapshot.get("seed"),
            "config": store.snapshot,
        })
        self._log = self._log.bind(run_id=store.run_id)
        self._log.info("run_attached", seed=self.data["seed"])

    def log_result(self, summary: Dict[str, Any]):
        self.data["result"] = summary

    def log_warning(self, message: str, **context):
        self.data["warnings"].append({"message": message, **context})
        self._log.warning(message, **context)

    def count(self, name: str, value: int) -> None:
        """Contadores do run (tentativas, falhas, candidatos)."""
        self.data["counters"][name] = int(value)

    @contextmanager
    def step(self, name: str) -> Iterator[None]:
        """Cronometra uma etapa; etapas interrompidas ficam com status 'failed'."""
        entry = {"name": name, "status": "ok"}
        start = time.perf_counter()
        self._log.info("step_start", step=name)
        try:
            yield
        except Exception:
            entry["status"] = "failed"
            raise
        finally:
            entry["duration_ms"] = (time.perf_counter() - start) * 1000
            self.data["steps"].append(entry)
            self._log.info("step_done", step=name, status=entry["status"],
                           duration_ms=round(entry["duration_ms"], 3))

    def save(self) -> Optional[str]:
        """Grava run_log.json no diretório do run (se houver)."""
        self.data["duration_ms"] = (time.perf_counter() - self._start) * 1000
        if self.run_dir is None:
            return None
        target = self.run_dir / RUN_LOG_NAME
        try:
            with open(target, "w", encoding="utf-8") as f:
                json.dump(_jsonable(self.data), f, ensure_ascii=False, indent=2, default=str)
        except OSError as e:
            self._log.error("run_log_save_failed", error=str(e))
            return None
        return str(target)

    def __enter__(self) -> "RunLogger":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.data["status"] = "completed"
        else:
            self.data["status"] = "failed"
            self.data["failure"] = {"type": exc_type.__name__, "message": str(exc_val)}
            self._log.error("run_failed", error_type=exc_type.__name__, error=str(exc_val))
        self.save()
        self._log.info("run_finished", status=self.data["status"],
                       n_steps=len(self.data["steps"]))
