"""
Diretório de execução reprodutível: <comando>-<sha1(config)[:10]> sob a raiz de saída.
Tabelas em CSV (pandas, 12 dígitos) e objetos em JSON com chaves ordenadas.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from src import config
from src.logging_config import get_logger
from src.schema import FourierSpectrum, TimeSeries, TransitionLine

log = get_logger(__name__)

FLOAT_FORMAT = "%.12e"


def _jsonable(value: Any) -> Any:
    """Converte tipos numpy/complexos para JSON."""
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def config_digest(snapshot: Dict[str, Any]) -> str:
    """sha1 do snapshot serializado com chaves ordenadas (10 hex)."""
    payload = json.dumps(_jsonable(snapshot), sort_keys=True, ensure_ascii=False)
    return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:10]


class RunStore:
    """Grava os artefatos de uma execução num diretório determinístico."""

    def __init__(self, command: str, snapshot: Dict[str, Any], root: Optional[str] = None):
        self.command = command
        self.snapshot = snapshot
        self.run_id = f"{command}-{config_digest(snapshot)}"
        self.path = Path(root or config.get_output_root()) / self.run_id
        self.path.mkdir(parents=True, exist_ok=True)

    def write_json(self, name: str, data: Any) -> Path:
        target = self.path / name
        with open(target, "w", encoding="utf-8") as f:
            json.dump(_jsonable(data), f, ensure_ascii=False, indent=2, sort_keys=True)
        log.debug("artifact_written", path=str(target))
        return target

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        target = self.path / name
        frame.to_csv(target, index=False, float_format=FLOAT_FORMAT)
        log.debug("artifact_written", path=str(target), rows=len(frame))
        return target

    def write_config(self) -> Path:
        return self.write_json("config.json", self.snapshot)

    def write_catalogue(self, lines: Sequence[TransitionLine], suffix: str = "") -> Path:
        """Catálogo de linhas em CSV + JSON."""
        records = [line.to_dict() for line in lines]
        self.write_json(f"catalogue{suffix}.json", records)
        frame = pd.DataFrame([
            {k: v for k, v in rec.items() if k != "labels"} for rec in records
        ], columns=["frequency_Hz", "magnitude", "phase_rad", "bra", "ket", "n_merged", "kind"])
        return self.write_frame(f"catalogue{suffix}.csv", frame)

    def write_series(self, series: TimeSeries, suffix: str = "") -> Path:
        frame = pd.DataFrame({"time_s": series.times, "signal": series.values})
        return self.write_frame(f"time_series{suffix}.csv", frame)

    def write_fourier(self, fourier: FourierSpectrum, suffix: str = "") -> Path:
        frame = pd.DataFrame({
            "frequency_Hz": fourier.frequencies,
            "re": fourier.values.real,
            "im": fourier.values.imag,
            "magnitude": fourier.magnitude,
        })
        return self.write_frame(f"spectrum{suffix}.csv", frame)
