"""
Pipeline do comando spectrum: catálogo rotulado, sinal no tempo e espectro.
"""
from typing import Any, Dict, Optional

import numpy as np

from src.analytic import label_catalogue
from src.errors import LabelingError
from src.hamiltonian import regime_ratio, total_hamiltonian
from src.pipelines.common import build_system, build_vectors, detection_operator
from src.probe import thermal_probe
from src.run_logger import RunLogger
from src.run_schemas import RunConfig
from src.spectrum import simulate_spectrum
from src.storage.run_store import RunStore


def run_spectrum(cfg: RunConfig, store: RunStore, run_log: Optional[RunLogger] = None) -> Dict[str, Any]:
    """
    Simula o espectro ZULF para um eixo-guia e grava catálogo, sinal e FFT.

    Returns:
        Resumo (número de linhas, aquisição, linhas mais fortes)
    """
    run_log = run_log or RunLogger("spectrum")
    system = build_system(cfg)
    field, rotation = build_vectors(cfg)
    H = total_hamiltonian(system, field=field, rotation=rotation)
    ratio = regime_ratio(system, field)
    probe = thermal_probe(system, cfg.probe_axis, cfg.constants.polarizing_field,
                          cfg.constants.temperature)
    observable = detection_operator(system)

    with run_log.step("simulate"):
        spectrum = simulate_spectrum(system, H, probe, observable,
                                     duration=cfg.acquisition.duration_s,
                                     sample_rate=cfg.acquisition.sample_rate_hz)

    lines = spectrum.lines
    if system.is_star:
        direction = (field or rotation).cartesian() if (field or rotation) else None
        try:
            with run_log.step("label"):
                lines = label_catalogue(system, H, probe, observable, field_direction=direction)
        except LabelingError as e:
            run_log.log_warning("labeling_failed", error=str(e))

    with run_log.step("write"):
        store.write_config()
        store.write_catalogue(lines)
        store.write_series(spectrum.series)
        store.write_fourier(spectrum.fourier)

    order = np.argsort([-line.magnitude for line in lines])
    summary = {
        "molecule": system.name,
        "n_lines": len(lines),
        "duration_s": spectrum.duration,
        "sample_rate_hz": spectrum.sample_rate,
        "linewidth_hz": spectrum.linewidth,
        "regime_ratio": ratio,
        "strongest_lines": [lines[i].to_dict() for i in order[:5]],
    }
    store.write_json("summary.json", summary)
    return summary
