"""
Pipeline dos comandos estimate / estimate-rotation: lê as medições, obtém a
magnitude pelo desdobramento e a orientação pelo casamento de amplitudes.
"""
from pathlib import Path
from typing import List, Optional, Union

from src.errors import AmbiguityError, ConfigError
from src.estimation import splitting_propagation, vector_estimate
from src.pipelines.common import build_system
from src.probe import polarization_scale
from src.run_logger import RunLogger
from src.run_schemas import MeasurementFile, RunConfig, load_json_model
from src.schema import AmplitudeVector, EstimationResult
from src.storage.run_store import RunStore


def measurements_from_file(payload: MeasurementFile) -> List[AmplitudeVector]:
    return [
        AmplitudeVector(entries=axis.amplitudes, guiding_axis=axis.guiding_axis,
                        frequencies=axis.frequencies_hz)
        for axis in payload.axes
    ]


def run_estimate(
    cfg: RunConfig,
    measurements_path: Union[str, Path],
    store: RunStore,
    mode: str = "field",
    require_unique: bool = False,
    run_log: Optional[RunLogger] = None,
) -> EstimationResult:
    """
    Estima (θ, φ, |B|) ou (θ, φ, |Ω|) e grava result.json.

    Raises:
        ConfigError: arquivo inválido ou modo incompatível com o comando
        AmbiguityError: require_unique e resultado ambíguo (result.json é gravado antes)
    """
    run_log = run_log or RunLogger(f"estimate-{mode}")
    payload = load_json_model(MeasurementFile, measurements_path)
    if payload.mode != mode:
        raise ConfigError(
            f"arquivo de medições com mode='{payload.mode}', comando espera '{mode}'",
            source=str(measurements_path),
        )
    system = build_system(cfg, payload.molecule)
    measurements = measurements_from_file(payload)
    scale = polarization_scale(cfg.constants.polarizing_field, cfg.constants.temperature)

    with run_log.step("estimate"):
        result = vector_estimate(measurements, system, mode=mode, splitting=payload.splitting_hz,
                                 polarization_scale=scale)

    if payload.splitting_sigma_hz is not None and system.is_star:
        table = splitting_propagation([payload.splitting_sigma_hz], n=system.n_protons, mode=mode,
                                      gamma_h=system.gammas[1], gamma_c=system.gammas[0])
        result.diagnostics["magnitude_sigma"] = float(table["sigma_magnitude"].iloc[0])

    store.write_config()
    store.write_json("measurements.json", payload.model_dump(mode="json"))
    store.write_json("result.json", result.to_dict())
    run_log.count("n_candidates", len(result.ambiguity_set))
    if result.ambiguous:
        run_log.log_warning("estimation_ambiguous", n_candidates=len(result.ambiguity_set))
        if require_unique:
            raise AmbiguityError(
                f"{len(result.ambiguity_set)} orientações compatíveis (resíduo <= "
                f"{result.residual_threshold:.3e})"
            )
    return result
