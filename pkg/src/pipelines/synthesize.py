"""
Pipeline do comando synthesize: gera um arquivo de medições a partir de um vetor verdadeiro.
"""
from typing import Optional

from src.analytic import rotation_lines, zeeman_lines
from src.estimation import synthesize_measurements
from src.pipelines.common import build_system, single_vector
from src.run_logger import RunLogger
from src.run_schemas import AxisMeasurement, MeasurementFile, RunConfig
from src.schema import FieldVector
from src.storage.run_store import RunStore


def run_synthesize(cfg: RunConfig, store: RunStore, via_fft: bool = False,
                   run_log: Optional[RunLogger] = None) -> MeasurementFile:
    """
    Medições sem ruído nos eixos-guia configurados, com Δ_SQ analítico quando
    a molécula é estrela.
    """
    run_log = run_log or RunLogger("synthesize")
    system = build_system(cfg)
    vector = single_vector(cfg, default_field=True)
    mode = "field" if isinstance(vector, FieldVector) else "rotation"

    with run_log.step("synthesize"):
        measurements = synthesize_measurements(
            system, vector, cfg.guiding_axes, via_fft=via_fft,
            polarizing_field=cfg.constants.polarizing_field,
            temperature=cfg.constants.temperature,
            duration=cfg.acquisition.duration_s,
            sample_rate=cfg.acquisition.sample_rate_hz,
            fit_window=cfg.acquisition.fit_window_hz,
        )

    splitting = None
    if system.is_star:
        n, J = system.n_protons, system.meta["J_hz"]
        if mode == "field":
            report = zeeman_lines(n, 0, J, vector.magnitude, gamma_h=system.gammas[1],
                                  gamma_c=system.gammas[0])
        else:
            report = rotation_lines(n, 0, J, vector.magnitude)
        splitting = report.delta_sq

    payload = MeasurementFile(
        mode=mode,
        molecule=cfg.molecule,
        splitting_hz=splitting,
        axes=[
            AxisMeasurement(guiding_axis=axis, frequencies_hz=m.frequencies.tolist(),
                            amplitudes=m.raw.tolist())
            for axis, m in zip(cfg.guiding_axes, measurements)
        ],
    )
    store.write_config()
    store.write_json("measurements.json", payload.model_dump(mode="json", exclude_none=True))
    store.write_json("truth.json", vector.to_dict())
    return payload
