"""
Monte Carlo de precisão da orientação: ruído gaussiano nas amplitudes,
re-estimação por tentativa e desvios em relação à orientação verdadeira.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from src import config
from src.errors import DomainError, NumericError
from src.estimation.base import AmplitudeModel
from src.estimation.factory import get_model
from src.estimation.orientation import (
    orientation_deviation,
    orientation_estimate,
    symmetry_group,
    synthesize_measurements,
)
from src.logging_config import get_logger
from src.probe import polarization_scale as thermal_scale
from src.schema import AmplitudeVector, FieldVector, SpinSystem

log = get_logger(__name__)


@dataclass
class PrecisionScenario:
    """Parâmetros verdadeiros de uma simulação de precisão."""
    system: SpinSystem
    vector: Any
    guiding_axes: Sequence = ("x", "y", "z")
    polarizing_field: Optional[float] = None
    temperature: Optional[float] = None

    @property
    def mode(self) -> str:
        return "field" if isinstance(self.vector, FieldVector) else "rotation"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "molecule": self.system.name,
            "mode": self.mode,
            "vector": self.vector.to_dict(),
            "guiding_axes": [str(axis) for axis in self.guiding_axes],
        }


@dataclass
class TrialOutcome:
    index: int
    failed: bool = False
    theta: float = float("nan")
    phi: float = float("nan")
    d_theta: float = float("nan")
    d_phi: float = float("nan")
    residual: float = float("nan")
    ambiguous: bool = False
    error: Optional[str] = None


@dataclass
class PrecisionReport:
    """σ_θ, σ_φ e histogramas dos desvios sobre as tentativas válidas."""
    scenario: Dict[str, Any]
    noise_sigma: float
    trials: int
    seed: int
    noise_reference: str
    d_theta: np.ndarray
    d_phi: np.ndarray
    n_failed: int
    n_ambiguous: int
    histograms: Dict[str, Dict[str, list]] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def sigma_theta(self) -> float:
        return float(np.std(self.d_theta, ddof=1))

    @property
    def sigma_phi(self) -> float:
        return float(np.std(self.d_phi, ddof=1))

    def histogram_frame(self) -> pd.DataFrame:
        """Histogramas em formato colunar (parameter, bin_left, bin_right, count)."""
        frames = []
        for name, hist in self.histograms.items():
            edges = np.asarray(hist["edges"])
            frames.append(pd.DataFrame({
                "parameter": name,
                "bin_left": edges[:-1],
                "bin_right": edges[1:],
                "count": hist["counts"],
            }))
        return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()

    def deviation_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"d_theta_rad": self.d_theta, "d_phi_rad": self.d_phi})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "noise_sigma": self.noise_sigma,
            "noise_reference": self.noise_reference,
            "trials": self.trials,
            "seed": self.seed,
            "n_valid": int(self.d_theta.size),
            "n_failed": self.n_failed,
            "n_ambiguous": self.n_ambiguous,
            "sigma_theta_rad": self.sigma_theta,
            "sigma_phi_rad": self.sigma_phi,
            "mean_d_theta_rad": float(np.mean(self.d_theta)),
            "mean_d_phi_rad": float(np.mean(self.d_phi)),
            "histograms": self.histograms,
            "failures": self.failures,
        }


def perturb_amplitudes(
    measurement: AmplitudeVector,
    noise_sigma: float,
    rng: np.random.Generator,
    reference: Optional[str] = None,
) -> AmplitudeVector:
    """
    Escala ao pico (ou à norma), soma N(0, σ²) por entrada, corta em zero e renormaliza.
    """
    reference = config.NOISE_REFERENCE if reference is None else reference
    raw = measurement.raw
    if reference == "peak":
        ref = float(raw.max(initial=0.0))
    elif reference == "norm":
        ref = float(np.linalg.norm(raw))
    else:
        raise DomainError(f"NOISE_REFERENCE inválido: {reference}. Use 'peak' ou 'norm'")
    base = raw / ref if ref > 0 else raw
    noisy = np.clip(base + rng.normal(0.0, noise_sigma, size=base.size), 0.0, None)
    return AmplitudeVector(entries=noisy, guiding_axis=measurement.axis,
                           frequencies=measurement.frequencies)


def _run_trial(index: int, seed: int, clean: Sequence[AmplitudeVector], noise_sigma: float,
               reference: str, scenario: PrecisionScenario, model: AmplitudeModel,
               group: np.ndarray) -> TrialOutcome:
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    noisy = [perturb_amplitudes(m, noise_sigma, rng, reference) for m in clean]
    try:
        result = orientation_estimate(noisy, scenario.system, scenario.vector.magnitude,
                                      scenario.mode, model=model)
    except NumericError as e:
        log.warning("mc_trial_failed", trial=index, error=str(e))
        return TrialOutcome(index=index, failed=True, error=str(e))
    d_theta, d_phi = orientation_deviation(result.theta, result.phi, scenario.vector.theta,
                                           scenario.vector.phi, group)
    return TrialOutcome(
        index=index,
        theta=result.theta,
        phi=result.phi,
        d_theta=d_theta,
        d_phi=d_phi,
        residual=result.residual,
        ambiguous=result.ambiguous,
    )


def monte_carlo_precision(
    scenario: PrecisionScenario,
    noise_sigma: float,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    progress: bool = False,
    bins: Optional[int] = None,
    noise_reference: Optional[str] = None,
) -> PrecisionReport:
    """
    Repete a estimação com amplitudes ruidosas e reporta σ_θ, σ_φ e histogramas.

    Cada tentativa usa o gerador SeedSequence([seed, índice]); o resultado não
    depende de `workers`.

    Args:
        scenario: Molécula, vetor verdadeiro e eixos-guia
        noise_sigma: σ do ruído relativo ao pico de cada eixo (> 0)
        trials: Número de tentativas (>= MC_MIN_TRIALS)
        seed: Semente base
        workers: Threads concorrentes
        progress: Mostra barra tqdm

    Raises:
        DomainError: trials abaixo do mínimo ou σ <= 0
        NumericError: falhas acima de MC_FAILURE_MAX_PCT
    """
    trials = config.MC_TRIALS if trials is None else int(trials)
    seed = config.DEFAULT_SEED if seed is None else int(seed)
    workers = config.MC_WORKERS if workers is None else max(1, int(workers))
    reference = config.NOISE_REFERENCE if noise_reference is None else noise_reference
    if trials < config.MC_MIN_TRIALS:
        raise DomainError(f"trials deve ser >= {config.MC_MIN_TRIALS}, recebido {trials}")
    if not noise_sigma > 0:
        raise DomainError(f"noise_sigma deve ser > 0, recebido {noise_sigma}")

    scale = thermal_scale(
        config.POLARIZING_FIELD_T if scenario.polarizing_field is None else scenario.polarizing_field,
        config.SAMPLE_TEMPERATURE_K if scenario.temperature is None else scenario.temperature,
    )
    clean = synthesize_measurements(scenario.system, scenario.vector, scenario.guiding_axes,
                                    polarizing_field=scenario.polarizing_field,
                                    temperature=scenario.temperature)
    model = get_model(scenario.mode, scenario.system, scenario.vector.magnitude, scale)
    model.grid_raw([m.axis for m in clean])
    group = symmetry_group([m.axis for m in clean])

    log.info("monte_carlo_start", trials=trials, noise_sigma=noise_sigma, seed=seed,
             workers=workers, molecule=scenario.system.name)

    def run(index: int) -> TrialOutcome:
        return _run_trial(index, seed, clean, noise_sigma, reference, scenario, model, group)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(tqdm(executor.map(run, range(trials)), total=trials,
                             desc="Monte Carlo", disable=not progress))

    failed = [o for o in outcomes if o.failed]
    valid = [o for o in outcomes if not o.failed]
    if len(failed) > config.MC_FAILURE_MAX_PCT / 100.0 * trials:
        raise NumericError(
            f"{len(failed)}/{trials} tentativas falharam (limite {config.MC_FAILURE_MAX_PCT}%)"
        )
    if len(valid) < 2:
        raise NumericError("tentativas válidas insuficientes para estimar σ")

    d_theta = np.array([o.d_theta for o in valid])
    d_phi = np.array([o.d_phi for o in valid])
    histograms = {}
    for name, values in (("theta", d_theta), ("phi", d_phi)):
        counts, edges = np.histogram(values, bins=bins or config.MC_HIST_BINS)
        histograms[name] = {"counts": counts.tolist(), "edges": edges.tolist()}

    report = PrecisionReport(
        scenario=scenario.to_dict(),
        noise_sigma=float(noise_sigma),
        trials=trials,
        seed=seed,
        noise_reference=reference,
        d_theta=d_theta,
        d_phi=d_phi,
        n_failed=len(failed),
        n_ambiguous=sum(o.ambiguous for o in valid),
        histograms=histograms,
        failures=[{"trial": o.index, "error": o.error} for o in failed],
    )
    log.info("monte_carlo_done", sigma_theta=report.sigma_theta, sigma_phi=report.sigma_phi,
             n_failed=report.n_failed, n_ambiguous=report.n_ambiguous)
    return report
