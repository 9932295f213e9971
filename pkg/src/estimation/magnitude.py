"""
Magnitude do campo (ou da rotação) a partir do desdobramento Δ e propagação
da incerteza de Δ para a magnitude.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from src import config
from src.errors import DomainError


def _gammas(gamma_h: Optional[float], gamma_c: Optional[float]):
    return (
        config.GAMMA_H_HZ_PER_T if gamma_h is None else gamma_h,
        config.GAMMA_C_HZ_PER_T if gamma_c is None else gamma_c,
    )


def splitting_slope(n: int, k: int, mode: str = "field",
                    gamma_h: Optional[float] = None, gamma_c: Optional[float] = None) -> float:
    """dΔ/d|B| (Hz/T) no modo campo ou dΔ/dΩ = 2 no modo rotação."""
    if mode == "rotation":
        return 2.0
    if mode != "field":
        raise DomainError(f"Modo não suportado: {mode}")
    if n < 0 or k < 0 or n - 2 * k <= 0:
        raise DomainError(f"manifold sem linhas SQ: n={n}, k={k}")
    gamma_h, gamma_c = _gammas(gamma_h, gamma_c)
    return 2.0 * (gamma_h + (n - 2 * k) * gamma_c) / (1 + n - 2 * k)


def magnitude_from_splitting(
    delta: float,
    n: int,
    k: int = 0,
    gamma_h: Optional[float] = None,
    gamma_c: Optional[float] = None,
    mode: str = "field",
) -> float:
    """
    Inverte o desdobramento SQ: B = Δ(1+n−2k)/(2[γ_h+(n−2k)γ_c]) ou Ω = Δ/2.

    Args:
        delta: Δ_SQ em Hz (>= 0)
        n, k: número de prótons e índice do manifold
        mode: 'field' ou 'rotation'

    Returns:
        |B| em tesla ou |Ω| em Hz
    """
    if not np.isfinite(delta) or delta < 0:
        raise DomainError(f"delta deve ser >= 0, recebido {delta}")
    return float(delta / splitting_slope(n, k, mode, gamma_h, gamma_c))


def splitting_propagation(
    delta_sigmas: Sequence[float],
    n: int = 1,
    k: int = 0,
    mode: str = "field",
    gamma_h: Optional[float] = None,
    gamma_c: Optional[float] = None,
) -> pd.DataFrame:
    """Tabela σ_Δ (Hz) → σ da magnitude (propagação linear)."""
    slope = splitting_slope(n, k, mode, gamma_h, gamma_c)
    sigmas = np.asarray(delta_sigmas, dtype=float)
    if np.any(sigmas < 0):
        raise DomainError("σ_Δ deve ser >= 0")
    return pd.DataFrame({
        "sigma_delta_hz": sigmas,
        "sigma_magnitude": sigmas / slope,
        "unit": "T" if mode == "field" else "Hz",
    })


@dataclass
class MagnitudePrecision:
    """Estatística de |B| (ou Ω) recuperado de Δ ruidoso em várias repetições."""
    true_magnitude: float
    delta: float
    delta_sigma: float
    values: np.ndarray
    expected_sigma: float
    histogram: Dict[str, list] = field(default_factory=dict)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        return float(np.std(self.values, ddof=1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "true_magnitude": self.true_magnitude,
            "delta_hz": self.delta,
            "delta_sigma_hz": self.delta_sigma,
            "runs": int(self.values.size),
            "mean": self.mean,
            "std": self.std,
            "expected_sigma": self.expected_sigma,
            "histogram": self.histogram,
        }


def magnitude_precision(
    true_magnitude: float = 2.9e-8,
    delta_sigma: Optional[float] = None,
    runs: int = 300,
    seed: Optional[int] = None,
    n: int = 1,
    k: int = 0,
    mode: str = "field",
    gamma_h: Optional[float] = None,
    gamma_c: Optional[float] = None,
    bins: Optional[int] = None,
) -> MagnitudePrecision:
    """
    Repete a recuperação da magnitude com Δ ~ N(Δ_verdadeiro, σ_Δ²).

    Não há Monte Carlo de espectro aqui: a incerteza de frequência entra só via σ_Δ.
    """
    delta_sigma = config.DELTA_SIGMA_HZ if delta_sigma is None else delta_sigma
    seed = config.DEFAULT_SEED if seed is None else seed
    if runs < 2:
        raise DomainError(f"runs deve ser >= 2, recebido {runs}")
    if delta_sigma <= 0:
        raise DomainError(f"delta_sigma deve ser > 0, recebido {delta_sigma}")
    slope = splitting_slope(n, k, mode, gamma_h, gamma_c)
    delta = slope * true_magnitude
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    deltas = np.clip(delta + rng.normal(0.0, delta_sigma, size=runs), 0.0, None)
    values = deltas / slope
    counts, edges = np.histogram(values, bins=bins or config.MC_HIST_BINS)
    return MagnitudePrecision(
        true_magnitude=float(true_magnitude),
        delta=float(delta),
        delta_sigma=float(delta_sigma),
        values=values,
        expected_sigma=float(delta_sigma / slope),
        histogram={"counts": counts.tolist(), "edges": edges.tolist()},
    )
