"""
Estado de prova preparado pelo campo-guia (aproximação linear de alta temperatura).
"""
from typing import Optional, Sequence, Union

import numpy as np
from scipy import constants, linalg

from src import config
from src.errors import DomainError
from src.schema import Hamiltonian, ProbeState, SpinOperator, SpinSystem, axis_vector
from src.spin_system import observable_operators

AxisLike = Union[str, Sequence[float], np.ndarray]


def polarization_scale(polarizing_field: float, temperature: float) -> float:
    """h·B_p / (k_B·T): multiplicado por γ_j (Hz/T) dá ε_j."""
    if polarizing_field < 0:
        raise DomainError(f"polarizing_field deve ser >= 0, recebido {polarizing_field}")
    if temperature <= 0:
        raise DomainError(f"temperature deve ser > 0, recebido {temperature}")
    return constants.h * polarizing_field / (constants.k * temperature)


def thermal_probe(
    system: SpinSystem,
    guiding_axis: AxisLike,
    polarizing_field: Optional[float] = None,
    temperature: Optional[float] = None,
) -> ProbeState:
    """
    ρ₀ = 1/2ⁿ − Σ_j ε_j (I_j · k̂_g), com ε_j = h·γ_j·B_p/(k_B·T).

    Args:
        system: Molécula
        guiding_axis: 'x', 'y', 'z' ou 3-vetor (normalizado)
        polarizing_field: B_p em tesla (default: POLARIZING_FIELD_T)
        temperature: T em kelvin (default: SAMPLE_TEMPERATURE_K)
    """
    k = axis_vector(guiding_axis)
    scale = polarization_scale(
        config.POLARIZING_FIELD_T if polarizing_field is None else polarizing_field,
        config.SAMPLE_TEMPERATURE_K if temperature is None else temperature,
    )
    O = observable_operators(system)
    deviation = -scale * sum(kc * o for kc, o in zip(k, O))
    return ProbeState(
        deviation=deviation,
        guiding_axis=k,
        polarization_scale=scale,
        epsilons=tuple(scale * g for g in system.gammas),
    )


def probe_expectation(probe: ProbeState, operator: Union[SpinOperator, np.ndarray]) -> float:
    """Tr[ρ₀ A] usando apenas o desvio (A sem traço)."""
    matrix = operator.matrix if isinstance(operator, SpinOperator) else np.asarray(operator)
    if matrix.shape != probe.deviation.shape:
        raise DomainError(f"dimensão {matrix.shape} incompatível com {probe.deviation.shape}")
    return float(np.real(np.trace(probe.deviation @ matrix)))


def propagator(hamiltonian: Hamiltonian, t: float) -> np.ndarray:
    """exp(−i·2π·H·t) com H em Hz."""
    return linalg.expm(-2j * np.pi * hamiltonian.matrix * t)


def evolve(probe: ProbeState, hamiltonian: Hamiltonian, t: float) -> ProbeState:
    """ρ(t) = U ρ₀ U†, U = exp(−i·2π·H·t)."""
    if hamiltonian.dimension != probe.dimension:
        raise DomainError("Hamiltoniano e estado de prova com dimensões diferentes")
    U = propagator(hamiltonian, t)
    deviation = U @ probe.deviation @ U.conj().T
    return ProbeState(
        deviation=0.5 * (deviation + deviation.conj().T),
        guiding_axis=probe.guiding_axis,
        polarization_scale=probe.polarization_scale,
        epsilons=probe.epsilons,
    )


def magnetization_trace(
    probe: ProbeState,
    hamiltonian: Hamiltonian,
    observable: Union[SpinOperator, np.ndarray],
    times: Sequence[float],
    tau_coh: Optional[float] = None,
) -> np.ndarray:
    """
    Tr[ρ(t)·Ô] por propagação explícita, opcionalmente com envelope e^{−t/τ}.
    Serve de verificação cruzada do sinal construído pelo catálogo.
    """
    times = np.asarray(times, dtype=float)
    O = observable.matrix if isinstance(observable, SpinOperator) else np.asarray(observable)
    trace = np.array([
        np.real(np.trace(evolve(probe, hamiltonian, t).deviation @ O)) for t in times
    ])
    if tau_coh is not None and np.isfinite(tau_coh):
        trace = trace * np.exp(-times / tau_coh)
    return trace
