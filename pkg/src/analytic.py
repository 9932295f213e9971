"""
Oráculo analítico para estrelas ¹³CHₙ: rotulagem |f m_f; k⟩, regras de seleção,
fórmulas de desdobramento Zeeman e de rotação, e a teoria de dois spins.
"""
from dataclasses import replace
from math import comb
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src import config
from src.eigen import eigensystem
from src.errors import DomainError, LabelingError
from src.logging_config import get_logger
from src.schema import (
    Hamiltonian,
    ProbeState,
    SpinOperator,
    SpinSystem,
    SplittingReport,
    TransitionLabel,
    TransitionLine,
    axis_vector,
)
from src.spectrum import transition_catalogue
from src.spin_system import total_spin_operators, total_spin_squared

log = get_logger(__name__)


class EigenLabel(NamedTuple):
    f: float
    m_f: float
    k: int


class TwoSpinMixing(NamedTuple):
    """Ângulo de mistura ξ e intensidade p da linha de zero-quantum."""
    xi: float
    zq_probability: float


def _check_manifold(n: int, k: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"n deve ser inteiro >= 1, recebido {n}")
    if int(k) != k or not (0 <= k <= n // 2):
        raise DomainError(f"k={k} inválido para n={n}; use 0 <= k <= {n // 2}")


def manifold_multiplicity(n: int, k: int) -> int:
    """Número de cópias degeneradas do manifold de prótons f_h = n/2 − k."""
    _check_manifold(n, k)
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)


def _label(f: float, m: float, f_p: float, m_p: float, k: int) -> TransitionLabel:
    return TransitionLabel(f=f, m_f=m, f_prime=f_p, m_f_prime=m_p, k=k)


def _lower_m_values(a: float) -> np.ndarray:
    """m_f do manifold f₋ = a − ½."""
    f_minus = a - 0.5
    return np.arange(-f_minus, f_minus + 0.5, 1.0)


def zeeman_lines(n: int, k: int, J: float, B: float,
                 gamma_h: Optional[float] = None, gamma_c: Optional[float] = None) -> SplittingReport:
    """
    Linhas ZQ (Δm_f=0) e SQ (Δm_f=±1) do manifold k em primeira ordem no campo.

    Com N = 1+n−2k: centro ½JN, ν_ZQ = centro + 2m(γ_h−γ_c)B/N e
    ν_SQ = centro + [2m(γ_h−γ_c) ∓ ((n−2k)γ_h+γ_c)]B/N, m no manifold f₋.
    Rótulos seguem o sinal Zeeman do hamiltoniano (E = −g·m·B).
    """
    _check_manifold(n, k)
    gamma_h = config.GAMMA_H_HZ_PER_T if gamma_h is None else gamma_h
    gamma_c = config.GAMMA_C_HZ_PER_T if gamma_c is None else gamma_c
    ratio = abs(gamma_h * B) / abs(J) if J else float("inf")
    if ratio > config.REGIME_WARN_RATIO:
        log.warning("regime_ratio", n=n, k=k, ratio=ratio, limit=config.REGIME_WARN_RATIO)

    N = 1 + n - 2 * k
    a = n / 2 - k
    center = 0.5 * J * N
    f_plus, f_minus = a + 0.5, a - 0.5
    zq, sq = [], []
    if n - 2 * k > 0:
        for m in _lower_m_values(a):
            zq.append((center + 2 * m * (gamma_h - gamma_c) * B / N,
                       _label(f_minus, m, f_plus, m, k)))
            for s in (1, -1):
                nu = center + (2 * m * (gamma_h - gamma_c) - s * ((n - 2 * k) * gamma_h + gamma_c)) * B / N
                sq.append((nu, _label(f_minus, m, f_plus, m + s, k)))
    zq.sort(key=lambda item: item[0])
    sq.sort(key=lambda item: item[0])
    delta_zq = 2 * (gamma_h - gamma_c) * B / N if n - 2 * k >= 2 else 0.0
    delta_sq = 2 * (gamma_h + (n - 2 * k) * gamma_c) * B / N if n - 2 * k > 0 else 0.0
    return SplittingReport(n=n, k=k, center=center, zero_quantum=zq, single_quantum=sq,
                           delta_zq=delta_zq, delta_sq=delta_sq,
                           multiplicity=manifold_multiplicity(n, k))


def rotation_lines(n: int, k: int, J: float, Omega: float) -> SplittingReport:
    """ZQ no centro ½J(1+n−2k); SQ em centro ± Ω; exato pois H_Ω comuta com H_int."""
    _check_manifold(n, k)
    N = 1 + n - 2 * k
    a = n / 2 - k
    center = 0.5 * J * N
    f_plus, f_minus = a + 0.5, a - 0.5
    zq, sq = [], []
    if n - 2 * k > 0:
        for m in _lower_m_values(a):
            zq.append((center, _label(f_minus, m, f_plus, m, k)))
            for s in (1, -1):
                sq.append((center - s * Omega, _label(f_minus, m, f_plus, m + s, k)))
    zq.sort(key=lambda item: item[0])
    sq.sort(key=lambda item: item[0])
    return SplittingReport(n=n, k=k, center=center, zero_quantum=zq, single_quantum=sq,
                           delta_zq=0.0, delta_sq=2.0 * abs(Omega) if n - 2 * k > 0 else 0.0,
                           multiplicity=manifold_multiplicity(n, k))


def splitting_from_span(span: float, n: int, k: int, mode: str = "field",
                        gamma_h: Optional[float] = None, gamma_c: Optional[float] = None) -> float:
    """
    Converte a largura total (linha SQ mais alta − mais baixa) de um manifold em Δ_SQ.
    Para n−2k = 1 ou rotação as duas grandezas coincidem.
    """
    _check_manifold(n, k)
    if mode == "rotation" or n - 2 * k == 1:
        return float(span)
    gamma_h = config.GAMMA_H_HZ_PER_T if gamma_h is None else gamma_h
    gamma_c = config.GAMMA_C_HZ_PER_T if gamma_c is None else gamma_c
    a = n / 2 - k
    outer = (4 * a - 1) * gamma_h - (2 * a - 2) * gamma_c
    return float(span * (gamma_h + (n - 2 * k) * gamma_c) / outer)


def two_spin_theory(gamma_1: float, gamma_2: float, J: float, B: float) -> TwoSpinMixing:
    """
    tan(2ξ) = J/((γ₁−γ₂)B) e p = ½|(γ₁−γ₂)·sin(2ξ)|.

    Autoestados: |Ψ₁⟩=|↑↑⟩, |Ψ₂⟩=cosξ|↑↓⟩+sinξ|↓↑⟩, |Ψ₃⟩=−sinξ|↑↓⟩+cosξ|↓↑⟩, |Ψ₄⟩=|↓↓⟩.

    Raises:
        DomainError: J = 0 e B = 0 (autoestados indefinidos)
    """
    if J == 0 and B == 0:
        raise DomainError("J=0 e B=0: caso duplamente degenerado, ξ indefinido")
    denominator = (gamma_1 - gamma_2) * B
    if denominator == 0:
        xi = np.pi / 4
    elif J == 0:
        xi = 0.0
    else:
        xi = 0.5 * float(np.arctan(J / denominator))
    return TwoSpinMixing(xi=float(xi), zq_probability=0.5 * abs((gamma_1 - gamma_2) * np.sin(2 * xi)))


def two_spin_eigenstates(xi: float) -> np.ndarray:
    """Colunas |Ψ₁..Ψ₄⟩ na base produto (↑↑, ↑↓, ↓↑, ↓↓)."""
    c, s = np.cos(xi), np.sin(xi)
    return np.array([
        [1, 0, 0, 0],
        [0, c, -s, 0],
        [0, s, c, 0],
        [0, 0, 0, 1],
    ], dtype=float)


# ========================================
# ROTULAGEM NUMÉRICA
# ========================================

def quantization_operator(system: SpinSystem, direction: Sequence[float]) -> np.ndarray:
    """C = F_z′ + 100·F² + 10⁴·F_h²: separa (f, m_f, k) dentro de autoespaços degenerados."""
    n_hat = axis_vector(direction)
    F = total_spin_operators(system)
    Fz = sum(c * op for c, op in zip(n_hat, F))
    satellites = list(range(1, system.n_spins))
    C = Fz + 100.0 * total_spin_squared(system)
    if satellites:
        C = C + 1e4 * total_spin_squared(system, satellites)
    return C


def _nearest(value: float, allowed: np.ndarray, what: str) -> float:
    idx = int(np.argmin(np.abs(allowed - value)))
    if abs(allowed[idx] - value) > config.LABEL_TOL:
        log.error("labeling_failure", quantity=what, value=value)
        raise LabelingError(
            f"{what}={value:.4f} está a mais de {config.LABEL_TOL} de qualquer valor válido"
        )
    return float(allowed[idx])


def label_eigenstates(system: SpinSystem, eigvecs: np.ndarray,
                      field_direction: Sequence[float]) -> List[EigenLabel]:
    """
    (f, m_f, k) de cada autovetor a partir de ⟨F²⟩, ⟨F_z′⟩ e ⟨F_h²⟩.

    Raises:
        DomainError: sistema não é estrela
        LabelingError: valor esperado longe de número quântico válido
    """
    if not system.is_star:
        raise DomainError(f"rotulagem |f m_f; k⟩ requer estrela ¹³CHₙ; {system.name} não é")
    n = system.n_protons
    n_hat = axis_vector(field_direction)
    F = total_spin_operators(system)
    Fz = sum(c * op for c, op in zip(n_hat, F))
    F2 = total_spin_squared(system)
    Fh2 = total_spin_squared(system, list(range(1, system.n_spins)))

    def expect(op):
        return np.real(np.einsum("ij,ik,kj->j", eigvecs.conj(), op, eigvecs))

    f_allowed = np.arange((n + 1) / 2, -0.25, -1.0)[::-1]
    fh_allowed = np.arange(n / 2, -0.25, -1.0)[::-1]
    labels = []
    for x, mz, xh in zip(expect(F2), expect(Fz), expect(Fh2)):
        f = _nearest(-0.5 + np.sqrt(0.25 + max(x, 0.0)), f_allowed, "f")
        m = _nearest(mz, np.arange(-f, f + 0.5, 1.0), "m_f")
        f_h = _nearest(-0.5 + np.sqrt(0.25 + max(xh, 0.0)), fh_allowed, "f_h")
        labels.append(EigenLabel(f=f, m_f=m, k=int(round(n / 2 - f_h))))
    return labels


def _direction_of(field_direction) -> np.ndarray:
    if field_direction is None:
        return np.array([0.0, 0.0, 1.0])
    vec = np.asarray(field_direction, dtype=float)
    return vec if np.linalg.norm(vec) > 0 else np.array([0.0, 0.0, 1.0])


def label_catalogue(
    system: SpinSystem,
    hamiltonian: Hamiltonian,
    probe: ProbeState,
    observable: Union[SpinOperator, np.ndarray],
    field_direction: Optional[Sequence[float]] = None,
) -> List[TransitionLine]:
    """Catálogo com rótulos (estado inferior → superior) em base refinada por C."""
    direction = _direction_of(field_direction)
    C = quantization_operator(system, direction)
    lines = transition_catalogue(system, hamiltonian, probe, observable, refine_with=C)
    _, vectors = eigensystem(hamiltonian.matrix, refine_with=C)
    states = label_eigenstates(system, vectors, direction)
    labelled = []
    for line in lines:
        lower, upper = states[line.bra_index], states[line.ket_index]
        labelled.append(replace(line, labels=TransitionLabel(
            f=lower.f, m_f=lower.m_f, f_prime=upper.f, m_f_prime=upper.m_f,
            k=lower.k, k_prime=upper.k,
        )))
    return labelled


def selection_rule_audit(
    lines: Sequence[TransitionLine],
    probe_axis: Sequence[float],
    field_direction: Sequence[float],
) -> List[Tuple[TransitionLine, str]]:
    """
    Violações de Δf∈{0,±1}, Δk=0 e Δm_f=0 (prova ∥ B) ou ±1 (prova ⊥ B).
    Lista vazia significa catálogo consistente.
    """
    k_hat = axis_vector(probe_axis)
    n_hat = axis_vector(field_direction)
    cos = abs(float(k_hat @ n_hat))
    parallel, perpendicular = cos > 1 - 1e-9, cos < 1e-9
    violations = []
    for line in lines:
        lab = line.labels
        if lab is None:
            violations.append((line, "linha sem rótulo"))
            continue
        if abs(lab.delta_f) > 1:
            violations.append((line, f"Δf={lab.delta_f:g}"))
        if lab.k != lab.k_prime:
            violations.append((line, f"Δk={lab.k_prime - lab.k}"))
        if abs(lab.delta_m) > 1:
            violations.append((line, f"Δm_f={lab.delta_m:g}"))
        elif parallel and lab.delta_m != 0:
            violations.append((line, f"Δm_f={lab.delta_m:g} com prova ∥ B"))
        elif perpendicular and abs(lab.delta_m) != 1:
            violations.append((line, f"Δm_f={lab.delta_m:g} com prova ⊥ B"))
    return violations
