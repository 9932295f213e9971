"""
Sistema de coordenadas alinhado ao campo, matriz P(θ, φ), elementos de matriz
do observável no referencial do campo e a fórmula fatorada de amplitude.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy import linalg

from src.analytic import quantization_operator
from src.eigen import eigensystem
from src.schema import FrameBasis, Hamiltonian, SpinSystem, axis_vector
from src.spin_system import observable_operators, total_spin_operators

POLE_TOL = 1e-12


def frame_basis(theta: float, phi: float) -> FrameBasis:
    """
    z′ = (sinθcosφ, sinθsinφ, cosθ), x′ = ∂z′/∂θ, y′ = (1/sinθ)∂z′/∂φ.
    Nos polos (sinθ ≈ 0) usa φ = 0.
    """
    if abs(np.sin(theta)) < POLE_TOL:
        phi = 0.0
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    return FrameBasis(
        x=np.array([ct * cp, ct * sp, -st]),
        y=np.array([-sp, cp, 0.0]),
        z=np.array([st * cp, st * sp, ct]),
    )


def frame_matrices(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """P(θ, φ) vetorizado: array (..., 3, 3) com colunas x′, y′, z′."""
    theta = np.asarray(theta, dtype=float)
    phi = np.where(np.abs(np.sin(theta)) < POLE_TOL, 0.0, np.asarray(phi, dtype=float))
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    zeros = np.zeros_like(st)
    x = np.stack([ct * cp, ct * sp, -st], axis=-1)
    y = np.stack([-sp, cp, zeros], axis=-1)
    z = np.stack([st * cp, st * sp, ct], axis=-1)
    return np.stack([x, y, z], axis=-1)


def direction_angles(direction: Sequence[float]) -> tuple:
    """(θ, φ) de um vetor não nulo."""
    n_hat = axis_vector(direction)
    theta = float(np.arccos(np.clip(n_hat[2], -1.0, 1.0)))
    phi = float(np.arctan2(n_hat[1], n_hat[0])) if np.hypot(n_hat[0], n_hat[1]) > POLE_TOL else 0.0
    return theta, phi


def rotation_unitary(system: SpinSystem, theta: float, phi: float) -> np.ndarray:
    """U = exp(−iφF_z)·exp(−iθF_y), com U·Î_l·U† = Σ_m P_ml·Î_m."""
    if abs(np.sin(theta)) < POLE_TOL:
        phi = 0.0
    _, Fy, Fz = total_spin_operators(system)
    return linalg.expm(-1j * phi * Fz) @ linalg.expm(-1j * theta * Fy)


@dataclass(frozen=True, eq=False)
class PrimedTable:
    """Energias (Hz) e ⟨Ψ_i|Ô′|Ψ_j⟩ (array d×d×3) no referencial do campo."""
    energies: np.ndarray
    elements: np.ndarray

    def element(self, i: int, j: int) -> np.ndarray:
        return self.elements[i, j]


def frame_refinement(system: SpinSystem) -> np.ndarray:
    """F_z + 100·F² + 10⁴·F_h² no referencial do campo (z′ → z)."""
    return quantization_operator(system, (0.0, 0.0, 1.0))


def primed_matrix_elements(
    system: SpinSystem,
    hamiltonian: Hamiltonian,
    field_direction: Optional[Sequence[float]],
) -> PrimedTable:
    """
    Elementos ⟨Ψ_i|Ô′_l|Ψ_j⟩ = ⟨ψ_i|Ô_l|ψ_j⟩, com |ψ⟩ autovetores de U†HU.
    Independentes da orientação do campo (mesma base de fase fixada).
    """
    has_direction = field_direction is not None and np.linalg.norm(field_direction) > 0
    theta, phi = direction_angles(field_direction) if has_direction else (0.0, 0.0)
    U = rotation_unitary(system, theta, phi)
    H_frame = U.conj().T @ hamiltonian.matrix @ U
    H_frame = 0.5 * (H_frame + H_frame.conj().T)
    energies, vectors = eigensystem(H_frame, refine_with=frame_refinement(system))
    O = observable_operators(system)
    elements = np.stack([vectors.conj().T @ o @ vectors for o in O], axis=-1)
    return PrimedTable(energies=energies, elements=elements)


def ch_reference_elements(gamma_c: float, gamma_h: float) -> Dict[int, np.ndarray]:
    """⟨singleto|Ô′|tripleto m⟩ em forma fechada para o par CH (base de campo zero)."""
    d = gamma_c - gamma_h
    r = d / (2.0 * np.sqrt(2.0))
    return {
        -1: np.array([r, -1j * r, 0.0]),
        0: np.array([0.0, 0.0, d / 2.0]),
        1: np.array([-r, -1j * r, 0.0]),
    }


def align_phase(element: np.ndarray, reference: np.ndarray) -> complex:
    """Fase global e^{iα} que leva `element` a `reference` (calibração pelo elemento m=0)."""
    overlap = np.vdot(element, reference)
    return complex(overlap / abs(overlap)) if abs(overlap) > 0 else 1.0 + 0j


def amplitude_formula(
    theta: float,
    phi: float,
    guiding_axis: Sequence[float],
    primed_element: Sequence[complex],
    polarization_scale: float,
) -> float:
    """ℜ = escala · |k̂_g · P·v| · |ẑ · P·v|."""
    P = frame_basis(theta, phi).P
    k_hat = axis_vector(guiding_axis)
    pv = P @ np.asarray(primed_element, dtype=complex)
    return float(polarization_scale * abs(k_hat @ pv) * abs(pv[2]))
