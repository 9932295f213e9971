"""
Hamiltoniano total em Hz: Zeeman, acoplamento J (Heisenberg) e pseudo-campo de rotação.
O fator 2π fica fora; a fase de propagação é 2π·ν·t.
"""
from typing import Optional

import numpy as np

from src import config
from src.logging_config import get_logger
from src.schema import FieldVector, Hamiltonian, RotationVector, SpinSystem
from src.spin_system import observable_operators, spin_operator, total_spin_operators

log = get_logger(__name__)


def zeeman_hamiltonian(system: SpinSystem, field: FieldVector) -> Hamiltonian:
    """H_spins = −Σ_j γ_j (I_j · B)."""
    B = field.cartesian()
    O = observable_operators(system)
    matrix = -sum(b * o for b, o in zip(B, O))
    return Hamiltonian(matrix, label="zeeman")


def coupling_hamiltonian(system: SpinSystem) -> Hamiltonian:
    """H_int = Σ_{j>i} J_ij (I_i · I_j)."""
    matrix = np.zeros((system.dimension, system.dimension), dtype=complex)
    for i, j, J in system.coupling_pairs():
        for axis in ("x", "y", "z"):
            matrix += J * (spin_operator(system, i, axis).matrix @ spin_operator(system, j, axis).matrix)
    return Hamiltonian(matrix, label="coupling")


def rotation_hamiltonian(system: SpinSystem, rotation: RotationVector) -> Hamiltonian:
    """H_Ω = −Ω · F, com F = Σ_j I_j (pseudo-campo Ω/γ_j)."""
    Omega = rotation.cartesian()
    F = total_spin_operators(system)
    matrix = -sum(w * f for w, f in zip(Omega, F))
    return Hamiltonian(matrix, label="rotation")


def regime_ratio(system: SpinSystem, field: Optional[FieldVector]) -> float:
    """|γ_max·B| / min|J_ij|; infinito para sistemas sem acoplamento."""
    magnitude = 0.0 if field is None else field.magnitude
    pairs = system.coupling_pairs()
    zeeman = max(abs(g) for g in system.gammas) * magnitude
    if not pairs:
        return float("inf") if zeeman > 0 else 0.0
    ratio = zeeman / min(abs(J) for _, _, J in pairs)
    if ratio > config.REGIME_WARN_RATIO:
        log.warning("regime_ratio", molecule=system.name, ratio=ratio,
                    limit=config.REGIME_WARN_RATIO)
    return ratio


def total_hamiltonian(
    system: SpinSystem,
    field: Optional[FieldVector] = None,
    rotation: Optional[RotationVector] = None,
) -> Hamiltonian:
    """H = H_Ω + H_spins + H_int; campo/rotação ausentes contam como zero."""
    H = coupling_hamiltonian(system)
    if field is not None and field.magnitude > 0:
        H = zeeman_hamiltonian(system, field) + H
    if rotation is not None and rotation.magnitude > 0:
        H = rotation_hamiltonian(system, rotation) + H
    return Hamiltonian(H.matrix, label="total")
