"""
Moléculas como redes de spins-1/2 acoplados e operadores de momento angular
no espaço produto (embutimento de Kronecker de σ/2).
"""
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from src import config
from src.errors import ConfigError, DomainError
from src.run_schemas import MoleculeFile, load_json_model
from src.schema import AXES, SpinOperator, SpinSystem

PRESETS_DIR = Path(__file__).parent / "presets"

_PAULI_HALF = {
    "x": np.array([[0, 0.5], [0.5, 0]], dtype=complex),
    "y": np.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    "z": np.array([[0.5, 0], [0, -0.5]], dtype=complex),
}


def gamma_table(gamma_c: Optional[float] = None, gamma_h: Optional[float] = None) -> Dict[str, float]:
    """Símbolos de núcleo -> γ (Hz/T)."""
    return {
        "13C": config.GAMMA_C_HZ_PER_T if gamma_c is None else float(gamma_c),
        "1H": config.GAMMA_H_HZ_PER_T if gamma_h is None else float(gamma_h),
    }


def build_star_molecule(
    n_protons: int,
    J: float,
    gamma_center: float,
    gamma_satellite: float,
    tau_coh: float,
    name: Optional[str] = None,
) -> SpinSystem:
    """
    Estrela ¹³CHₙ: spin central (índice 0) acoplado com J a n satélites equivalentes.

    Raises:
        DomainError: n_protons < 1 ou J == 0
    """
    if int(n_protons) != n_protons or n_protons < 1:
        raise DomainError(f"n_protons deve ser inteiro >= 1, recebido {n_protons}")
    if J == 0:
        raise DomainError("J deve ser diferente de zero numa molécula estrela")
    n_protons = int(n_protons)
    n = n_protons + 1
    couplings = np.zeros((n, n))
    couplings[0, 1:] = J
    couplings[1:, 0] = J
    return SpinSystem(
        gammas=(float(gamma_center),) + (float(gamma_satellite),) * n_protons,
        couplings=couplings,
        coherence_time=tau_coh,
        name=name or f"13CH{n_protons if n_protons > 1 else ''}",
        meta={"topology": "star", "n_protons": n_protons, "J_hz": float(J)},
    )


@lru_cache(maxsize=256)
def _embedded(n_spins: int, spin_index: int, axis: str) -> np.ndarray:
    left = np.eye(2 ** spin_index, dtype=complex)
    right = np.eye(2 ** (n_spins - spin_index - 1), dtype=complex)
    matrix = np.kron(np.kron(left, _PAULI_HALF[axis]), right)
    matrix.setflags(write=False)
    return matrix


def _check_axis(axis: str) -> str:
    if axis not in AXES:
        raise DomainError(f"Eixo inválido: {axis!r}. Use x, y ou z")
    return axis


def spin_operator(system: SpinSystem, spin_index: int, axis: str) -> SpinOperator:
    """Î_{j,axis}: σ_axis/2 no spin indexado e identidade nos demais."""
    axis = _check_axis(axis)
    if not (0 <= spin_index < system.n_spins):
        raise DomainError(
            f"spin_index {spin_index} fora do intervalo [0, {system.n_spins})"
        )
    return SpinOperator(
        matrix=_embedded(system.n_spins, int(spin_index), axis),
        axis=axis,
        spin_index=int(spin_index),
        label=f"I{spin_index}{axis}",
    )


def collective_operator(system: SpinSystem, weights: Sequence[float], axis: str) -> SpinOperator:
    """Σ_j w_j Î_{j,axis}; pesos = gammas dá Ô, pesos unitários dá F."""
    axis = _check_axis(axis)
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if weights.size != system.n_spins:
        raise DomainError(
            f"weights com {weights.size} entradas; sistema tem {system.n_spins} spins"
        )
    matrix = np.zeros((system.dimension, system.dimension), dtype=complex)
    for j, w in enumerate(weights):
        if w != 0.0:
            matrix += w * _embedded(system.n_spins, j, axis)
    return SpinOperator(matrix=matrix, axis=axis, label=f"collective_{axis}")


def observable_operators(system: SpinSystem) -> List[np.ndarray]:
    """(Ô_x, Ô_y, Ô_z) com pesos γ_j."""
    return [collective_operator(system, system.gammas, axis).matrix for axis in AXES]


def total_spin_operators(system: SpinSystem, indices: Optional[Sequence[int]] = None) -> List[np.ndarray]:
    """(F_x, F_y, F_z) somando os spins em `indices` (default: todos)."""
    selected = set(range(system.n_spins) if indices is None else indices)
    weights = [1.0 if j in selected else 0.0 for j in range(system.n_spins)]
    return [collective_operator(system, weights, axis).matrix for axis in AXES]


def total_spin_squared(system: SpinSystem, indices: Optional[Sequence[int]] = None) -> np.ndarray:
    """Casimir F² de um subconjunto de spins."""
    for j in indices or []:
        if not (0 <= j < system.n_spins):
            raise DomainError(f"índice de spin {j} fora do intervalo")
    return sum(F @ F for F in total_spin_operators(system, indices))


def list_presets() -> Dict[str, str]:
    """Nome -> descrição dos presets distribuídos."""
    presets = {}
    for path in sorted(PRESETS_DIR.glob("*.json")):
        molecule_file = load_json_model(MoleculeFile, path)
        presets[path.stem] = molecule_file.description or molecule_file.name
    return presets


def _resolve_gamma(value: Union[str, float], table: Dict[str, float], source: str) -> float:
    if isinstance(value, str):
        if value not in table:
            raise ConfigError(
                f"núcleo desconhecido {value!r}; conhecidos: {', '.join(sorted(table))}",
                source=source,
            )
        return table[value]
    return float(value)


def molecule_from_file(molecule_file: MoleculeFile, table: Optional[Dict[str, float]] = None,
                       source: str = "<molecule>") -> SpinSystem:
    """Constrói SpinSystem a partir de um MoleculeFile validado."""
    table = table or gamma_table()
    if molecule_file.topology == "star":
        return build_star_molecule(
            molecule_file.n_protons,
            molecule_file.J_hz,
            _resolve_gamma(molecule_file.center, table, source),
            _resolve_gamma(molecule_file.satellite, table, source),
            molecule_file.tau_coh_s,
            name=molecule_file.name,
        )
    gammas = [_resolve_gamma(g, table, source) for g in molecule_file.gammas]
    try:
        return SpinSystem.from_dict({
            "name": molecule_file.name,
            "gammas": gammas,
            "couplings": molecule_file.couplings,
            "tau_coh_s": molecule_file.tau_coh_s,
        })
    except DomainError as e:
        raise ConfigError(str(e), source=source) from e


def load_molecule(name_or_path: Union[str, Path], gamma_c: Optional[float] = None,
                  gamma_h: Optional[float] = None) -> SpinSystem:
    """
    Resolve um preset pelo nome ou um arquivo JSON de molécula.

    Raises:
        ConfigError: nome desconhecido (lista os presets) ou arquivo inválido
    """
    table = gamma_table(gamma_c, gamma_h)
    candidate = Path(name_or_path)
    if candidate.suffix == ".json" or candidate.exists():
        molecule_file = load_json_model(MoleculeFile, candidate)
        return molecule_from_file(molecule_file, table, source=str(candidate))

    preset = PRESETS_DIR / f"{name_or_path}.json"
    if not preset.exists():
        available = ", ".join(sorted(p.stem for p in PRESETS_DIR.glob("*.json")))
        raise ConfigError(f"molécula desconhecida {name_or_path!r}. Presets: {available}")
    molecule_file = load_json_model(MoleculeFile, preset)
    return molecule_from_file(molecule_file, table, source=preset.name)
