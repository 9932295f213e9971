"""
Autodecomposição Hermitiana com fixação determinística de fase.
"""
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from src import config

PHASE_REL_TOL = 1e-8


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """
    Torna real-positiva a primeira componente cuja magnitude está a 1e-8
    (relativo) da maior componente de cada autovetor (colunas).
    """
    fixed = np.array(vectors, dtype=complex, copy=True)
    mags = np.abs(fixed)
    col_max = mags.max(axis=0)
    for col in range(fixed.shape[1]):
        if col_max[col] == 0.0:
            continue
        pivot = int(np.argmax(mags[:, col] >= (1.0 - PHASE_REL_TOL) * col_max[col]))
        value = fixed[pivot, col]
        fixed[:, col] *= np.conj(value) / abs(value)
    return fixed


def degenerate_clusters(values: np.ndarray, tol: float) -> List[np.ndarray]:
    """Agrupa autovalores ordenados cuja distância ao vizinho é <= tol."""
    if values.size == 0:
        return []
    breaks = np.nonzero(np.diff(values) > tol)[0] + 1
    return np.split(np.arange(values.size), breaks)


def eigensystem(
    matrix: np.ndarray,
    refine_with: Optional[np.ndarray] = None,
    degeneracy_tol: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Autovalores crescentes e autovetores (colunas) de uma matriz Hermitiana.

    Args:
        matrix: Matriz Hermitiana densa
        refine_with: Operador Hermitiano que comuta com `matrix`; diagonalizado
            dentro de cada autoespaço degenerado para fixar a base
        degeneracy_tol: Tolerância (Hz) de degenerescência (default: DEGENERACY_TOL_HZ)

    Returns:
        (autovalores, autovetores) com fases fixadas
    """
    tol = config.DEGENERACY_TOL_HZ if degeneracy_tol is None else degeneracy_tol
    values, vectors = linalg.eigh(np.asarray(matrix, dtype=complex))

    if refine_with is not None:
        refine = np.asarray(refine_with, dtype=complex)
        for cluster in degenerate_clusters(values, tol):
            if cluster.size < 2:
                continue
            block = vectors[:, cluster]
            sub = block.conj().T @ refine @ block
            _, rot = linalg.eigh(0.5 * (sub + sub.conj().T))
            vectors[:, cluster] = block @ rot

    return values, fix_phases(vectors)
