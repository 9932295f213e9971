"""
Interface base para modelos de amplitude A_sim(θ, φ).

O modelo diagonaliza o Hamiltoniano uma única vez no referencial do campo
(vetor ao longo de z) e obtém as amplitudes para qualquer orientação girando
os elementos de matriz com P(θ, φ).
"""
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src import config
from src.errors import DomainError
from src.frame import frame_matrices, primed_matrix_elements
from src.logging_config import get_logger
from src.probe import polarization_scale as thermal_scale
from src.schema import Hamiltonian, SpinSystem, axis_name, axis_vector

log = get_logger(__name__)

GRID_CHUNK = 2048
PAIR_REL_TOL = 1e-8


def normalize_amplitudes(raw: np.ndarray, zero_tol: float = 0.0) -> np.ndarray:
    """Norma unitária ao longo do último eixo; vetores com norma <= zero_tol ficam nulos."""
    raw = np.asarray(raw, dtype=float)
    norm = np.linalg.norm(raw, axis=-1, keepdims=True)
    safe = np.where(norm > zero_tol, norm, 1.0)
    return np.where(norm > zero_tol, raw / safe, 0.0)


class AmplitudeModel(ABC):
    """Modelo abstrato de amplitudes normalizadas por eixo-guia."""

    mode: str = ""

    def __init__(
        self,
        system: SpinSystem,
        magnitude: float,
        polarization_scale: Optional[float] = None,
    ):
        if not np.isfinite(magnitude) or magnitude < 0:
            raise DomainError(f"magnitude deve ser finita e >= 0, recebido {magnitude}")
        self.system = system
        self.magnitude = float(magnitude)
        self.scale = (
            thermal_scale(config.POLARIZING_FIELD_T, config.SAMPLE_TEMPERATURE_K)
            if polarization_scale is None
            else float(polarization_scale)
        )
        self._grid_cache: Dict[Tuple[str, ...], np.ndarray] = {}
        self._build_lines()

    @abstractmethod
    def frame_hamiltonian(self) -> Hamiltonian:
        """Hamiltoniano com o vetor ao longo de z e a magnitude do modelo."""
        pass

    @abstractmethod
    def vector(self, theta: float, phi: float):
        """Vetor físico (campo ou rotação) na orientação pedida."""
        pass

    # ====================================================================
    # Linhas do modelo
    # ====================================================================

    def _build_lines(self) -> None:
        table = primed_matrix_elements(self.system, self.frame_hamiltonian(), (0.0, 0.0, 1.0))
        E, V = table.energies, table.elements
        bras, kets = np.triu_indices(E.size, k=1)
        freqs = E[kets] - E[bras]
        vecs = V[bras, kets]
        strength = np.linalg.norm(vecs, axis=-1)
        vmax = float(strength.max(initial=0.0))
        keep = (freqs > config.MERGE_TOL_HZ) & (strength > PAIR_REL_TOL * vmax)
        freqs, vecs = freqs[keep], vecs[keep]

        order = np.argsort(freqs, kind="stable")
        freqs, vecs = freqs[order], vecs[order]
        breaks = np.nonzero(np.diff(freqs) > config.MERGE_TOL_HZ)[0] + 1
        clusters = np.split(np.arange(freqs.size), breaks) if freqs.size else []

        self.pair_vectors = vecs
        self.line_frequencies = np.array([freqs[c].mean() for c in clusters])
        self.membership = np.zeros((freqs.size, len(clusters)))
        for line, members in enumerate(clusters):
            self.membership[members, line] = 1.0
        self.zero_tol = 1e-9 * self.scale * vmax ** 2

        J = [abs(j) for _, _, j in self.system.coupling_pairs()]
        band = 0.5 * min(J) if J else 0.0
        self.band_indices = np.nonzero(self.line_frequencies >= band)[0]
        log.debug("amplitude_model_lines", mode=self.mode, molecule=self.system.name,
                  n_lines=len(clusters), n_band=int(self.band_indices.size))

    @property
    def band_frequencies(self) -> np.ndarray:
        """Linhas na banda J (frequência ≥ ½·min|J|)."""
        return self.line_frequencies[self.band_indices]

    def line_indices(self, frequencies: Sequence[float]) -> np.ndarray:
        """Índice da linha do modelo mais próxima de cada frequência medida."""
        frequencies = np.asarray(frequencies, dtype=float).reshape(-1)
        if self.line_frequencies.size == 0:
            raise DomainError(f"modelo sem linhas para {self.system.name}")
        dist = np.abs(frequencies[:, None] - self.line_frequencies[None, :])
        idx = np.argmin(dist, axis=1)
        worst = dist[np.arange(frequencies.size), idx]
        bad = np.nonzero(worst > config.LINE_MATCH_TOL_HZ)[0]
        if bad.size:
            f = frequencies[bad[0]]
            raise DomainError(
                f"frequência {f:.6f} Hz sem linha do modelo a menos de "
                f"{config.LINE_MATCH_TOL_HZ} Hz (mais próxima: {self.line_frequencies[idx[bad[0]]]:.6f})"
            )
        return idx

    # ====================================================================
    # Amplitudes
    # ====================================================================

    def raw_amplitudes(
        self,
        theta: np.ndarray,
        phi: np.ndarray,
        guiding_axes: Sequence,
    ) -> np.ndarray:
        """
        |Σ_pares −c·(k̂·P·v)(ẑ·P·v̄)| por linha.

        Args:
            theta, phi: arrays de mesmo formato (G pontos após achatar)
            guiding_axes: A eixos-guia

        Returns:
            Array (G, A, L) com as magnitudes não normalizadas
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float)).reshape(-1)
        phi = np.atleast_1d(np.asarray(phi, dtype=float)).reshape(-1)
        K = np.array([axis_vector(axis) for axis in guiding_axes])
        out = np.empty((theta.size, K.shape[0], self.line_frequencies.size))
        for start in range(0, theta.size, GRID_CHUNK):
            sl = slice(start, start + GRID_CHUNK)
            P = frame_matrices(theta[sl], phi[sl])
            Pv = np.einsum("gab,pb->gpa", P, self.pair_vectors)
            kPv = Pv @ K.T
            prod = kPv * np.conj(Pv[..., 2])[..., None]
            out[sl] = self.scale * np.abs(np.einsum("gpa,pl->gal", prod, self.membership))
        return out

    def normalize(self, raw: np.ndarray) -> np.ndarray:
        return normalize_amplitudes(raw, self.zero_tol)

    def simulate(self, theta: float, phi: float, guiding_axis) -> np.ndarray:
        """A_sim normalizado nas linhas da banda para um eixo-guia."""
        raw = self.raw_amplitudes(theta, phi, [guiding_axis])[0, 0, self.band_indices]
        return self.normalize(raw)

    # ====================================================================
    # Grade grossa
    # ====================================================================

    @staticmethod
    def grid_angles(step_deg: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
        """θ em [0°, 180°] inclusive e φ em [0°, 360°) com passo fixo (radianos)."""
        step = config.GRID_STEP_DEG if step_deg is None else step_deg
        theta = np.radians(np.arange(0.0, 180.0 + step / 2, step))
        phi = np.radians(np.arange(0.0, 360.0 - step / 2, step))
        return theta, phi

    def grid_raw(self, guiding_axes: Sequence) -> np.ndarray:
        """Amplitudes brutas na grade, (nθ, nφ, A, L), em cache por conjunto de eixos."""
        key = tuple(axis_name(axis_vector(axis)) for axis in guiding_axes)
        if key not in self._grid_cache:
            theta, phi = self.grid_angles()
            T, F = np.meshgrid(theta, phi, indexing="ij")
            raw = self.raw_amplitudes(T, F, guiding_axes)
            self._grid_cache[key] = raw.reshape(theta.size, phi.size, len(key), -1)
        return self._grid_cache[key]

    def describe(self) -> Dict[str, object]:
        return {
            "mode": self.mode,
            "molecule": self.system.name,
            "magnitude": self.magnitude,
            "n_lines": int(self.line_frequencies.size),
            "band_frequencies_hz": self.band_frequencies.tolist(),
        }


def model_lines(model: AmplitudeModel, lines: Optional[Sequence[float]] = None) -> List[int]:
    """Índices das linhas pedidas ou, na ausência, das linhas da banda J."""
    if lines is None:
        return model.band_indices.tolist()
    return model.line_indices(lines).tolist()
