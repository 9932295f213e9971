"""
Tipos de domínio do toolkit: sistemas de spin, operadores, vetores de campo,
linhas de transição, espectros e resultados de estimação.
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src import config
from src.errors import DomainError

AXES = ("x", "y", "z")
AXIS_VECTORS = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


def axis_vector(axis) -> np.ndarray:
    """Converte 'x'/'y'/'z' ou 3-vetor em vetor unitário."""
    if isinstance(axis, str):
        key = axis.strip().lower()
        if key not in AXIS_VECTORS:
            raise DomainError(f"Eixo inválido: {axis!r}. Use x, y, z ou um 3-vetor")
        return AXIS_VECTORS[key].copy()
    vec = np.asarray(axis, dtype=float).reshape(-1)
    if vec.shape != (3,):
        raise DomainError(f"Eixo deve ter 3 componentes, recebido {vec.shape}")
    norm = np.linalg.norm(vec)
    if not np.isfinite(norm) or norm == 0.0:
        raise DomainError("Eixo com norma zero não pode ser normalizado")
    return vec / norm


def axis_name(vec: np.ndarray) -> str:
    """Nome do eixo cartesiano correspondente ou representação do vetor."""
    for name, ref in AXIS_VECTORS.items():
        if np.allclose(vec, ref, atol=1e-12):
            return name
    return "[" + ", ".join(f"{c:.6g}" for c in vec) + "]"


def _check_hermitian(matrix: np.ndarray, tol: float, what: str) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"{what}: matriz deve ser quadrada, recebido {matrix.shape}")
    if matrix.size and np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise DomainError(f"{what}: matriz não é Hermitiana (tol={tol:g})")


@dataclass(frozen=True, eq=False)
class SpinSystem:
    """Molécula como rede de spins-1/2 acoplados (γ em Hz/T, J em Hz)."""
    gammas: Tuple[float, ...]
    couplings: np.ndarray
    coherence_time: float
    name: str = "custom"
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        couplings = np.array(self.couplings, dtype=float)
        n = len(gammas)
        if n < 1:
            raise DomainError("Sistema precisa de pelo menos 1 spin")
        if n > config.MAX_SPINS:
            raise DomainError(
                f"Sistema com {n} spins excede o limite de {config.MAX_SPINS} "
                f"(dimensão {2 ** n})"
            )
        if couplings.shape != (n, n):
            raise DomainError(
                f"Matriz de acoplamentos {couplings.shape} incompatível com {n} gammas"
            )
        if not np.allclose(couplings, couplings.T, atol=0.0, rtol=0.0):
            raise DomainError("Matriz de acoplamentos J deve ser simétrica")
        if np.any(np.diag(couplings) != 0.0):
            raise DomainError("Diagonal da matriz de acoplamentos J deve ser zero")
        if not self.coherence_time > 0:
            raise DomainError(f"coherence_time deve ser > 0, recebido {self.coherence_time}")
        couplings.setflags(write=False)
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "coherence_time", float(self.coherence_time))

    @property
    def n_spins(self) -> int:
        return len(self.gammas)

    @property
    def dimension(self) -> int:
        return 2 ** self.n_spins

    @property
    def n_protons(self) -> Optional[int]:
        """Número de satélites quando construído como estrela ¹³CHₙ."""
        return self.meta.get("n_protons")

    @property
    def is_star(self) -> bool:
        return self.meta.get("topology") == "star"

    def coupling_pairs(self) -> List[Tuple[int, int, float]]:
        """Lista (i, j, J_ij) do triângulo superior com J_ij != 0."""
        i_idx, j_idx = np.triu_indices(self.n_spins, k=1)
        return [
            (int(i), int(j), float(self.couplings[i, j]))
            for i, j in zip(i_idx, j_idx)
            if self.couplings[i, j] != 0.0
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "gammas": list(self.gammas),
            "couplings": [[i, j, J] for i, j, J in self.coupling_pairs()],
            "tau_coh_s": self.coherence_time,
            **({"meta": dict(self.meta)} if self.meta else {}),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SpinSystem":
        gammas = [float(g) for g in data["gammas"]]
        n = len(gammas)
        couplings = np.zeros((n, n))
        for i, j, J in data.get("couplings", []):
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise DomainError(f"Par de acoplamento inválido: ({i}, {j})")
            couplings[i, j] = couplings[j, i] = float(J)
        return cls(
            gammas=tuple(gammas),
            couplings=couplings,
            coherence_time=float(data["tau_coh_s"]),
            name=data.get("name", "custom"),
            meta=dict(data.get("meta", {})),
        )


@dataclass(frozen=True, eq=False)
class SpinOperator:
    """Operador de momento angular denso no espaço produto (dimensão 2^n)."""
    matrix: np.ndarray
    axis: str
    spin_index: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        _check_hermitian(matrix, 1e-12, f"SpinOperator {self.label or self.axis}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


class _PolarVector:
    """Parametrização (θ, φ, magnitude) comum a campo e rotação."""

    def _validate(self) -> None:
        theta, phi, magnitude = float(self.theta), float(self.phi), float(self.magnitude)
        if not (0.0 <= theta <= np.pi):
            raise DomainError(f"theta deve estar em [0, π], recebido {theta}")
        if not np.isfinite(phi):
            raise DomainError(f"phi inválido: {phi}")
        if not magnitude >= 0.0:
            raise DomainError(f"magnitude deve ser >= 0, recebido {magnitude}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(np.mod(phi, 2.0 * np.pi)))
        object.__setattr__(self, "magnitude", magnitude)

    @property
    def direction(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def cartesian(self) -> np.ndarray:
        return self.magnitude * self.direction

    @classmethod
    def from_cartesian(cls, vec) -> "_PolarVector":
        vec = np.asarray(vec, dtype=float).reshape(3)
        magnitude = float(np.linalg.norm(vec))
        if magnitude == 0.0:
            return cls(0.0, 0.0, 0.0)
        theta = float(np.arccos(np.clip(vec[2] / magnitude, -1.0, 1.0)))
        phi = float(np.arctan2(vec[1], vec[0])) if np.hypot(vec[0], vec[1]) > 0 else 0.0
        return cls(theta, phi, magnitude)

    def to_dict(self) -> Dict[str, float]:
        return {"theta": self.theta, "phi": self.phi, "magnitude": self.magnitude}


@dataclass(frozen=True)
class FieldVector(_PolarVector):
    """Campo magnético B(θ, φ) em tesla."""
    theta: float
    phi: float
    magnitude: float

    def __post_init__(self):
        self._validate()


@dataclass(frozen=True)
class RotationVector(_PolarVector):
    """Vetor de rotação Ω(θ, φ) em Hz."""
    theta: float
    phi: float
    magnitude: float

    def __post_init__(self):
        self._validate()


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Hamiltoniano denso em Hz."""
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        _check_hermitian(matrix, config.HERMITIAN_TOL, f"Hamiltonian {self.label}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __add__(self, other: "Hamiltonian") -> "Hamiltonian":
        if other.dimension != self.dimension:
            raise DomainError("Hamiltonianos com dimensões diferentes")
        label = "+".join(part for part in (self.label, other.label) if part)
        return Hamiltonian(self.matrix + other.matrix, label=label)


@dataclass(frozen=True, eq=False)
class ProbeState:
    """Estado de prova ρ₀ = 1/2ⁿ + desvio (aproximação de alta temperatura)."""
    deviation: np.ndarray
    guiding_axis: np.ndarray
    polarization_scale: float
    epsilons: Tuple[float, ...] = ()

    def __post_init__(self):
        deviation = np.asarray(self.deviation, dtype=complex)
        _check_hermitian(deviation, 1e-12 * max(1.0, np.max(np.abs(deviation), initial=0.0)),
                         "ProbeState")
        trace = np.trace(deviation)
        if abs(trace) > 1e-12 * max(1.0, np.linalg.norm(deviation)):
            raise DomainError(f"Desvio do estado de prova deve ter traço nulo (traço={trace})")
        deviation.setflags(write=False)
        object.__setattr__(self, "deviation", deviation)
        object.__setattr__(self, "guiding_axis", axis_vector(self.guiding_axis))

    @property
    def dimension(self) -> int:
        return self.deviation.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Estado completo: identidade/2ⁿ + desvio."""
        return np.eye(self.dimension) / self.dimension + self.deviation

    def is_physical(self, tol: float = 1e-12) -> bool:
        eig = np.linalg.eigvalsh(self.matrix)
        return bool(eig.min() >= -tol and eig.max() <= 1.0 + tol)


@dataclass(frozen=True)
class TransitionLabel:
    """Números quânticos |f m_f; k⟩ do estado inferior e |f′ m_f′; k′⟩ do superior."""
    f: float
    m_f: float
    f_prime: float
    m_f_prime: float
    k: int
    k_prime: Optional[int] = None

    def __post_init__(self):
        if self.k_prime is None:
            object.__setattr__(self, "k_prime", self.k)
        for f, m in ((self.f, self.m_f), (self.f_prime, self.m_f_prime)):
            if abs(m) > f + 1e-9:
                raise DomainError(f"|m_f|={abs(m)} excede f={f}")

    @property
    def delta_f(self) -> float:
        return self.f_prime - self.f

    @property
    def delta_m(self) -> float:
        return self.m_f_prime - self.m_f

    @property
    def kind(self) -> str:
        """zero_quantum, single_quantum, intra_manifold ou forbidden."""
        if self.k != self.k_prime:
            return "forbidden"
        if abs(self.delta_f) == 1 and self.delta_m == 0:
            return "zero_quantum"
        if abs(self.delta_f) == 1 and abs(self.delta_m) == 1:
            return "single_quantum"
        if self.delta_f == 0 and abs(self.delta_m) == 1:
            return "intra_manifold"
        return "forbidden"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TransitionLine:
    """Uma linha espectral: frequência, amplitude complexa ℜe^{iΦ} e autoestados."""
    frequency: float
    complex_amplitude: complex
    bra_index: int
    ket_index: int
    labels: Optional[TransitionLabel] = None
    n_merged: int = 1

    def __post_init__(self):
        if self.frequency < 0:
            raise DomainError(f"Frequência negativa: {self.frequency}")

    @property
    def magnitude(self) -> float:
        return float(abs(self.complex_amplitude))

    @property
    def phase(self) -> float:
        return float(np.angle(self.complex_amplitude))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "frequency_Hz": self.frequency,
            "magnitude": self.magnitude,
            "phase_rad": self.phase,
            "bra": self.bra_index,
            "ket": self.ket_index,
            "n_merged": self.n_merged,
        }
        if self.labels is not None:
            data["labels"] = self.labels.to_dict()
            data["kind"] = self.labels.kind
        return data


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sinal real amostrado."""
    times: np.ndarray
    values: np.ndarray
    sample_rate: float

    @property
    def duration(self) -> float:
        return len(self.values) / self.sample_rate


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """DFT unilateral (rfft) com eixo de frequência em Hz."""
    frequencies: np.ndarray
    values: np.ndarray
    n_samples: int
    sample_rate: float

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def resolution(self) -> float:
        return self.sample_rate / self.n_samples

    def energy(self) -> float:
        """Energia via Parseval: (1/N)·Σ|X_k|² sobre o espectro bilateral."""
        power = np.abs(self.values) ** 2
        weights = np.full(power.shape, 2.0)
        weights[0] = 1.0
        if self.n_samples % 2 == 0:
            weights[-1] = 1.0
        return float(np.sum(weights * power) / self.n_samples)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Catálogo de linhas + metadados de aquisição."""
    lines: List[TransitionLine]
    linewidth: float
    duration: Optional[float] = None
    sample_rate: Optional[float] = None
    series: Optional[TimeSeries] = None
    fourier: Optional[FourierSpectrum] = None

    def frequencies(self) -> np.ndarray:
        return np.array([line.frequency for line in self.lines])

    def magnitudes(self) -> np.ndarray:
        return np.array([line.magnitude for line in self.lines])


@dataclass(frozen=True)
class LineEstimate:
    """Resultado do ajuste de uma linha alvo no espectro."""
    target: float
    frequency: float
    magnitude: float
    uncertainty: float
    linewidth: float
    missing: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SplittingReport:
    """Linhas analíticas ZQ/SQ de um manifold k de ¹³CHₙ."""
    n: int
    k: int
    center: float
    zero_quantum: List[Tuple[float, TransitionLabel]]
    single_quantum: List[Tuple[float, TransitionLabel]]
    delta_zq: float
    delta_sq: float
    multiplicity: int = 1

    def frequencies(self) -> List[float]:
        return [nu for nu, _ in self.zero_quantum + self.single_quantum]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "multiplicity": self.multiplicity,
            "center_Hz": self.center,
            "delta_zq_Hz": self.delta_zq,
            "delta_sq_Hz": self.delta_sq,
            "zero_quantum": [{"frequency_Hz": nu, **lab.to_dict()} for nu, lab in self.zero_quantum],
            "single_quantum": [
                {"frequency_Hz": nu, **lab.to_dict()} for nu, lab in self.single_quantum
            ],
        }


@dataclass(frozen=True, eq=False)
class FrameBasis:
    """Base alinhada ao campo; P tem colunas (x′, y′, z′)."""
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    @property
    def P(self) -> np.ndarray:
        return np.column_stack([self.x, self.y, self.z])


@dataclass(frozen=True, eq=False)
class AmplitudeVector:
    """Magnitudes de linhas para um eixo-guia, normalizadas à norma unitária."""
    entries: np.ndarray
    guiding_axis: str
    frequencies: np.ndarray
    axis: np.ndarray = field(init=False, repr=False)
    raw: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float).reshape(-1)
        freqs = np.asarray(self.frequencies, dtype=float).reshape(-1)
        if entries.shape != freqs.shape:
            raise DomainError(
                f"entries ({entries.size}) e frequencies ({freqs.size}) com tamanhos diferentes"
            )
        if np.any(entries < 0) or not np.all(np.isfinite(entries)):
            raise DomainError("Amplitudes devem ser finitas e >= 0")
        object.__setattr__(self, "raw", entries.copy())
        norm = np.linalg.norm(entries)
        if norm > 0:
            entries = entries / norm
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "frequencies", freqs)
        axis = axis_vector(self.guiding_axis)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "guiding_axis", axis_name(axis))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "guiding_axis": self.guiding_axis,
            "frequencies_hz": self.frequencies.tolist(),
            "amplitudes": self.entries.tolist(),
        }


@dataclass
class EstimationResult:
    """Orientação (θ, φ) e magnitude recuperadas, com resíduo e diagnósticos."""
    theta: float
    phi: float
    magnitude: float
    residual: float
    mode: str = "field"
    ambiguity_set: List[Tuple[float, float]] = field(default_factory=list)
    equivalent_orientations: List[Tuple[float, float]] = field(default_factory=list)
    residual_threshold: float = 0.0
    phi_unidentifiable: bool = False
    ambiguity_curve: bool = False
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def ambiguous(self) -> bool:
        return len(self.ambiguity_set) > 1

    @property
    def unit(self) -> str:
        return "T" if self.mode == "field" else "Hz"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "theta_rad": self.theta,
            "phi_rad": self.phi,
            "magnitude": self.magnitude,
            "unit": self.unit,
            "residual": self.residual,
            "residual_threshold": self.residual_threshold,
            "ambiguous": self.ambiguous,
            "phi_unidentifiable": self.phi_unidentifiable,
            "ambiguity_curve": self.ambiguity_curve,
            "ambiguity_set": [list(pair) for pair in self.ambiguity_set],
            "equivalent_orientations": [list(pair) for pair in self.equivalent_orientations],
            "diagnostics": self.diagnostics,
        }
