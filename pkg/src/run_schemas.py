"""
Schemas pydantic dos arquivos de entrada: molécula, medições e configuração de execução.
Erros de parse/validação viram ConfigError com número de linha.
"""
import json
import math
from pathlib import Path
from typing import List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src import config
from src.errors import ConfigError

AxisSpec = Union[Literal["x", "y", "z"], List[float]]
ModelT = TypeVar("ModelT", bound=BaseModel)


# ========================================
# MOLÉCULA
# ========================================

class MoleculeFile(BaseModel):
    """Definição de molécula: estrela (n_protons, J_hz) ou rede geral (gammas, couplings)."""
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1, description="Rótulo da molécula")
    description: Optional[str] = Field(None, description="Descrição livre")
    topology: Literal["star", "general"] = Field("general", description="Topologia da rede")
    n_protons: Optional[int] = Field(None, ge=1, description="Satélites equivalentes (estrela)")
    J_hz: Optional[float] = Field(None, description="Acoplamento centro-satélite (estrela)")
    center: Union[str, float] = Field("13C", description="Núcleo central ou γ em Hz/T")
    satellite: Union[str, float] = Field("1H", description="Núcleo satélite ou γ em Hz/T")
    gammas: Optional[List[Union[str, float]]] = Field(
        None, description="γ por spin (Hz/T) ou símbolos de núcleo"
    )
    couplings: List[List[float]] = Field(
        default_factory=list, description="Triângulo superior [i, j, J_Hz]"
    )
    tau_coh_s: float = Field(..., gt=0, description="Tempo de coerência (s)")

    @field_validator("couplings")
    @classmethod
    def _check_triplets(cls, value):
        for entry in value:
            if len(entry) != 3:
                raise ValueError(f"acoplamento deve ser [i, j, J_Hz], recebido {entry}")
            if int(entry[0]) >= int(entry[1]):
                raise ValueError(f"acoplamento deve ter i < j, recebido {entry}")
        return value

    @model_validator(mode="after")
    def _check_topology(self):
        if self.topology == "star":
            if self.n_protons is None or self.J_hz is None:
                raise ValueError("topologia 'star' exige n_protons e J_hz")
        elif not self.gammas:
            raise ValueError("topologia 'general' exige a lista gammas")
        return self


# ========================================
# MEDIÇÕES
# ========================================

class AxisMeasurement(BaseModel):
    """Linhas medidas para uma preparação (eixo-guia)."""
    model_config = ConfigDict(extra="forbid")

    guiding_axis: AxisSpec = Field(..., description="Eixo-guia: x, y, z ou 3-vetor")
    frequencies_hz: List[float] = Field(..., min_length=1, description="Frequências das linhas")
    amplitudes: List[float] = Field(..., min_length=1, description="Magnitudes brutas (>= 0)")

    @model_validator(mode="after")
    def _check_lengths(self):
        if len(self.frequencies_hz) != len(self.amplitudes):
            raise ValueError("frequencies_hz e amplitudes devem ter o mesmo tamanho")
        if any(a < 0 for a in self.amplitudes):
            raise ValueError("amplitudes devem ser >= 0")
        return self


class MeasurementFile(BaseModel):
    """Arquivo de medições de uma estimação vetorial."""
    model_config = ConfigDict(extra="forbid")

    mode: Literal["field", "rotation"] = Field("field", description="Campo ou rotação")
    molecule: Optional[str] = Field(None, description="Preset ou caminho da molécula")
    splitting_hz: Optional[float] = Field(None, ge=0, description="Δ_SQ medido (Hz)")
    splitting_sigma_hz: Optional[float] = Field(None, ge=0, description="Incerteza de Δ (Hz)")
    axes: List[AxisMeasurement] = Field(..., min_length=1, description="Uma entrada por eixo-guia")


# ========================================
# CONFIGURAÇÃO DE EXECUÇÃO
# ========================================

class VectorSpec(BaseModel):
    """(θ, φ, magnitude) de um campo (T) ou rotação (Hz)."""
    model_config = ConfigDict(extra="forbid")

    theta: float = Field(0.0, ge=0.0, le=math.pi, description="rad")
    phi: float = Field(0.0, description="rad")
    magnitude: float = Field(0.0, ge=0.0, description="T (campo) ou Hz (rotação)")


class AcquisitionSpec(BaseModel):
    """Aquisição; None usa 3·τ_coh e 8× a maior frequência."""
    model_config = ConfigDict(extra="forbid")

    duration_s: Optional[float] = Field(None, gt=0)
    sample_rate_hz: Optional[float] = Field(None, gt=0)
    fit_window_hz: float = Field(0.5, gt=0, description="Janela do ajuste de linhas")


class PhysicalConstants(BaseModel):
    """Constantes físicas sobrescrevíveis."""
    model_config = ConfigDict(extra="forbid")

    gamma_c: float = Field(default_factory=lambda: config.GAMMA_C_HZ_PER_T, gt=0)
    gamma_h: float = Field(default_factory=lambda: config.GAMMA_H_HZ_PER_T, gt=0)
    polarizing_field: float = Field(default_factory=lambda: config.POLARIZING_FIELD_T, ge=0)
    temperature: float = Field(default_factory=lambda: config.SAMPLE_TEMPERATURE_K, gt=0)


class RunConfig(BaseModel):
    """Configuração serializável e reexecutável de um comando."""
    model_config = ConfigDict(extra="forbid")

    molecule: str = Field("formic_acid", description="Preset ou caminho de arquivo de molécula")
    field: Optional[VectorSpec] = Field(None, description="Campo magnético")
    rotation: Optional[VectorSpec] = Field(None, description="Vetor de rotação")
    probe_axis: AxisSpec = Field("z", description="Eixo-guia do comando spectrum")
    guiding_axes: List[AxisSpec] = Field(default_factory=lambda: ["x", "y", "z"])
    acquisition: AcquisitionSpec = Field(default_factory=AcquisitionSpec)
    constants: PhysicalConstants = Field(
        default_factory=lambda: PhysicalConstants(**config.get_physical_defaults())
    )
    noise_sigma: float = Field(0.01, gt=0, description="σ do ruído gaussiano de amplitude")
    trials: int = Field(default_factory=lambda: config.MC_TRIALS, description="Ensaios Monte Carlo")
    seed: int = Field(default_factory=lambda: config.DEFAULT_SEED)
    delta_sigma_hz: float = Field(default_factory=lambda: config.DELTA_SIGMA_HZ, ge=0)
    output_dir: Optional[str] = Field(None, description="Diretório de saída da execução")

    def snapshot(self) -> dict:
        """Dump determinístico (sem output_dir) usado no hash e em config.json."""
        return self.model_dump(mode="json", exclude={"output_dir"})


# ========================================
# LEITURA COM DIAGNÓSTICO POR LINHA
# ========================================

def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def parse_json_model(model: Type[ModelT], text: str, source: str = "<string>") -> ModelT:
    """
    Valida JSON contra um schema pydantic.

    Raises:
        ConfigError: com número de linha do erro de sintaxe ou do campo inválido
    """
    if not text.strip():
        raise ConfigError("arquivo vazio", line=1, source=source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON inválido: {e.msg}", line=e.lineno, source=source) from e
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = [str(part) for part in first.get("loc", ()) if not isinstance(part, int)]
        line = None
        for key in reversed(loc):
            line = _line_of(text, key)
            if line is not None:
                break
        where = ".".join(str(part) for part in first.get("loc", ())) or "<raiz>"
        raise ConfigError(f"{where}: {first.get('msg')}", line=line or 1, source=source) from e


def load_json_model(model: Type[ModelT], path: Union[str, Path]) -> ModelT:
    """Lê e valida um arquivo JSON."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"arquivo não encontrado: {path}", source=str(path))
    return parse_json_model(model, path.read_text(encoding="utf-8"), source=str(path))
