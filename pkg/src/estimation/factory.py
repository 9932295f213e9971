"""
Factory para criar modelos de amplitude baseado no modo de estimação.
"""
from functools import lru_cache
from typing import Optional

from src.errors import DomainError
from src.estimation.base import AmplitudeModel
from src.estimation.field_model import FieldAmplitudeModel
from src.estimation.rotation_model import RotationAmplitudeModel
from src.logging_config import get_logger
from src.schema import SpinSystem

log = get_logger(__name__)

MODES = ("field", "rotation")


@lru_cache(maxsize=16)
def _cached_model(mode: str, system: SpinSystem, magnitude: float,
                  polarization_scale: Optional[float]) -> AmplitudeModel:
    log.debug("amplitude_model_built", mode=mode, molecule=system.name, magnitude=magnitude)
    if mode == "field":
        return FieldAmplitudeModel(system, magnitude, polarization_scale)
    return RotationAmplitudeModel(system, magnitude, polarization_scale)


def get_model(
    mode: str,
    system: SpinSystem,
    magnitude: float,
    polarization_scale: Optional[float] = None,
) -> AmplitudeModel:
    """
    Retorna o modelo de amplitudes para o modo pedido (reaproveitado entre chamadas).

    Args:
        mode: 'field' (B em tesla) ou 'rotation' (Ω em Hz)
        system: Molécula (a identidade do objeto entra na chave de cache)
        magnitude: |B| ou |Ω|
        polarization_scale: h·B_p/(k_B·T); default a partir da configuração

    Returns:
        Instância de AmplitudeModel
    """
    mode = mode.lower()
    if mode not in MODES:
        raise DomainError(f"Modo não suportado: {mode}. Use 'field' ou 'rotation'")
    return _cached_model(mode, system, float(magnitude), polarization_scale)
