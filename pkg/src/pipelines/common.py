"""
Peças compartilhadas pelos pipelines: molécula, vetores e operadores a partir do RunConfig.
"""
from typing import Optional, Tuple

from src.errors import ConfigError
from src.run_schemas import RunConfig, VectorSpec
from src.schema import FieldVector, RotationVector, SpinOperator, SpinSystem
from src.spin_system import collective_operator, load_molecule

# Parâmetros do espectro de referência do ácido fórmico (θ, φ em rad; B em T)
REFERENCE_FIELD = VectorSpec(theta=1.289, phi=0.047, magnitude=1.0788e-7)


def build_system(cfg: RunConfig, molecule: Optional[str] = None) -> SpinSystem:
    return load_molecule(molecule or cfg.molecule, gamma_c=cfg.constants.gamma_c,
                         gamma_h=cfg.constants.gamma_h)


def build_vectors(cfg: RunConfig) -> Tuple[Optional[FieldVector], Optional[RotationVector]]:
    field = FieldVector(**cfg.field.model_dump()) if cfg.field is not None else None
    rotation = RotationVector(**cfg.rotation.model_dump()) if cfg.rotation is not None else None
    return field, rotation


def single_vector(cfg: RunConfig, default_field: bool = False):
    """Exatamente um de campo/rotação (o campo de referência quando nenhum e default_field)."""
    field, rotation = build_vectors(cfg)
    if field is not None and rotation is not None:
        raise ConfigError("informe campo OU rotação, não ambos", source="RunConfig")
    if field is None and rotation is None:
        if not default_field:
            raise ConfigError("informe o campo (--field) ou a rotação (--rotation)",
                              source="RunConfig")
        return FieldVector(**REFERENCE_FIELD.model_dump())
    return field if field is not None else rotation


def detection_operator(system: SpinSystem) -> SpinOperator:
    """Ô_z = Σ_j γ_j I_j^z (magnetômetro ao longo de z)."""
    return collective_operator(system, system.gammas, "z")
