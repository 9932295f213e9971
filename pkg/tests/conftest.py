"""
Configuração de fixtures para testes.
"""
import numpy as np
import pytest

from src import config
from src.schema import FieldVector
from src.spin_system import build_star_molecule, load_molecule


@pytest.fixture
def formic_acid():
    """Fixture com o ácido fórmico (¹³CH, J = 222.2 Hz)."""
    return load_molecule("formic_acid")


@pytest.fixture
def formaldehyde():
    """Fixture com o formaldeído (¹³CH₂)."""
    return load_molecule("formaldehyde")


@pytest.fixture
def acetonitrile():
    """Fixture com a acetonitrila (¹³CH₃)."""
    return load_molecule("acetonitrile")


@pytest.fixture
def star_factory():
    """Fixture que constrói estrelas ¹³CHₙ com as constantes padrão."""
    def build(n: int, J: float = 150.0, tau: float = 1.0):
        return build_star_molecule(n, J, config.GAMMA_C_HZ_PER_T, config.GAMMA_H_HZ_PER_T, tau)
    return build


@pytest.fixture
def fig3b_field() -> FieldVector:
    """Campo do espectro de referência do ácido fórmico."""
    return FieldVector(theta=1.289, phi=0.047, magnitude=1.0788e-7)


@pytest.fixture
def output_root(tmp_path, monkeypatch):
    """Raiz de saída isolada via ZULF_OUTPUT_ROOT."""
    root = tmp_path / "runs"
    monkeypatch.setenv("ZULF_OUTPUT_ROOT", str(root))
    return root


@pytest.fixture
def rng() -> np.random.Generator:
    """Gerador determinístico para testes."""
    return np.random.default_rng(12345)


def pytest_configure(config):
    """Configura markers customizados."""
    config.addinivalue_line("markers", "slow: Monte Carlo completo (1000 tentativas)")
    config.addinivalue_line("markers", "integration: CLI de ponta a ponta")
