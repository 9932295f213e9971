"""
Testes para sistemas de spin, operadores e presets.
"""
import json

import numpy as np
import pytest

from src import config
from src.errors import ConfigError, DomainError
from src.schema import SpinSystem
from src.spin_system import (
    build_star_molecule,
    collective_operator,
    list_presets,
    load_molecule,
    observable_operators,
    spin_operator,
    total_spin_squared,
)


def test_star_molecule_structure(star_factory):
    """Testa a construção de uma estrela ¹³CH₃."""
    system = star_factory(3, J=136.25)

    assert system.n_spins == 4
    assert system.dimension == 16
    assert system.is_star
    assert system.n_protons == 3
    assert system.gammas[0] == config.GAMMA_C_HZ_PER_T
    assert all(g == config.GAMMA_H_HZ_PER_T for g in system.gammas[1:])
    assert system.couplings[0, 1:].tolist() == [136.25] * 3
    # satélites não se acoplam entre si
    assert np.all(system.couplings[1:, 1:] == 0.0)
    assert len(system.coupling_pairs()) == 3


@pytest.mark.parametrize("n_protons,J", [(0, 150.0), (1.5, 150.0), (2, 0.0)])
def test_star_molecule_invalid(n_protons, J):
    """Testa que estrelas inválidas são rejeitadas."""
    with pytest.raises(DomainError):
        build_star_molecule(n_protons, J, 1.0, 2.0, 1.0)


def test_spin_system_validation():
    """Testa as pré-condições do SpinSystem."""
    with pytest.raises(DomainError):
        SpinSystem(gammas=(1.0, 2.0), couplings=np.array([[0, 1.0], [2.0, 0]]), coherence_time=1.0)
    with pytest.raises(DomainError):
        SpinSystem(gammas=(1.0, 2.0), couplings=np.array([[1.0, 0], [0, 0]]), coherence_time=1.0)
    with pytest.raises(DomainError):
        SpinSystem(gammas=(1.0,), couplings=np.zeros((1, 1)), coherence_time=0.0)
    with pytest.raises(DomainError):
        n = config.MAX_SPINS + 1
        SpinSystem(gammas=(1.0,) * n, couplings=np.zeros((n, n)), coherence_time=1.0)


def test_spin_operator_commutation(formic_acid):
    """Testa [I_x, I_y] = i·I_z no espaço produto."""
    Ix = spin_operator(formic_acid, 1, "x").matrix
    Iy = spin_operator(formic_acid, 1, "y").matrix
    Iz = spin_operator(formic_acid, 1, "z").matrix

    assert np.allclose(Ix @ Iy - Iy @ Ix, 1j * Iz, atol=1e-14)
    # operadores de spins diferentes comutam
    Cx = spin_operator(formic_acid, 0, "x").matrix
    assert np.allclose(Cx @ Iy - Iy @ Cx, 0.0, atol=1e-14)


def test_spin_operator_invalid_arguments(formic_acid):
    """Testa índice e eixo inválidos."""
    with pytest.raises(DomainError):
        spin_operator(formic_acid, 2, "x")
    with pytest.raises(DomainError):
        spin_operator(formic_acid, 0, "w")
    with pytest.raises(DomainError):
        collective_operator(formic_acid, [1.0, 2.0, 3.0], "z")


def test_observable_weights(formic_acid):
    """Testa que Ô_z = γ_C·I_Cz + γ_H·I_Hz."""
    _, _, Oz = observable_operators(formic_acid)
    expected = (
        formic_acid.gammas[0] * spin_operator(formic_acid, 0, "z").matrix
        + formic_acid.gammas[1] * spin_operator(formic_acid, 1, "z").matrix
    )
    assert np.allclose(Oz, expected)


def test_total_spin_squared_spectrum(formic_acid, acetonitrile):
    """Testa os autovalores de F²: singleto + tripleto para o par CH."""
    eig = np.sort(np.linalg.eigvalsh(total_spin_squared(formic_acid)))
    assert eig == pytest.approx([0.0, 2.0, 2.0, 2.0], abs=1e-12)

    # três prótons: f_h = 3/2 (4 estados) e 1/2 (2 cópias de 2 estados)
    eig_h = np.linalg.eigvalsh(total_spin_squared(acetonitrile, [1, 2, 3]))
    values, counts = np.unique(np.round(eig_h, 9), return_counts=True)
    assert values.tolist() == pytest.approx([0.75, 3.75])
    assert counts.tolist() == [8, 8]


def test_presets_available():
    """Testa os presets distribuídos."""
    presets = list_presets()
    for name in ("formic_acid", "formaldehyde", "acetonitrile", "acetic_acid"):
        assert name in presets


def test_load_formic_acid(formic_acid):
    """Testa o preset do ácido fórmico."""
    assert formic_acid.name == "formic_acid"
    assert formic_acid.n_protons == 1
    assert formic_acid.meta["J_hz"] == pytest.approx(222.2)
    assert formic_acid.coherence_time == pytest.approx(10.4)


def test_load_unknown_molecule():
    """Testa que um nome desconhecido lista os presets."""
    with pytest.raises(ConfigError) as excinfo:
        load_molecule("unobtainium")
    assert "formic_acid" in str(excinfo.value)


def test_load_general_molecule_file(tmp_path):
    """Testa arquivo de molécula com rede geral e símbolos de núcleo."""
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({
        "name": "chain",
        "gammas": ["13C", "1H", 1.0e6],
        "couplings": [[0, 1, 140.0], [1, 2, 7.0]],
        "tau_coh_s": 2.0,
    }))

    system = load_molecule(path)

    assert system.n_spins == 3
    assert not system.is_star
    assert system.gammas == (config.GAMMA_C_HZ_PER_T, config.GAMMA_H_HZ_PER_T, 1.0e6)
    assert system.couplings[1, 2] == pytest.approx(7.0)
    assert system.couplings[2, 1] == pytest.approx(7.0)


def test_load_molecule_unknown_nucleus(tmp_path):
    """Testa núcleo desconhecido no arquivo."""
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "gammas": ["15N"], "tau_coh_s": 1.0}))
    with pytest.raises(ConfigError) as excinfo:
        load_molecule(path)
    assert "15N" in str(excinfo.value)


def test_gamma_override():
    """Testa a substituição de γ ao carregar um preset."""
    system = load_molecule("formic_acid", gamma_c=1.0e7, gamma_h=4.0e7)
    assert system.gammas == (1.0e7, 4.0e7)


def test_spin_system_dict_roundtrip(acetonitrile):
    """Testa to_dict/from_dict preservando a rede."""
    rebuilt = SpinSystem.from_dict(acetonitrile.to_dict())
    assert rebuilt.gammas == acetonitrile.gammas
    assert np.array_equal(rebuilt.couplings, acetonitrile.couplings)
    assert rebuilt.is_star
