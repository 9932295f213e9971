"""
Testes para o estado de prova e a evolução temporal.
"""
import numpy as np
import pytest
from scipy import constants

from src.errors import DomainError
from src.hamiltonian import total_hamiltonian
from src.probe import (
    evolve,
    magnetization_trace,
    polarization_scale,
    probe_expectation,
    thermal_probe,
)
from src.schema import FieldVector
from src.spectrum import time_signal, transition_catalogue
from src.spin_system import collective_operator


def test_polarization_scale():
    """Testa c = h·B_p/(k_B·T)."""
    scale = polarization_scale(1.3, 298.0)
    assert scale == pytest.approx(constants.h * 1.3 / (constants.k * 298.0))
    assert polarization_scale(0.0, 298.0) == 0.0


@pytest.mark.parametrize("field,temperature", [(-1.0, 298.0), (1.0, 0.0), (1.0, -5.0)])
def test_polarization_scale_invalid(field, temperature):
    """Testa B_p negativo e temperatura não positiva."""
    with pytest.raises(DomainError):
        polarization_scale(field, temperature)


def test_thermal_probe_properties(formic_acid):
    """Testa traço nulo, ε_j e fisicalidade do estado de prova."""
    probe = thermal_probe(formic_acid, "x", polarizing_field=1.3, temperature=298.0)
    scale = polarization_scale(1.3, 298.0)

    assert abs(np.trace(probe.deviation)) < 1e-20
    assert probe.epsilons == pytest.approx(tuple(scale * g for g in formic_acid.gammas))
    assert probe.guiding_axis.tolist() == [1.0, 0.0, 0.0]
    assert probe.is_physical()


def test_thermal_probe_normalizes_axis(formic_acid):
    """Testa que um eixo não unitário é normalizado."""
    probe = thermal_probe(formic_acid, [0.0, 3.0, 4.0])
    assert np.linalg.norm(probe.guiding_axis) == pytest.approx(1.0)
    assert probe.guiding_axis == pytest.approx([0.0, 0.6, 0.8])


def test_thermal_probe_zero_axis(formic_acid):
    """Testa eixo-guia nulo."""
    with pytest.raises(DomainError):
        thermal_probe(formic_acid, [0.0, 0.0, 0.0])


def test_zero_polarizing_field_gives_no_deviation(formic_acid):
    """Testa B_p = 0: estado maximamente misto."""
    probe = thermal_probe(formic_acid, "z", polarizing_field=0.0)
    assert np.allclose(probe.deviation, 0.0)


def test_probe_expectation(formic_acid):
    """Testa Tr[ρ₀·Ô_z] = −c·Σγ_j²·2ⁿ/4 com prova ao longo de z."""
    probe = thermal_probe(formic_acid, "z")
    Oz = collective_operator(formic_acid, formic_acid.gammas, "z")
    gamma_c, gamma_h = formic_acid.gammas
    expected = -probe.polarization_scale * (gamma_c ** 2 + gamma_h ** 2)
    assert probe_expectation(probe, Oz) == pytest.approx(expected, rel=1e-12)

    # prova x não tem componente ao longo de z
    probe_x = thermal_probe(formic_acid, "x")
    assert probe_expectation(probe_x, Oz) == pytest.approx(0.0, abs=1e-12 * abs(expected))


def test_magnetization_trace_matches_catalogue(formic_acid):
    """Testa a propagação explícita contra o sinal montado pelo catálogo."""
    field = FieldVector(1.0, 0.4, 1e-7)
    H = total_hamiltonian(formic_acid, field=field)
    probe = thermal_probe(formic_acid, "x")
    Oz = collective_operator(formic_acid, formic_acid.gammas, "z")

    lines = transition_catalogue(formic_acid, H, probe, Oz)
    series = time_signal(lines, None, duration=0.01, sample_rate=2000.0)
    trace = magnetization_trace(probe, H, Oz, series.times)

    # o catálogo guarda metade de cada par conjugado e omite os termos estáticos
    expected = 2.0 * (series.values - series.values[0])
    scale = np.max(np.abs(trace))
    assert np.allclose(trace - trace[0], expected, rtol=0.0, atol=1e-8 * scale)


def test_evolve_is_unitary(formic_acid, formaldehyde):
    """Testa ρ(0) = ρ₀, preservação de Tr[ρ²] e dimensão incompatível."""
    H = total_hamiltonian(formic_acid, field=FieldVector(0.9, 0.2, 1e-7))
    probe = thermal_probe(formic_acid, "x")

    assert np.allclose(evolve(probe, H, 0.0).deviation, probe.deviation)
    later = evolve(probe, H, 0.0123)
    purity = np.trace(probe.deviation @ probe.deviation).real
    assert np.trace(later.deviation @ later.deviation).real == pytest.approx(purity, rel=1e-10)
    assert later.polarization_scale == probe.polarization_scale

    with pytest.raises(DomainError):
        evolve(probe, total_hamiltonian(formaldehyde), 0.01)
