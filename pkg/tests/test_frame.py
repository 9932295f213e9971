"""
Testes para o referencial do campo, os elementos de matriz primados e a
fórmula fatorada de amplitude.
"""
import numpy as np
import pytest

from src.frame import (
    align_phase,
    amplitude_formula,
    ch_reference_elements,
    direction_angles,
    frame_basis,
    frame_matrices,
    primed_matrix_elements,
    rotation_unitary,
)
from src.hamiltonian import total_hamiltonian
from src.probe import thermal_probe
from src.schema import FieldVector
from src.spectrum import transition_catalogue
from src.spin_system import collective_operator, total_spin_operators


@pytest.mark.parametrize("theta,phi", [(0.3, 0.2), (1.289, 0.047), (2.5, 4.0)])
def test_frame_basis_orthonormal(theta, phi):
    """Testa que (x′, y′, z′) é ortonormal e destro."""
    basis = frame_basis(theta, phi)
    P = basis.P

    assert np.allclose(P.T @ P, np.eye(3))
    assert np.allclose(np.cross(basis.x, basis.y), basis.z)
    assert np.linalg.det(P) == pytest.approx(1.0)


def test_frame_basis_pole_ignores_phi():
    """Testa que nos polos φ é tomado como zero."""
    assert np.allclose(frame_basis(0.0, 1.3).P, frame_basis(0.0, 0.0).P)
    assert np.allclose(frame_basis(np.pi, 2.0).P, frame_basis(np.pi, 0.0).P)


def test_frame_matrices_vectorized():
    """Testa a versão vetorizada contra frame_basis."""
    theta = np.array([[0.1, 1.0], [2.0, 0.0]])
    phi = np.array([[0.5, 3.0], [5.5, 1.0]])
    P = frame_matrices(theta, phi)

    assert P.shape == (2, 2, 3, 3)
    for idx in np.ndindex(theta.shape):
        assert np.allclose(P[idx], frame_basis(theta[idx], phi[idx]).P)


def test_direction_angles():
    """Testa (θ, φ) de vetores não normalizados."""
    assert direction_angles([0.0, 0.0, 2.0]) == pytest.approx((0.0, 0.0))
    assert direction_angles([0.0, 5.0, 0.0]) == pytest.approx((np.pi / 2, np.pi / 2))


def test_rotation_unitary_maps_axes(formic_acid):
    """Testa U·F_l·U† = Σ_m P_ml·F_m."""
    theta, phi = 1.1, 0.7
    U = rotation_unitary(formic_acid, theta, phi)
    F = total_spin_operators(formic_acid)
    P = frame_basis(theta, phi).P

    assert np.allclose(U @ U.conj().T, np.eye(formic_acid.dimension))
    for l in range(3):
        expected = sum(P[m, l] * F[m] for m in range(3))
        assert np.allclose(U @ F[l] @ U.conj().T, expected, atol=1e-12)


def test_primed_elements_orientation_invariant(formic_acid):
    """Testa que os elementos primados não dependem da direção do campo."""
    B = 1e-7
    ref = primed_matrix_elements(
        formic_acid, total_hamiltonian(formic_acid, field=FieldVector(0.0, 0.0, B)), (0, 0, 1)
    )
    field = FieldVector(1.1, 2.3, B)
    other = primed_matrix_elements(
        formic_acid, total_hamiltonian(formic_acid, field=field), field.cartesian()
    )

    assert other.energies == pytest.approx(ref.energies, abs=1e-9)
    scale = np.max(np.abs(ref.elements))
    assert np.allclose(other.elements, ref.elements, atol=1e-9 * scale)


def test_ch_reference_elements(formic_acid):
    """Testa ⟨singleto|Ô′|tripleto m⟩ com uma única fase global calibrada em m = 0."""
    gamma_c, gamma_h = formic_acid.gammas
    table = primed_matrix_elements(formic_acid, total_hamiltonian(formic_acid), None)
    reference = ch_reference_elements(gamma_c, gamma_h)
    atol = 1e-9 * abs(gamma_c - gamma_h)

    # singleto no índice 0; tripleto ordenado por m = −1, 0, +1
    alpha = align_phase(table.element(0, 2), reference[0])
    assert abs(alpha) == pytest.approx(1.0)
    for m, ket in ((-1, 1), (0, 2), (1, 3)):
        assert np.allclose(alpha * table.element(0, ket), reference[m], atol=atol)


def test_ch_reference_relative_sign(formic_acid):
    """Testa que trocar o sinal de m = ±1 quebra a concordância com a fase de m = 0."""
    gamma_c, gamma_h = formic_acid.gammas
    table = primed_matrix_elements(formic_acid, total_hamiltonian(formic_acid), None)
    reference = ch_reference_elements(gamma_c, gamma_h)

    alpha = align_phase(table.element(0, 2), reference[0])
    flipped = -alpha * table.element(0, 3)
    assert not np.allclose(flipped, reference[1], atol=1e-9 * abs(gamma_c - gamma_h))


def test_amplitude_formula_matches_catalogue(formic_acid):
    """Testa ℜ = c·|k̂·P·v|·|ẑ·P·v| contra o catálogo numérico."""
    field = FieldVector(1.0, 0.4, 1e-7)
    H = total_hamiltonian(formic_acid, field=field)
    probe = thermal_probe(formic_acid, "x")
    lines = transition_catalogue(formic_acid, H, probe,
                                 collective_operator(formic_acid, formic_acid.gammas, "z"))
    table = primed_matrix_elements(formic_acid, H, field.cartesian())

    assert lines
    peak = max(line.magnitude for line in lines)
    for line in lines:
        predicted = amplitude_formula(field.theta, field.phi, "x",
                                      table.element(line.bra_index, line.ket_index),
                                      probe.polarization_scale)
        assert predicted == pytest.approx(line.magnitude, rel=1e-8, abs=1e-9 * peak)


@pytest.mark.slow
@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_amplitude_formula_grid(formic_acid, axis):
    """Testa a fórmula fatorada numa grade 10×10 de orientações do campo."""
    observable = collective_operator(formic_acid, formic_acid.gammas, "z")
    probe = thermal_probe(formic_acid, axis)
    for theta in np.linspace(0.05, np.pi - 0.05, 10):
        for phi in np.linspace(0.0, 2 * np.pi, 10, endpoint=False):
            field = FieldVector(theta, phi, 1e-7)
            H = total_hamiltonian(formic_acid, field=field)
            lines = transition_catalogue(formic_acid, H, probe, observable)
            table = primed_matrix_elements(formic_acid, H, field.cartesian())
            if not lines:
                continue
            peak = max(line.magnitude for line in lines)
            for line in lines:
                predicted = amplitude_formula(theta, phi, axis,
                                              table.element(line.bra_index, line.ket_index),
                                              probe.polarization_scale)
                assert predicted == pytest.approx(line.magnitude, rel=1e-8, abs=1e-9 * peak), \
                    (theta, phi, line.frequency)
