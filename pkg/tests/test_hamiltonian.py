"""
Testes para o Hamiltoniano (Zeeman, acoplamento J e rotação).
"""
import numpy as np
import pytest

from src.eigen import degenerate_clusters, eigensystem
from src.frame import rotation_unitary
from src.hamiltonian import (
    coupling_hamiltonian,
    regime_ratio,
    rotation_hamiltonian,
    total_hamiltonian,
    zeeman_hamiltonian,
)
from src.schema import FieldVector, RotationVector, SpinSystem
from src.spin_system import total_spin_operators


def test_zero_field_ch_levels(formic_acid):
    """Testa singleto em −3J/4 e tripleto em J/4 com B = 0."""
    J = 222.2
    H = total_hamiltonian(formic_acid)
    assert np.sort(H.eigenvalues()) == pytest.approx([-0.75 * J, 0.25 * J, 0.25 * J, 0.25 * J],
                                                     abs=1e-9)


def test_zeeman_single_spin():
    """Testa os níveis ±γB/2 de um spin isolado."""
    system = SpinSystem(gammas=(2.0e7,), couplings=np.zeros((1, 1)), coherence_time=1.0)
    H = zeeman_hamiltonian(system, FieldVector(0.7, 1.1, 1e-6))
    assert np.sort(H.eigenvalues()) == pytest.approx([-10.0, 10.0], abs=1e-9)


def test_zeeman_sign_convention(formic_acid):
    """Testa H_spins = −Σγ·I·B: o estado |↑↑⟩ desce com B ao longo de +z."""
    H = zeeman_hamiltonian(formic_acid, FieldVector(0.0, 0.0, 1e-7))
    gamma_c, gamma_h = formic_acid.gammas
    assert H.matrix[0, 0].real == pytest.approx(-0.5 * (gamma_c + gamma_h) * 1e-7)


def test_hamiltonian_is_hermitian(acetonitrile):
    """Testa hermiticidade do Hamiltoniano total num campo oblíquo."""
    H = total_hamiltonian(acetonitrile, field=FieldVector(1.0, 2.0, 5e-8),
                          rotation=RotationVector(0.3, 0.4, 2.0))
    assert np.allclose(H.matrix, H.matrix.conj().T)
    assert H.dimension == 16


def test_rotation_commutes_with_coupling(acetonitrile):
    """Testa [H_Ω, H_int] = 0 (a rotação não mistura manifolds)."""
    H_rot = rotation_hamiltonian(acetonitrile, RotationVector(0.9, 0.2, 3.0)).matrix
    H_int = coupling_hamiltonian(acetonitrile).matrix
    assert np.allclose(H_rot @ H_int - H_int @ H_rot, 0.0, atol=1e-9)


def test_rotation_equals_unit_gamma_field():
    """Testa que H_Ω equivale a um campo Ω/γ com γ = 1 para todos os spins."""
    couplings = np.array([[0.0, 100.0], [100.0, 0.0]])
    system = SpinSystem(gammas=(1.0, 1.0), couplings=couplings, coherence_time=1.0)
    via_field = total_hamiltonian(system, field=FieldVector(0.8, 2.5, 4.0))
    via_rotation = total_hamiltonian(system, rotation=RotationVector(0.8, 2.5, 4.0))
    assert np.allclose(via_field.matrix, via_rotation.matrix)


def test_zero_magnitude_vectors_are_ignored(formic_acid):
    """Testa que campo e rotação nulos não alteram H_int."""
    H = total_hamiltonian(formic_acid, field=FieldVector(0.5, 0.5, 0.0),
                          rotation=RotationVector(0.5, 0.5, 0.0))
    assert np.allclose(H.matrix, coupling_hamiltonian(formic_acid).matrix)


def test_regime_ratio(formic_acid):
    """Testa |γ_max·B|/min|J|."""
    ratio = regime_ratio(formic_acid, FieldVector(1.0, 0.0, 1e-7))
    assert ratio == pytest.approx(formic_acid.gammas[1] * 1e-7 / 222.2)
    assert regime_ratio(formic_acid, None) == 0.0


def test_regime_ratio_uncoupled():
    """Testa razão infinita para spins sem acoplamento."""
    system = SpinSystem(gammas=(1.0, 2.0), couplings=np.zeros((2, 2)), coherence_time=1.0)
    assert regime_ratio(system, FieldVector(0.0, 0.0, 1.0)) == float("inf")


def test_degenerate_clusters():
    """Testa o agrupamento de autovalores próximos."""
    clusters = degenerate_clusters(np.array([-1.0, 0.5, 0.5 + 1e-9, 0.5 + 2e-9, 3.0]), 1e-7)
    assert [c.tolist() for c in clusters] == [[0], [1, 2, 3], [4]]


def test_eigensystem_refines_degenerate_triplet(formic_acid):
    """Testa que o tripleto degenerado sai com m_F definido quando refinado por F_z."""
    H = total_hamiltonian(formic_acid)
    Fz = total_spin_operators(formic_acid)[2]
    values, vectors = eigensystem(H.matrix, refine_with=Fz)

    assert values == pytest.approx([-0.75 * 222.2, 0.25 * 222.2, 0.25 * 222.2, 0.25 * 222.2])
    for col, m in zip((1, 2, 3), (-1.0, 0.0, 1.0)):
        v = vectors[:, col]
        assert np.allclose(Fz @ v, m * v, atol=1e-10)
    assert np.allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)


def test_eigensystem_fixes_phases(formic_acid):
    """Testa a primeira componente dominante real positiva em cada autovetor."""
    H = total_hamiltonian(formic_acid, field=FieldVector(0.7, 1.2, 1e-7))
    _, vectors = eigensystem(H.matrix)

    for col in range(vectors.shape[1]):
        mags = np.abs(vectors[:, col])
        pivot = int(np.argmax(mags >= (1.0 - 1e-8) * mags.max()))
        assert vectors[pivot, col].imag == pytest.approx(0.0, abs=1e-12)
        assert vectors[pivot, col].real > 0


@pytest.mark.parametrize("molecule", ["formic_acid", "acetonitrile"])
@pytest.mark.parametrize("theta,phi", [(0.4, 0.0), (1.289, 0.047), (2.6, 4.1)])
def test_hamiltonian_isotropic_under_common_rotation(request, molecule, theta, phi):
    """Testa U·H(B·ẑ)·U† = H(B·z′): girar campo e referencial juntos não muda o espectro."""
    system = request.getfixturevalue(molecule)
    B = 8e-8
    along_z = total_hamiltonian(system, field=FieldVector(0.0, 0.0, B))
    rotated = total_hamiltonian(system, field=FieldVector(theta, phi, B))
    U = rotation_unitary(system, theta, phi)

    assert np.allclose(U @ along_z.matrix @ U.conj().T, rotated.matrix, atol=1e-9)
    assert np.sort(rotated.eigenvalues()) == pytest.approx(np.sort(along_z.eigenvalues()),
                                                           abs=1e-9)
