"""
Testes para o oráculo analítico: fórmulas Zeeman/rotação, rotulagem e regras de seleção.
"""
import numpy as np
import pytest

from src.analytic import (
    label_catalogue,
    label_eigenstates,
    manifold_multiplicity,
    rotation_lines,
    selection_rule_audit,
    splitting_from_span,
    two_spin_eigenstates,
    two_spin_theory,
    zeeman_lines,
)
from src.errors import DomainError
from src.eval.oracle_audit import (
    AUDIT_FLOOR_HZ,
    audit_star,
    audit_tolerance,
    match_manifold,
    run_audit,
)
from src.hamiltonian import total_hamiltonian
from src.probe import thermal_probe
from src.schema import FieldVector, RotationVector, SpinSystem
from src.spectrum import transition_catalogue
from src.spin_system import collective_operator


def _detector(system):
    return collective_operator(system, system.gammas, "z")


def test_zeeman_lines_zero_field():
    """Testa que com B = 0 todas as linhas do CH caem em J."""
    report = zeeman_lines(1, 0, 222.2, 0.0)
    assert report.center == pytest.approx(222.2)
    assert report.frequencies() == pytest.approx([222.2, 222.2, 222.2])
    assert report.delta_sq == 0.0
    assert len(report.zero_quantum) == 1
    assert len(report.single_quantum) == 2


def test_zeeman_lines_ch_splitting():
    """Testa Δ_SQ = (γ_H + γ_C)·B para n = 1."""
    B = 1.0788e-7
    report = zeeman_lines(1, 0, 222.2, B, gamma_h=42.5775e6, gamma_c=10.7077e6)
    sq = [nu for nu, _ in report.single_quantum]
    assert sq[1] - sq[0] == pytest.approx((42.5775e6 + 10.7077e6) * B)
    assert report.delta_sq == pytest.approx(5.7486, abs=1e-3)
    assert report.delta_zq == 0.0


def test_zeeman_lines_ch2_grid():
    """Testa as linhas do ¹³CH₂ (k = 0): ZQ em 1.5J ± (γ_H−γ_C)B/3."""
    gamma_h, gamma_c, J, B = 42.5775e6, 10.7077e6, 163.9, 5e-8
    report = zeeman_lines(2, 0, J, B, gamma_h=gamma_h, gamma_c=gamma_c)

    zq = [nu for nu, _ in report.zero_quantum]
    assert zq == pytest.approx([1.5 * J - (gamma_h - gamma_c) * B / 3,
                                1.5 * J + (gamma_h - gamma_c) * B / 3])
    sq = sorted(nu for nu, _ in report.single_quantum)
    assert sq[-1] - sq[0] == pytest.approx(2 * gamma_h * B)
    assert report.delta_zq == pytest.approx(2 * (gamma_h - gamma_c) * B / 3)
    assert report.delta_sq == pytest.approx(2 * (gamma_h + 2 * gamma_c) * B / 3)


@pytest.mark.parametrize("n,k,n_zq,n_sq", [(1, 0, 1, 2), (2, 0, 2, 4), (3, 0, 3, 6), (3, 1, 1, 2)])
def test_zeeman_lines_counts_per_manifold(n, k, n_zq, n_sq):
    """Testa o número de linhas ZQ e SQ de cada manifold em campo fraco."""
    report = zeeman_lines(n, k, 150.0, 5e-8, gamma_h=42.5775e6, gamma_c=10.7077e6)
    assert len(report.zero_quantum) == n_zq
    assert len(report.single_quantum) == n_sq


@pytest.mark.parametrize("ratio", [1e5, 1e6, 1e8])
def test_two_spin_strong_coupling_limit(ratio):
    """Testa p → |γ₁−γ₂|/2 quando J/(γB) ≥ 10⁵."""
    gamma_1, gamma_2, J = 10.7077e6, 42.5775e6, 222.2
    B = J / (gamma_2 * ratio)
    mixing = two_spin_theory(gamma_1, gamma_2, J, B)

    assert mixing.zq_probability == pytest.approx(0.5 * abs(gamma_1 - gamma_2), rel=1e-6)
    assert mixing.xi == pytest.approx(np.pi / 4, abs=1e-4)


def test_zeeman_lines_empty_manifold():
    """Testa o manifold k = 1 do CH₂ (n − 2k = 0): sem linhas."""
    report = zeeman_lines(2, 1, 163.9, 1e-7)
    assert report.frequencies() == []
    assert report.multiplicity == 1


@pytest.mark.parametrize("n,k,expected", [(1, 0, 1), (2, 0, 1), (2, 1, 1), (3, 0, 1), (3, 1, 2)])
def test_manifold_multiplicity(n, k, expected):
    """Testa o número de cópias de cada manifold de prótons."""
    assert manifold_multiplicity(n, k) == expected


@pytest.mark.parametrize("n,k", [(1, 1), (3, 2), (0, 0), (2, -1)])
def test_invalid_manifold(n, k):
    """Testa k fora de 0..n/2 e n < 1."""
    with pytest.raises(DomainError):
        zeeman_lines(n, k, 100.0, 0.0)


@pytest.mark.parametrize("n", [2, 3])
def test_splitting_from_span_consistency(n):
    """Testa a conversão largura total → Δ_SQ contra as linhas analíticas."""
    report = zeeman_lines(n, 0, 140.0, 6e-8)
    sq = [nu for nu, _ in report.single_quantum]
    span = max(sq) - min(sq)
    assert splitting_from_span(span, n, 0) == pytest.approx(report.delta_sq, rel=1e-12)


def test_splitting_from_span_identity():
    """Testa que para n = 1 e rotação a largura já é Δ."""
    assert splitting_from_span(5.0, 1, 0) == 5.0
    assert splitting_from_span(5.0, 3, 0, mode="rotation") == 5.0


def test_rotation_lines_exact(formic_acid):
    """Testa ZQ em J e SQ em J ± Ω contra o catálogo numérico."""
    Omega = 5.0
    report = rotation_lines(1, 0, 222.2, Omega)
    assert sorted(report.frequencies()) == pytest.approx([222.2 - Omega, 222.2, 222.2 + Omega])
    assert report.delta_sq == pytest.approx(2 * Omega)

    H = total_hamiltonian(formic_acid, rotation=RotationVector(0.7, 0.3, Omega))
    probe = thermal_probe(formic_acid, [1.0, 1.0, 1.0])
    lines = transition_catalogue(formic_acid, H, probe, _detector(formic_acid))
    band = sorted(line.frequency for line in lines if line.frequency > 111.1)
    assert band == pytest.approx([222.2 - Omega, 222.2, 222.2 + Omega], abs=1e-9)


def test_two_spin_theory_limits():
    """Testa ξ = π/4 em campo zero e ξ = 0 sem acoplamento."""
    gamma_1, gamma_2 = 10.7077e6, 42.5775e6
    zero_field = two_spin_theory(gamma_1, gamma_2, 222.2, 0.0)
    assert zero_field.xi == pytest.approx(np.pi / 4)
    assert zero_field.zq_probability == pytest.approx(0.5 * abs(gamma_1 - gamma_2))

    uncoupled = two_spin_theory(gamma_1, gamma_2, 0.0, 1e-7)
    assert uncoupled.xi == 0.0
    assert uncoupled.zq_probability == pytest.approx(0.0)

    with pytest.raises(DomainError):
        two_spin_theory(gamma_1, gamma_2, 0.0, 0.0)


def test_two_spin_eigenstates_orthonormal():
    """Testa a ortonormalidade dos autoestados de dois spins."""
    psi = two_spin_eigenstates(0.3)
    assert np.allclose(psi.T @ psi, np.eye(4))


def test_label_catalogue_parallel_probe(formic_acid):
    """Testa o rótulo |0,0⟩ → |1,0⟩ da linha ZQ com prova ∥ B."""
    field = FieldVector(0.0, 0.0, 1e-7)
    H = total_hamiltonian(formic_acid, field=field)
    probe = thermal_probe(formic_acid, "z")
    lines = label_catalogue(formic_acid, H, probe, _detector(formic_acid),
                            field_direction=field.cartesian())

    band = [line for line in lines if line.frequency > 111.1]
    assert len(band) == 1
    labels = band[0].labels
    assert (labels.f, labels.m_f, labels.f_prime, labels.m_f_prime) == (0.0, 0.0, 1.0, 0.0)
    assert labels.kind == "zero_quantum"
    assert selection_rule_audit(lines, probe.guiding_axis, field.cartesian()) == []


def test_label_catalogue_perpendicular_probe(acetonitrile):
    """Testa as regras de seleção com prova ⊥ B no ¹³CH₃."""
    # campo ao longo de x: prova y e detecção z ficam ambas ⊥ B
    field = FieldVector(np.pi / 2, 0.0, 5e-8)
    H = total_hamiltonian(acetonitrile, field=field)
    probe = thermal_probe(acetonitrile, "y")
    lines = label_catalogue(acetonitrile, H, probe, _detector(acetonitrile),
                            field_direction=field.cartesian())

    assert lines
    assert all(line.labels is not None for line in lines)
    assert selection_rule_audit(lines, probe.guiding_axis, field.cartesian()) == []


def test_label_eigenstates_requires_star():
    """Testa rotulagem em rede que não é estrela."""
    system = SpinSystem(gammas=(1.0, 2.0), couplings=np.array([[0, 5.0], [5.0, 0]]),
                        coherence_time=1.0)
    with pytest.raises(DomainError):
        label_eigenstates(system, np.eye(4), (0.0, 0.0, 1.0))


def test_oracle_audit_single_star():
    """Testa que as fórmulas fechadas concordam com o catálogo (¹³CH₂, B = 5e-8 T)."""
    table = audit_star(2, 163.9, 5e-8)
    assert len(table) > 0
    assert table["within_tol"].all()
    assert set(table["source"]) == {"analytic", "numeric"}
    # k = 0 do CH₂: 2 ZQ + 4 SQ dos dois lados
    assert (table["n_analytic"] == 6).all()
    assert (table["n_numeric"] == 6).all()


@pytest.mark.slow
def test_oracle_audit_full():
    """Testa a auditoria completa (n = 1..3, três campos)."""
    table = run_audit()
    assert table["within_tol"].all(), table[~table["within_tol"]].to_string()


def test_audit_tolerance_second_order_bound():
    """Testa a tolerância (γ_h·B)²/J mais o piso numérico."""
    assert audit_tolerance(222.2, 1e-7, 42.5775e6) == pytest.approx(
        (42.5775e6 * 1e-7) ** 2 / 222.2 + AUDIT_FLOOR_HZ
    )
    assert audit_tolerance(222.2, 0.0, 42.5775e6) == pytest.approx(AUDIT_FLOOR_HZ)


@pytest.mark.parametrize("analytic,numeric,ok", [
    ([100.0, 101.0], [100.0, 101.0], True),
    ([222.2, 222.2, 222.2], [222.2], True),
    ([100.0, 101.0], [100.0, 101.0, 102.0], False),
    ([100.0, 101.0, 102.0], [100.0, 101.0], False),
    ([100.0, 101.0], [100.0, 101.5], False),
    ([], [100.0], False),
])
def test_match_manifold_both_directions(analytic, numeric, ok):
    """Testa linhas sobrando ou faltando em qualquer lado e desvio acima da tolerância."""
    table = match_manifold(analytic, numeric, 0.01)
    assert table["within_tol"].all() == ok
    assert len(table) == len(analytic) + len(numeric)


@pytest.mark.parametrize("n,J", [(1, 222.2), (3, 136.25)])
def test_oracle_audit_zero_field(n, J):
    """Testa B = 0: uma linha por manifold no centro ½J(1+n−2k)."""
    table = audit_star(n, J, 0.0)
    assert table["within_tol"].all(), table[~table["within_tol"]].to_string()
    assert (table["n_numeric"] == 1).all()
