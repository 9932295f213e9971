"""
Modelo de amplitudes no referencial girante (H = H_Ω + H_int, sem campo).
"""
from src.estimation.base import AmplitudeModel
from src.hamiltonian import total_hamiltonian
from src.schema import Hamiltonian, RotationVector


class RotationAmplitudeModel(AmplitudeModel):
    """A_sim(θ, φ) para rotação de frequência Ω (Hz); o pseudo-campo é igual para todos os spins."""

    mode = "rotation"

    def frame_hamiltonian(self) -> Hamiltonian:
        return total_hamiltonian(self.system, rotation=RotationVector(0.0, 0.0, self.magnitude))

    def vector(self, theta: float, phi: float) -> RotationVector:
        return RotationVector(theta, phi, self.magnitude)
