"""
Modelo de amplitudes sob campo magnético estático (H = H_spins + H_int).
"""
from src.estimation.base import AmplitudeModel
from src.hamiltonian import total_hamiltonian
from src.schema import FieldVector, Hamiltonian


class FieldAmplitudeModel(AmplitudeModel):
    """A_sim(θ, φ) para um campo de magnitude B (tesla)."""

    mode = "field"

    def frame_hamiltonian(self) -> Hamiltonian:
        return total_hamiltonian(self.system, field=FieldVector(0.0, 0.0, self.magnitude))

    def vector(self, theta: float, phi: float) -> FieldVector:
        return FieldVector(theta, phi, self.magnitude)
