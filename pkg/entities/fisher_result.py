"""
Fisher Result Entities - SLD exata e modelos de probabilidade
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import NumericError
from .pauli_state import DenseOperator


@dataclass(frozen=True, eq=False)
class SldResult:
    """Derivada logarítmica simétrica e a QFI obtidas da autodecomposição de ρ"""

    L: DenseOperator
    qfi: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    dropped_pairs: int

    def to_dict(self) -> dict:
        return {
            'qfi': self.qfi,
            'eigenvalues': self.eigenvalues.tolist(),
            'dropped_pairs': self.dropped_pairs,
        }


@dataclass(frozen=True, eq=False)
class ProbModel:
    """Distribuição de resultados p_x(λ) com as derivadas ∂p_x/∂λ"""

    probabilities: np.ndarray
    derivatives: np.ndarray

    SUM_TOL = 1e-10
    DERIVATIVE_SUM_TOL = 1e-8
    NEGATIVE_TOL = 1e-12

    def __post_init__(self):
        """Verifica normalização, soma das derivadas e positividade"""
        probabilities = np.asarray(self.probabilities, dtype=float).reshape(-1)
        derivatives = np.asarray(self.derivatives, dtype=float).reshape(-1)
        if probabilities.shape != derivatives.shape:
            raise NumericError("probabilities and derivatives must have the same length")
        total = probabilities.sum()
        if abs(total - 1.0) > self.SUM_TOL:
            raise NumericError(f"probabilities sum to {total!r}, expected 1")
        if abs(derivatives.sum()) > self.DERIVATIVE_SUM_TOL:
            raise NumericError(f"probability derivatives sum to {derivatives.sum()!r}, expected 0")
        if probabilities.min(initial=0.0) < -self.NEGATIVE_TOL:
            raise NumericError(f"negative probability {probabilities.min()!r}")
        object.__setattr__(self, 'probabilities', probabilities)
        object.__setattr__(self, 'derivatives', derivatives)

    @classmethod
    def from_outcomes(cls, outcomes: Sequence[tuple]) -> 'ProbModel':
        """Cria o modelo a partir de pares (p_x, ∂p_x/∂λ)"""
        probabilities, derivatives = zip(*outcomes) if outcomes else ((), ())
        return cls(np.array(probabilities), np.array(derivatives))

    def outcomes(self) -> list:
        return list(zip(self.probabilities.tolist(), self.derivatives.tolist()))
