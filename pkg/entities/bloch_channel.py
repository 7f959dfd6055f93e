"""
Bloch Channel Entity - Canal de um qubit na representação de Bloch
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Tuple

import numpy as np

from .exceptions import DomainError, NumericError


class Unitality(str, Enum):
    """Classificação do deslocamento d(λ) do canal"""

    UNITAL = "unital"
    NONUNITAL_PARAM_DEP_SHIFT = "nonunital_param_dep_shift"
    NONUNITAL_CONST_SHIFT = "nonunital_const_shift"


def _as_matrix(value) -> np.ndarray:
    matrix = np.asarray(value, dtype=float)
    if matrix.shape != (3, 3):
        raise DomainError(f"expected a 3x3 matrix, got shape {matrix.shape}")
    return matrix


def _as_vector(value) -> np.ndarray:
    vector = np.asarray(value, dtype=float).reshape(-1)
    if vector.shape != (3,):
        raise DomainError(f"expected a 3-vector, got shape {vector.shape}")
    return vector


@dataclass(frozen=True, eq=False)
class BlochChannel:
    """Entidade BlochChannel: r ↦ M·r + d num valor fixo de λ, com as derivadas"""

    M: np.ndarray
    d: np.ndarray
    dM: np.ndarray
    dd: np.ndarray

    def __post_init__(self):
        """Normaliza formatos e rejeita derivadas não finitas"""
        object.__setattr__(self, 'M', _as_matrix(self.M))
        object.__setattr__(self, 'd', _as_vector(self.d))
        object.__setattr__(self, 'dM', _as_matrix(self.dM))
        object.__setattr__(self, 'dd', _as_vector(self.dd))
        for name in ('M', 'd', 'dM', 'dd'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NumericError(f"channel field {name} has non-finite entries")

    def transfer_matrix(self) -> np.ndarray:
        """Matriz de transferência de Pauli 4x4 na ordem (I, X, Y, Z)"""
        transfer = np.zeros((4, 4))
        transfer[0, 0] = 1.0
        transfer[1:, 0] = self.d
        transfer[1:, 1:] = self.M
        return transfer

    def derivative_transfer_matrix(self) -> np.ndarray:
        """Derivada em λ da matriz de transferência"""
        transfer = np.zeros((4, 4))
        transfer[1:, 0] = self.dd
        transfer[1:, 1:] = self.dM
        return transfer

    def is_unital(self, tol: float) -> bool:
        return bool(np.linalg.norm(self.d) < tol and np.linalg.norm(self.dd) < tol)

    def to_dict(self) -> dict:
        """Converte a entidade para dicionário"""
        return {
            'M': self.M.tolist(),
            'd': self.d.tolist(),
            'dM': self.dM.tolist(),
            'dd': self.dd.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'BlochChannel':
        """Cria uma instância BlochChannel a partir de um dicionário"""
        return cls(
            M=data['M'],
            d=data.get('d', np.zeros(3)),
            dM=data.get('dM', np.zeros((3, 3))),
            dd=data.get('dd', np.zeros(3)),
        )


@dataclass(frozen=True)
class ChannelFamily:
    """Família λ ↦ BlochChannel com domínio fechado e classificação de unitalidade"""

    name: str
    evaluator: Callable[[float], BlochChannel] = field(repr=False)
    unitality: Unitality
    domain: Tuple[float, float]
    params: Dict[str, float] = field(default_factory=dict)
    analytic: bool = True

    def contains(self, lam: float) -> bool:
        lo, hi = self.domain
        return lo <= lam <= hi

    def eval(self, lam: float) -> BlochChannel:
        """Avalia o canal em λ, rejeitando valores fora do domínio"""
        if not self.contains(lam):
            raise DomainError(f"lambda={lam!r} outside domain {list(self.domain)} of channel '{self.name}'")
        return self.evaluator(float(lam))

    def describe(self) -> dict:
        return {
            'name': self.name,
            'params': dict(self.params),
            'unitality': self.unitality.value,
            'domain': list(self.domain),
        }


@dataclass(frozen=True)
class Violation:
    constraint: str
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    """Resultado da validação das restrições de Bloch"""

    d_norm: float
    m_max: float
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'd_norm': self.d_norm,
            'm_max': self.m_max,
            'violations': [{'constraint': v.constraint, 'magnitude': v.magnitude} for v in self.violations],
        }


@dataclass(frozen=True, eq=False)
class SvdDecomp:
    """Decomposição M = A·diag(S)·B com valores singulares em ordem decrescente"""

    A: np.ndarray
    S: np.ndarray
    B: np.ndarray

    @property
    def s1(self) -> float:
        return float(self.S[0])

    @property
    def s2(self) -> float:
        return float(self.S[1])

    @property
    def s3(self) -> float:
        return float(self.S[2])

    def right_vector(self, index: int) -> np.ndarray:
        """Bᵀ e_i, a direção de entrada associada a s_i"""
        return self.B[index].copy()

    def left_vector(self, index: int) -> np.ndarray:
        """A e_i, a direção de saída associada a s_i"""
        return self.A[:, index].copy()

    def reconstruct(self) -> np.ndarray:
        return self.A @ np.diag(self.S) @ self.B
