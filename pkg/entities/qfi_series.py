"""
QFI Series Entities - Séries da QFI e da SLD em potências da pureza
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .exceptions import NumericError
from .pauli_state import DenseOperator


@dataclass(frozen=True, eq=False)
class QfiSeries:
    """Coeficientes H^(0..K) de H = Σ r^j H^(j)"""

    orders: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        orders = np.asarray(self.orders, dtype=float).reshape(-1)
        if not np.all(np.isfinite(orders)):
            raise NumericError(f"non-finite QFI series coefficients: {orders.tolist()}")
        object.__setattr__(self, 'orders', orders)

    @property
    def K(self) -> int:
        return self.orders.size - 1

    def order(self, j: int) -> float:
        return float(self.orders[j]) if j <= self.K else 0.0

    def estimate(self, r: float) -> float:
        """Soma truncada Σ_{j≤K} r^j H^(j)"""
        return float(np.polynomial.polynomial.polyval(r, self.orders))

    def to_dict(self) -> dict:
        return {'K': self.K, 'orders': self.orders.tolist(), 'meta': dict(self.meta)}


@dataclass(frozen=True)
class SldSeries:
    """Termos L^(0..K) da SLD"""

    orders: Tuple[DenseOperator, ...]

    @property
    def K(self) -> int:
        return len(self.orders) - 1


@dataclass(frozen=True, eq=False)
class FitResult:
    """Coeficientes ajustados de um polinômio em r"""

    coefficients: np.ndarray
    min_order: int
    condition: float
    residual: float

    def coefficient(self, j: int) -> float:
        index = j - self.min_order
        if 0 <= index < self.coefficients.size:
            return float(self.coefficients[index])
        return 0.0


@dataclass(frozen=True, eq=False)
class SqscOptimum:
    """Melhor protocolo SQSC de menor ordem"""

    h2_opt: float
    r0_opt: np.ndarray
    meas_dir: np.ndarray
    informative: bool = True


@dataclass(frozen=True)
class CorrBounds:
    lower: float
    upper: float


@dataclass(frozen=True)
class GainRatio:
    lo: float
    hi: float


@dataclass(frozen=True)
class HigherOrders:
    h3: float
    h4: float
    method: str


@dataclass(frozen=True, eq=False)
class DirectionSearch:
    """Resultado da busca de direções (c, r0) que maximizam H^(2) correlacionado"""

    c: np.ndarray
    r0: np.ndarray
    h2: float
    grid_max: float
    canonical: float
