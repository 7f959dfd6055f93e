"""
Protocol Entities - Especificação dos protocolos e registros de resultado
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional

import numpy as np

from .bloch_channel import ChannelFamily
from .exceptions import DomainError
from .pauli_state import DenseOperator, OrderedState, PauliState
from .qfi_series import QfiSeries

UNIT_TOL = 1e-9


class ProtocolKind(str, Enum):
    SQSC = "sqsc"
    CORRELATED = "correlated"


def unit_vector(value, name: str, tol: float = UNIT_TOL) -> np.ndarray:
    """Converte para 3-vetor e exige norma 1"""
    vector = np.asarray(value, dtype=float).reshape(-1)
    if vector.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {vector.shape}")
    norm = np.linalg.norm(vector)
    if abs(norm - 1.0) > tol:
        raise DomainError(f"{name} must be a unit vector, |{name}| = {norm!r}")
    return vector


@dataclass(frozen=True, eq=False)
class ProtocolSpec:
    """Tudo o que é preciso para montar o estado antes da medição"""

    kind: ProtocolKind
    family: ChannelFamily
    lam: float
    r: float
    r0: np.ndarray
    c: Optional[np.ndarray] = None
    n: int = 1

    def __post_init__(self):
        """Valida as invariantes do protocolo"""
        object.__setattr__(self, 'kind', ProtocolKind(self.kind))
        if not 0.0 <= self.r <= 1.0:
            raise DomainError(f"purity r={self.r!r} outside [0, 1]")
        object.__setattr__(self, 'r0', unit_vector(self.r0, 'r0'))
        if self.kind is ProtocolKind.SQSC:
            if self.n != 1:
                raise DomainError(f"SQSC protocol uses one qubit, got n={self.n}")
        else:
            if self.n < 2:
                raise DomainError(f"correlated protocol needs n >= 2, got n={self.n}")
            if self.c is None:
                raise DomainError("correlated protocol needs a control direction c")
            object.__setattr__(self, 'c', unit_vector(self.c, 'c'))

    @classmethod
    def sqsc(cls, family: ChannelFamily, lam: float, r: float, r0) -> 'ProtocolSpec':
        return cls(ProtocolKind.SQSC, family, lam, r, r0)

    @classmethod
    def correlated(cls, family: ChannelFamily, lam: float, r: float, n: int, c, r0) -> 'ProtocolSpec':
        return cls(ProtocolKind.CORRELATED, family, lam, r, r0, c=c, n=n)

    @property
    def is_correlated(self) -> bool:
        return self.kind is ProtocolKind.CORRELATED

    def with_purity(self, r: float) -> 'ProtocolSpec':
        return replace(self, r=r)

    def describe(self) -> dict:
        return {
            'kind': self.kind.value,
            'channel': self.family.name,
            'lam': self.lam,
            'r': self.r,
            'n': self.n,
            'r0': self.r0.tolist(),
            'c': None if self.c is None else self.c.tolist(),
        }


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Probabilidades agrupadas p(±, k) e a CFI da medição local"""

    n: int
    p_plus: np.ndarray
    p_minus: np.ndarray
    dp_plus: np.ndarray
    dp_minus: np.ndarray
    cfi: float
    ungrouped_cfi: Optional[float] = None

    def total_probability(self) -> float:
        return float(self.p_plus.sum() + self.p_minus.sum())

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'p_plus': self.p_plus.tolist(),
            'p_minus': self.p_minus.tolist(),
            'dp_plus': self.dp_plus.tolist(),
            'dp_minus': self.dp_minus.tolist(),
            'cfi': self.cfi,
            'ungrouped_cfi': self.ungrouped_cfi,
        }


class GainStatus(str, Enum):
    OK = "ok"
    VIOLATION = "violation"
    UNDEFINED = "undefined_gain"


@dataclass(frozen=True)
class GainReport:
    """Razão das QFIs por invocação entre dois protocolos"""

    status: GainStatus
    exact_a: float
    exact_b: float
    series_a: float
    series_b: float
    ratio_exact: Optional[float] = None
    ratio_series: Optional[float] = None
    bound_lo: Optional[float] = None
    bound_hi: Optional[float] = None
    violations: List[str] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            'status': self.status.value,
            'exact_a': self.exact_a,
            'exact_b': self.exact_b,
            'series_a': self.series_a,
            'series_b': self.series_b,
            'ratio_exact': self.ratio_exact,
            'ratio_series': self.ratio_series,
            'bound_lo': self.bound_lo,
            'bound_hi': self.bound_hi,
            'violations': list(self.violations),
            'note': self.note,
        }


@dataclass(frozen=True)
class EscherRow:
    lam: float
    r: float
    escher_bound: float
    exact_qfi: float

    @property
    def slack(self) -> float:
        return self.escher_bound - self.exact_qfi

    def to_dict(self) -> dict:
        return {
            'lam': self.lam,
            'r': self.r,
            'escher_bound': self.escher_bound,
            'exact_qfi': self.exact_qfi,
            'slack': self.slack,
        }


@dataclass(frozen=True)
class NonUnitalCheck:
    """Comparação da QFI em r = 0 entre o protocolo correlacionado e o SQSC"""

    n: int
    lam: float
    correlated_qfi: float
    sqsc_qfi: float
    closed_form_h0: float
    tol: float

    @property
    def difference(self) -> float:
        return abs(self.correlated_qfi - self.sqsc_qfi)

    @property
    def equal(self) -> bool:
        return self.difference <= self.tol

    @property
    def closed_form_agrees(self) -> bool:
        return abs(self.closed_form_h0 - self.sqsc_qfi) <= self.tol * max(1.0, abs(self.sqsc_qfi))

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'lam': self.lam,
            'correlated_qfi': self.correlated_qfi,
            'sqsc_qfi': self.sqsc_qfi,
            'closed_form_h0': self.closed_form_h0,
            'difference': self.difference,
            'equal': self.equal,
            'closed_form_agrees': self.closed_form_agrees,
        }


@dataclass(frozen=True, eq=False)
class BuiltState:
    """Estado antes da medição: forma densa em r fixo e forma ordenada em r"""

    spec: ProtocolSpec
    pauli: PauliState
    dpauli: PauliState
    rho: DenseOperator
    drho: DenseOperator
    ordered: OrderedState


@dataclass(frozen=True, eq=False)
class ProtocolQfi:
    """QFI por invocação do canal: exata e estimada pela série"""

    exact: float
    series_estimate: float
    series: QfiSeries

    def to_dict(self) -> dict:
        return {'exact': self.exact, 'series_estimate': self.series_estimate, 'orders': self.series.orders.tolist()}
