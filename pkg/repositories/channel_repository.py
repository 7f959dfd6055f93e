"""
Channel Repository - Famílias de canais embutidas, canais do usuário e conjuntos de Kraus
"""

from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np
import structlog

from entities.bloch_channel import BlochChannel, ChannelFamily, Unitality
from entities.exceptions import ConfigError, DomainError

from .expression_repository import ExpressionRepository

logger = structlog.get_logger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

GAD_EDGE = 1e-9
PAULI_AXES = {1: 'px', 2: 'py', 3: 'pz'}
DIAG_KEYS = ('m1', 'm2', 'm3')
SHIFT_KEYS = ('d1', 'd2', 'd3')


def _phase_shift(lam: float) -> BlochChannel:
    c, s = np.cos(lam), np.sin(lam)
    return BlochChannel(
        M=[[c, -s, 0], [s, c, 0], [0, 0, 1]],
        d=np.zeros(3),
        dM=[[-s, -c, 0], [c, -s, 0], [0, 0, 0]],
        dd=np.zeros(3),
    )


def _phase_flip(lam: float) -> BlochChannel:
    return BlochChannel(
        M=np.diag([1 - 2 * lam, 1 - 2 * lam, 1.0]),
        d=np.zeros(3),
        dM=np.diag([-2.0, -2.0, 0.0]),
        dd=np.zeros(3),
    )


def _depolarizing(lam: float) -> BlochChannel:
    return BlochChannel(M=lam * np.eye(3), d=np.zeros(3), dM=np.eye(3), dd=np.zeros(3))


def _gad(p: float) -> Callable[[float], BlochChannel]:
    def evaluate(lam: float) -> BlochChannel:
        root = np.sqrt(1 - lam)
        return BlochChannel(
            M=np.diag([root, root, 1 - lam]),
            d=[0.0, 0.0, lam * (2 * p - 1)],
            dM=np.diag([-0.5 / root, -0.5 / root, -1.0]),
            dd=[0.0, 0.0, 2 * p - 1],
        )
    return evaluate


def _pauli_probabilities(params: Mapping[str, float], lam: float) -> Dict[str, float]:
    axis = PAULI_AXES[int(params.get('vary', 3))]
    probs = {key: float(params.get(key, 0.0)) for key in ('px', 'py', 'pz')}
    probs[axis] = lam
    return probs


def _pauli(params: Mapping[str, float]) -> Callable[[float], BlochChannel]:
    vary = int(params.get('vary', 3))

    def evaluate(lam: float) -> BlochChannel:
        probs = _pauli_probabilities(params, lam)
        px, py, pz = probs['px'], probs['py'], probs['pz']
        slope = np.array([-2.0, -2.0, -2.0])
        slope[vary - 1] = 0.0
        return BlochChannel(
            M=np.diag([1 - 2 * (py + pz), 1 - 2 * (px + pz), 1 - 2 * (px + py)]),
            d=np.zeros(3),
            dM=np.diag(slope),
            dd=np.zeros(3),
        )
    return evaluate


class ChannelRepository:
    """Fonte das famílias de canais usadas pelos casos de uso"""

    BUILTINS = ("phase_shift", "phase_flip", "depolarizing", "gad", "pauli", "custom_diag")

    def __init__(self, expression_repository: Optional[ExpressionRepository] = None):
        self.expression_repository = expression_repository or ExpressionRepository()

    def names(self) -> Tuple[str, ...]:
        return self.BUILTINS

    def builtin(
        self,
        name: str,
        params: Optional[Mapping[str, float]] = None,
        expressions: Optional[Mapping[str, str]] = None,
        domain: Optional[Tuple[float, float]] = None,
    ) -> ChannelFamily:
        """Retorna a família embutida `name` com os parâmetros dados"""
        params = dict(params or {})
        if name == "phase_shift":
            return ChannelFamily(name, _phase_shift, Unitality.UNITAL, domain or (-np.pi, np.pi))
        if name == "phase_flip":
            return ChannelFamily(name, _phase_flip, Unitality.UNITAL, domain or (0.0, 1.0))
        if name == "depolarizing":
            return ChannelFamily(name, _depolarizing, Unitality.UNITAL, domain or (0.0, 1.0))
        if name == "gad":
            return self._gad_family(params, domain)
        if name == "pauli":
            return self._pauli_family(params, domain)
        if name == "custom_diag":
            return self.custom_diag(expressions or {}, domain or (0.0, 1.0))
        raise ConfigError(f"unknown channel '{name}'; builtins are {', '.join(self.BUILTINS)}")

    def _gad_family(self, params: Dict[str, float], domain) -> ChannelFamily:
        p = float(params.get('p', 1.0))
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"gad parameter p={p!r} outside [0, 1]")
        unitality = Unitality.UNITAL if abs(2 * p - 1) < 1e-15 else Unitality.NONUNITAL_PARAM_DEP_SHIFT
        return ChannelFamily("gad", _gad(p), unitality, domain or (0.0, 1.0 - GAD_EDGE), params={'p': p})

    def _pauli_family(self, params: Dict[str, float], domain) -> ChannelFamily:
        vary = int(params.get('vary', 3))
        if vary not in PAULI_AXES:
            raise ConfigError(f"pauli parameter vary={vary!r} must be 1 (x), 2 (y) or 3 (z)")
        fixed = sum(float(params.get(key, 0.0)) for axis, key in PAULI_AXES.items() if axis != vary)
        if any(float(params.get(key, 0.0)) < 0 for key in PAULI_AXES.values()) or fixed > 1:
            raise ConfigError(f"pauli probabilities {params} are not a valid distribution")
        params = {**params, 'vary': float(vary)}
        return ChannelFamily("pauli", _pauli(params), Unitality.UNITAL, domain or (0.0, 1.0 - fixed), params=params)

    def custom_diag(self, expressions, domain: Tuple[float, float] = (0.0, 1.0)) -> ChannelFamily:
        """Família M = diag(m1(λ), m2(λ), m3(λ)), d = (d1(λ), d2(λ), d3(λ)) dada por expressões

        d1..d3 são opcionais (padrão 0, canal unital). A classe de unitalidade
        vem das expressões simbólicas. Só as restrições de Bloch são
        verificadas; a positividade completa fica por conta de quem define o canal.
        """
        if isinstance(expressions, Mapping):
            unknown = set(expressions) - set(DIAG_KEYS) - set(SHIFT_KEYS)
            if unknown:
                raise ConfigError(f"custom_diag accepts m1..m3 and d1..d3, got {sorted(unknown)}")
            try:
                texts = [expressions[key] for key in DIAG_KEYS]
            except KeyError as e:
                raise ConfigError(f"custom_diag needs expressions m1, m2 and m3; missing {e}") from e
            shift_texts = [expressions.get(key, '0') for key in SHIFT_KEYS]
        else:
            texts = list(expressions)
            shift_texts = ['0', '0', '0']
        if len(texts) != 3:
            raise ConfigError(f"custom_diag needs three expressions, got {len(texts)}")
        compiled = [self.expression_repository.compile(str(text)) for text in texts]
        shifts = [self.expression_repository.compile(str(text)) for text in shift_texts]

        def evaluate(lam: float) -> BlochChannel:
            return BlochChannel(
                M=np.diag([e.value(lam) for e in compiled]),
                d=np.array([e.value(lam) for e in shifts]),
                dM=np.diag([e.slope(lam) for e in compiled]),
                dd=np.array([e.slope(lam) for e in shifts]),
            )

        if all(e.expr.is_zero for e in shifts):
            unitality = Unitality.UNITAL
        elif all(e.derivative.is_zero for e in shifts):
            unitality = Unitality.NONUNITAL_CONST_SHIFT
        else:
            unitality = Unitality.NONUNITAL_PARAM_DEP_SHIFT
        logger.info(
            "Canal diagonal do usuário criado",
            expressions=texts, shift=shift_texts, unitality=unitality.value, domain=list(domain),
        )
        return ChannelFamily("custom_diag", evaluate, unitality, tuple(domain), params={})

    def rotated(self, family: ChannelFamily, left: np.ndarray, right: np.ndarray) -> ChannelFamily:
        """Família λ ↦ (A·M·B, A·d) para A, B ortogonais fixos"""
        left = np.asarray(left, dtype=float)
        right = np.asarray(right, dtype=float)
        for matrix in (left, right):
            if not np.allclose(matrix @ matrix.T, np.eye(3), atol=1e-12):
                raise DomainError("rotation matrices must be orthogonal")

        def evaluate(lam: float) -> BlochChannel:
            base = family.eval(lam)
            return BlochChannel(
                M=left @ base.M @ right,
                d=left @ base.d,
                dM=left @ base.dM @ right,
                dd=left @ base.dd,
            )

        return ChannelFamily(
            f"rotated_{family.name}", evaluate, family.unitality, family.domain,
            params=dict(family.params), analytic=family.analytic,
        )

    def kraus(self, name: str, lam: float, params: Optional[Mapping[str, float]] = None) -> List[np.ndarray]:
        """Operadores de Kraus de um canal embutido, com ρ ↦ Σ E ρ E†"""
        params = dict(params or {})
        if name == "phase_shift":
            return [np.diag([np.exp(-0.5j * lam), np.exp(0.5j * lam)])]
        if name == "phase_flip":
            return [np.sqrt(1 - lam) * IDENTITY, np.sqrt(lam) * SIGMA_Z]
        if name == "depolarizing":
            weight = np.sqrt((1 - lam) / 4)
            return [np.sqrt((1 + 3 * lam) / 4) * IDENTITY, weight * SIGMA_X, weight * SIGMA_Y, weight * SIGMA_Z]
        if name == "gad":
            p = float(params.get('p', 1.0))
            return [
                np.sqrt(p) * np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex),
                np.sqrt(p) * np.array([[0, np.sqrt(lam)], [0, 0]], dtype=complex),
                np.sqrt(1 - p) * np.array([[np.sqrt(1 - lam), 0], [0, 1]], dtype=complex),
                np.sqrt(1 - p) * np.array([[0, 0], [np.sqrt(lam), 0]], dtype=complex),
            ]
        if name == "pauli":
            probs = _pauli_probabilities(params, lam)
            identity_weight = 1 - sum(probs.values())
            return [
                np.sqrt(identity_weight) * IDENTITY,
                np.sqrt(probs['px']) * SIGMA_X,
                np.sqrt(probs['py']) * SIGMA_Y,
                np.sqrt(probs['pz']) * SIGMA_Z,
            ]
        raise ConfigError(f"no Kraus representation stored for channel '{name}'")
