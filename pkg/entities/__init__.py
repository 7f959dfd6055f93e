"""
Entities - Camada de entidades do domínio

Esta camada contém os objetos de valor do domínio: canais de Bloch,
estados na base de Pauli, resultados de Fisher, séries em pureza,
especificações de protocolo e a configuração de execução.
As entidades são imutáveis e não dependem das demais camadas.
"""

from .bloch_channel import (
    BlochChannel,
    ChannelFamily,
    SvdDecomp,
    Unitality,
    ValidationReport,
    Violation,
)
from .exceptions import (
    BranchError,
    ConfigError,
    DimensionError,
    DomainError,
    MetrologyError,
    NumericError,
)
from .fisher_result import ProbModel, SldResult
from .pauli_state import DenseOperator, OrderedState, PauliState
from .protocol import (
    BuiltState,
    EscherRow,
    GainReport,
    GainStatus,
    MeasurementRecord,
    NonUnitalCheck,
    ProtocolKind,
    ProtocolQfi,
    ProtocolSpec,
)
from .qfi_series import (
    CorrBounds,
    DirectionSearch,
    FitResult,
    GainRatio,
    HigherOrders,
    QfiSeries,
    SldSeries,
    SqscOptimum,
)
from .run_config import RunConfig

__all__ = [
    'BlochChannel', 'ChannelFamily', 'SvdDecomp', 'Unitality', 'ValidationReport', 'Violation',
    'MetrologyError', 'ConfigError', 'DomainError', 'BranchError', 'DimensionError', 'NumericError',
    'ProbModel', 'SldResult',
    'DenseOperator', 'OrderedState', 'PauliState',
    'EscherRow', 'GainReport', 'GainStatus', 'MeasurementRecord', 'NonUnitalCheck',
    'BuiltState', 'ProtocolKind', 'ProtocolQfi', 'ProtocolSpec',
    'CorrBounds', 'DirectionSearch', 'FitResult', 'GainRatio', 'HigherOrders',
    'QfiSeries', 'SldSeries', 'SqscOptimum',
    'RunConfig',
]
