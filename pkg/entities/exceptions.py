"""
Exceptions - Erros do domínio de metrologia

Os casos de uso levantam estas exceções; os controllers as traduzem
em códigos de saída (2 para configuração/ramo, 3 para falhas numéricas).
"""


class MetrologyError(Exception):
    """Base de todos os erros da aplicação"""

    exit_code = 3


class ConfigError(MetrologyError):
    """Configuração ou entrada de linha de comando inválida"""

    exit_code = 2


class DomainError(MetrologyError):
    """Parâmetro fora do domínio (λ, pureza, vetor não unitário)"""

    exit_code = 2


class BranchError(MetrologyError):
    """Canal no ramo errado de unitalidade para a operação pedida"""

    exit_code = 2


class DimensionError(MetrologyError):
    """Número de qubits fora dos limites ou dimensões incompatíveis"""

    exit_code = 2


class NumericError(MetrologyError):
    """Falha numérica: estado não PSD, ajuste mal condicionado, etc."""

    exit_code = 3
