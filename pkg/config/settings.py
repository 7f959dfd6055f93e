"""
Application Settings - Configurações numéricas e de execução
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Settings:
    """Configurações centralizadas da aplicação"""

    # Tolerâncias de validação
    VALIDATION_TOL: float = float(os.getenv('QFI_VALIDATION_TOL', '1e-9'))
    UNIT_TOL: float = float(os.getenv('QFI_UNIT_TOL', '1e-9'))
    UNITALITY_TOL: float = float(os.getenv('QFI_UNITALITY_TOL', '1e-12'))
    HERMITIAN_TOL: float = float(os.getenv('QFI_HERMITIAN_TOL', '1e-10'))

    # Decomposição espectral
    EIGEN_EPS: float = float(os.getenv('QFI_EIGEN_EPS', '1e-12'))  # relativo ao maior autovalor
    PSD_TOL: float = float(os.getenv('QFI_PSD_TOL', '1e-9'))
    CFI_EPS: float = float(os.getenv('QFI_CFI_EPS', '1e-14'))

    # Diferenças finitas
    FD_STEP: float = float(os.getenv('QFI_FD_STEP', '1e-6'))
    MEASUREMENT_FD_STEP: float = float(os.getenv('QFI_MEASUREMENT_FD_STEP', '1e-5'))

    # Série em pureza
    MAX_SERIES_ORDER: int = int(os.getenv('QFI_MAX_SERIES_ORDER', '4'))
    SERIES_WARN_NR2: float = float(os.getenv('QFI_SERIES_WARN_NR2', '0.1'))

    # Ajuste polinomial
    FIT_SAMPLES: int = int(os.getenv('QFI_FIT_SAMPLES', '11'))
    FIT_R_MIN: float = float(os.getenv('QFI_FIT_R_MIN', '1e-3'))
    FIT_R_MAX: float = float(os.getenv('QFI_FIT_R_MAX', '1e-2'))
    FIT_MAX_CONDITION: float = float(os.getenv('QFI_FIT_MAX_CONDITION', '1e12'))

    # Limites de tamanho
    DENSE_MAX_QUBITS: int = int(os.getenv('QFI_DENSE_MAX_QUBITS', '10'))  # 1024 x 1024
    PAULI_MAX_QUBITS: int = int(os.getenv('QFI_PAULI_MAX_QUBITS', '14'))

    # Protocolos
    GAIN_TOLERANCE: float = float(os.getenv('QFI_GAIN_TOLERANCE', '0.02'))
    DIRECTION_GRID: int = int(os.getenv('QFI_DIRECTION_GRID', '20'))

    # Saída
    FLOAT_DIGITS: int = int(os.getenv('QFI_FLOAT_DIGITS', '17'))
    JOBS: int = int(os.getenv('QFI_JOBS', '1'))

    # Logging
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT: str = os.getenv('LOG_FORMAT', 'console')

    @property
    def float_format(self) -> str:
        """Formato usado para escrever números nas tabelas"""
        return f".{self.FLOAT_DIGITS}g"

    @property
    def is_json_logging(self) -> bool:
        """Verifica se os logs devem sair em JSON"""
        return self.LOG_FORMAT.lower() == 'json'


# Instância global das configurações
settings = Settings()
