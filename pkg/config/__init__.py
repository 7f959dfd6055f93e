"""
Configuration - Camada de configuração da aplicação

Esta camada contém as tolerâncias numéricas, limites de tamanho,
passos de diferenças finitas e a configuração de logging.
"""

from .logging_config import configure_logging
from .settings import Settings, settings

__all__ = ['Settings', 'settings', 'configure_logging']
