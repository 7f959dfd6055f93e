"""
Logging Configuration - Configuração do structlog
"""

import logging
import sys

import structlog

from .settings import settings

_configured = False


class StderrHandler(logging.StreamHandler):
    """Handler que resolve sys.stderr a cada registro; a saída de erro pode ser trocada depois da configuração"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def configure_logging(level: str | None = None) -> None:
    """Configura o structlog uma única vez; os logs passam pelo logging e vão para stderr"""
    global _configured
    if _configured and level is None:
        return

    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO)
    logging.basicConfig(format="%(message)s", handlers=[StderrHandler()], level=log_level, force=True)

    renderer = (
        structlog.processors.JSONRenderer()
        if settings.is_json_logging
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_logger_name,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )
    _configured = True
