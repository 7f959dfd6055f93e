from typing import Callable, Dict, Tuple, Type

import structlog

from config.settings import Settings, settings
from controllers.base_controller import BaseController, CommandResult, settings_for
from controllers.bounds_controller import BoundsController
from controllers.channel_controller import ChannelController
from controllers.measurement_controller import MeasurementController
from controllers.qfi_controller import QfiController
from entities.exceptions import MetrologyError
from entities.run_config import RunConfig
from repositories.result_repository import ResultRepository

logger = structlog.get_logger(__name__)

# Subcomandos
COMMAND_ROUTES: Dict[str, Tuple[Type[BaseController], str]] = {
    'qfi': (QfiController, 'cmd_qfi'),
    'fit-orders': (QfiController, 'cmd_fit_orders'),
    'bounds': (BoundsController, 'cmd_bounds'),
    'measure': (MeasurementController, 'cmd_measure'),
    'escher': (MeasurementController, 'cmd_escher'),
    'validate-channel': (ChannelController, 'cmd_validate_channel'),
}


def resolve(command: str, config: Settings) -> Callable[[RunConfig], CommandResult]:
    controller_class, method = COMMAND_ROUTES[command]
    return getattr(controller_class(config), method)


def dispatch(run: RunConfig, base: Settings = settings) -> int:
    """Executa o subcomando e grava a tabela; devolve o código de saída"""
    config = settings_for(run, base)
    rows, code = resolve(run.command, config)(run)
    if code != 0 and not rows:
        return code
    try:
        ResultRepository(config).write(run.command, rows, run.out, run.format)
    except (MetrologyError, OSError) as e:
        logger.error("Falha ao gravar resultados", command=run.command, error=str(e))
        return getattr(e, 'exit_code', 2)
    return code
