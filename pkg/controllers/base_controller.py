"""
Base Controller - Montagem dos casos de uso e tradução de erros em códigos de saída
"""

from dataclasses import replace
from itertools import product
from typing import Callable, Iterable, List, Tuple

import structlog

from config.settings import Settings, settings
from entities.bloch_channel import ChannelFamily
from entities.exceptions import MetrologyError
from entities.protocol import ProtocolSpec
from entities.run_config import RunConfig
from repositories.channel_repository import ChannelRepository
from use_cases.bloch_use_case import BlochUseCase
from use_cases.fisher_use_case import FisherUseCase
from use_cases.mstate_use_case import MStateUseCase
from use_cases.protocol_use_case import ProtocolUseCase
from use_cases.series_use_case import SeriesUseCase

logger = structlog.get_logger(__name__)

EXIT_OK = 0

CommandResult = Tuple[List[dict], int]


# Campo da RunConfig -> atributos de Settings que ele sobrescreve
RUN_OVERRIDES = {
    'fd_step': ('FD_STEP', 'MEASUREMENT_FD_STEP'),
    'measurement_fd_step': ('MEASUREMENT_FD_STEP',),
    'eps': ('EIGEN_EPS',),
    'max_order': ('MAX_SERIES_ORDER',),
    'fit_samples': ('FIT_SAMPLES',),
    'fit_r_min': ('FIT_R_MIN',),
    'fit_r_max': ('FIT_R_MAX',),
    'jobs': ('JOBS',),
}


def settings_for(run: RunConfig, base: Settings = settings) -> Settings:
    """Cópia das configurações com os ajustes dados explicitamente na execução (INI ou opções)

    Campos omitidos mantêm os valores do ambiente. --fd-step vale também para a
    derivada da medição, a menos que --measurement-fd-step seja dado.
    """
    overrides = {}
    for field_name in RUN_OVERRIDES:
        if field_name in run.model_fields_set:
            for attribute in RUN_OVERRIDES[field_name]:
                overrides[attribute] = getattr(run, field_name)
    return replace(base, **overrides)


class CellError(MetrologyError):
    """Erro de uma célula da grade, com a identificação da célula"""

    def __init__(self, cause: MetrologyError, cell: dict):
        super().__init__(f"{cause} (cell {cell})")
        self.cause = cause
        self.cell = cell
        self.exit_code = cause.exit_code


class BaseController:
    def __init__(self, config: Settings = settings, channel_repository: ChannelRepository | None = None):
        self.config = config
        self.channel_repository = channel_repository or ChannelRepository()
        self.bloch_use_case = BlochUseCase(config)
        self.mstate_use_case = MStateUseCase(config)
        self.fisher_use_case = FisherUseCase(config)
        self.series_use_case = SeriesUseCase(self.mstate_use_case, self.bloch_use_case, config)
        self.protocol_use_case = ProtocolUseCase(
            self.mstate_use_case,
            self.fisher_use_case,
            self.series_use_case,
            self.bloch_use_case,
            config,
        )

    def family(self, run: RunConfig) -> ChannelFamily:
        return self.channel_repository.builtin(run.channel, run.params, run.expressions, run.domain)

    def spec(self, run: RunConfig, family: ChannelFamily, lam: float, r: float, n: int) -> ProtocolSpec:
        """Protocolo da célula; sem direções explícitas usa as ótimas de menor ordem"""
        if run.protocol == "sqsc":
            if run.r0 is None:
                return self.protocol_use_case.optimal_sqsc_spec(family, lam, r)
            return ProtocolSpec.sqsc(family, lam, r, run.r0)
        if run.uses_canonical_directions:
            return self.protocol_use_case.canonical_spec(family, lam, r, n)
        return ProtocolSpec.correlated(family, lam, r, n, run.c, run.r0)

    def qubit_counts(self, run: RunConfig) -> List[int]:
        if run.protocol == "sqsc":
            if run.ns != [1]:
                logger.info("SQSC usa um qubit; grade de n ignorada", ns=run.ns)
            return [1]
        return list(run.ns)

    def grid(self, *axes: Iterable) -> List[tuple]:
        """Produto cartesiano na ordem λ, depois r, depois n"""
        return list(product(*axes))

    def in_cell(self, func: Callable[..., dict], **cell) -> Callable[[], dict]:
        def run_cell():
            try:
                return func(**cell)
            except MetrologyError as e:
                raise CellError(e, cell) from e
        return run_cell

    def execute(self, command: str, build_rows: Callable[[], List[dict]]) -> CommandResult:
        """Executa o comando e converte exceções do domínio em código de saída"""
        try:
            rows = build_rows()
            logger.info("Comando concluído", command=command, rows=len(rows))
            return rows, EXIT_OK
        except CellError as e:
            logger.error("Falha numa célula da grade", command=command, error=str(e.cause), cell=e.cell)
            return [], e.exit_code
        except MetrologyError as e:
            logger.error("Falha no comando", command=command, error=str(e))
            return [], e.exit_code

    def sweep(self, func: Callable[..., dict], cells: List[dict]) -> List[dict]:
        """Avalia as células (em paralelo se jobs > 1) mantendo a ordem da grade"""
        return self.protocol_use_case.sweep(lambda cell: self.in_cell(func, **cell)(), cells)
