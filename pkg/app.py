import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog
from pydantic import ValidationError

from config import configure_logging, settings
from entities.exceptions import ConfigError
from entities.run_config import COMMANDS, RunConfig
from repositories.config_repository import (
    ConfigRepository,
    parse_grid,
    parse_int_list,
    parse_param,
    parse_vector,
)
from routes import dispatch

logger = structlog.get_logger(__name__)

EXIT_CONFIG = 2


def create_app() -> argparse.ArgumentParser:
    """Monta a linha de comando com os subcomandos e as opções comuns"""
    parser = argparse.ArgumentParser(
        prog='qfi-metrology',
        description='QFI de canais de um qubit com estados iniciais pouco puros',
    )
    parser.add_argument('command', nargs='?', choices=COMMANDS, help='subcomando')
    parser.add_argument('--config', type=Path, help='arquivo INI com a execução')
    parser.add_argument('--channel', help='família de canais embutida')
    parser.add_argument('--param', action='append', default=[], metavar='KEY=VAL', help='parâmetro do canal')
    parser.add_argument('--expr', action='append', default=[], metavar='m1=EXPR', help='expressão de custom_diag')
    parser.add_argument('--domain', metavar='LO,HI', help='domínio de λ')
    parser.add_argument('--protocol', choices=('sqsc', 'correlated'))
    parser.add_argument('--lambda', dest='lambdas', metavar='A:B:STEPS', help='grade de λ')
    parser.add_argument('--purity', dest='purities', metavar='A:B:STEPS', help='grade de pureza r')
    parser.add_argument('--n', dest='ns', metavar='LIST', help='números de qubits')
    parser.add_argument('--c', metavar='X,Y,Z', help='direção de controle')
    parser.add_argument('--r0', metavar='X,Y,Z', help='direção inicial')
    parser.add_argument('--out', type=Path, help='arquivo de saída (padrão: stdout)')
    parser.add_argument('--format', choices=('csv', 'json'))
    parser.add_argument('--jobs', type=int)
    parser.add_argument('--fd-step', dest='fd_step', type=float, help='passo das diferenças finitas')
    parser.add_argument(
        '--measurement-fd-step', dest='measurement_fd_step', type=float,
        help='passo da derivada da medição (padrão: --fd-step ou QFI_MEASUREMENT_FD_STEP)',
    )
    parser.add_argument('--eps', type=float)
    parser.add_argument('--max-order', dest='max_order', type=int)
    parser.add_argument('--log-level', dest='log_level', help='nível de log (padrão: LOG_LEVEL)')
    return parser


def flag_fields(args: argparse.Namespace) -> Dict[str, Any]:
    """Campos da RunConfig vindos das opções explícitas"""
    fields: Dict[str, Any] = {}
    if args.command:
        fields['command'] = args.command
    if args.channel:
        fields['channel'] = args.channel
    if args.param:
        fields['params'] = dict(parse_param(item) for item in args.param)
    if args.expr:
        expressions = {}
        for item in args.expr:
            key, sep, value = item.partition('=')
            if not sep or not key.strip():
                raise ConfigError(f"expression '{item}' must look like m1=EXPR")
            expressions[key.strip()] = value.strip()
        fields['expressions'] = expressions
    if args.domain:
        bounds = parse_grid(args.domain)
        if len(bounds) != 2:
            raise ConfigError(f"domain needs two values, got {args.domain!r}")
        fields['domain'] = (bounds[0], bounds[1])
    if args.lambdas:
        fields['lambdas'] = parse_grid(args.lambdas)
    if args.purities:
        fields['purities'] = parse_grid(args.purities)
    if args.ns:
        fields['ns'] = parse_int_list(args.ns)
    for key in ('c', 'r0'):
        if getattr(args, key):
            fields[key] = parse_vector(getattr(args, key))
    for key in ('protocol', 'out', 'format', 'jobs', 'fd_step', 'measurement_fd_step', 'eps', 'max_order'):
        if getattr(args, key) is not None:
            fields[key] = getattr(args, key)
    return fields


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Arquivo INI primeiro, opções explícitas por cima"""
    fields: Dict[str, Any] = {}
    if args.config:
        fields.update(ConfigRepository().load(args.config))
    fields.update(flag_fields(args))
    if 'command' not in fields:
        raise ConfigError("no subcommand given (positional argument or [run] command)")
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {e}") from e


def main(argv: Optional[List[str]] = None) -> int:
    args = create_app().parse_args(argv)
    configure_logging(args.log_level)
    try:
        run = build_run_config(args)
    except ConfigError as e:
        logger.error("Configuração inválida", error=str(e))
        return EXIT_CONFIG
    logger.info("Iniciando execução", command=run.command, channel=run.channel, protocol=run.protocol)
    return dispatch(run, settings)


if __name__ == '__main__':
    sys.exit(main())
