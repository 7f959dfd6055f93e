"""
Config Repository - Leitura de arquivos de execução (INI) e das opções de linha de comando

Formato do arquivo:

    [run]
    command = bounds

    [channel]
    name = custom_diag
    domain = 0, 1

    [channel.params]
    p = 0.8

    [channel.expressions]
    m1 = 0
    m2 = 0
    m3 = 1 - 2*lambda

    [protocol]
    kind = correlated
    lambda = 0.1:0.9:9
    purity = 1e-3
    n = 2, 3, 4
    c = 1, 0, 0
    r0 = 0, 1, 0

    [numerics]
    fd_step = 1e-6

    [output]
    out = results.csv
    format = csv
    jobs = 4
"""

import configparser
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
import structlog

from entities.exceptions import ConfigError

logger = structlog.get_logger(__name__)

_NUMERIC_KEYS = {
    'fd_step': float,
    'measurement_fd_step': float,
    'eps': float,
    'max_order': int,
    'fit_samples': int,
    'fit_r_min': float,
    'fit_r_max': float,
}


def parse_grid(text: str) -> List[float]:
    """'a:b:steps' vira linspace(a, b, steps); 'x, y, z' vira a lista"""
    text = text.strip()
    try:
        if ':' in text:
            start, stop, steps = text.split(':')
            count = int(steps)
            if count < 1:
                raise ConfigError(f"grid '{text}' needs at least one step")
            return [float(v) for v in np.linspace(float(start), float(stop), count)]
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ConfigError(f"invalid grid '{text}': {e}") from e


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ConfigError(f"invalid integer list '{text}': {e}") from e


def parse_vector(text: str) -> Tuple[float, float, float]:
    try:
        values = tuple(float(v) for v in text.split(','))
    except ValueError as e:
        raise ConfigError(f"invalid vector '{text}': {e}") from e
    if len(values) != 3:
        raise ConfigError(f"vector '{text}' must have three components")
    return values


def parse_param(text: str) -> Tuple[str, float]:
    """Converte 'chave=valor' num par (chave, número)"""
    key, sep, value = text.partition('=')
    if not sep or not key.strip():
        raise ConfigError(f"parameter '{text}' must look like key=value")
    try:
        return key.strip(), float(value)
    except ValueError as e:
        raise ConfigError(f"parameter '{text}' needs a numeric value") from e


class ConfigRepository:
    def load(self, path: Path) -> Dict[str, Any]:
        """Lê o arquivo INI e devolve os campos da RunConfig"""
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(path, encoding='utf-8') as handle:
                parser.read_file(handle)
        except (OSError, configparser.Error) as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e

        fields: Dict[str, Any] = {}
        if parser.has_option('run', 'command'):
            fields['command'] = parser.get('run', 'command')

        if parser.has_section('channel'):
            section = parser['channel']
            if 'name' in section:
                fields['channel'] = section['name']
            if 'domain' in section:
                bounds = parse_grid(section['domain'])
                if len(bounds) != 2:
                    raise ConfigError(f"channel domain needs two values, got {section['domain']!r}")
                fields['domain'] = (bounds[0], bounds[1])
        if parser.has_section('channel.params'):
            fields['params'] = dict(parse_param(f"{k}={v}") for k, v in parser['channel.params'].items())
        if parser.has_section('channel.expressions'):
            fields['expressions'] = dict(parser['channel.expressions'])

        if parser.has_section('protocol'):
            section = parser['protocol']
            if 'kind' in section:
                fields['protocol'] = section['kind']
            if 'lambda' in section:
                fields['lambdas'] = parse_grid(section['lambda'])
            if 'purity' in section:
                fields['purities'] = parse_grid(section['purity'])
            if 'n' in section:
                fields['ns'] = parse_int_list(section['n'])
            for key in ('c', 'r0'):
                if key in section:
                    fields[key] = parse_vector(section[key])

        if parser.has_section('numerics'):
            for key, value in parser['numerics'].items():
                if key not in _NUMERIC_KEYS:
                    raise ConfigError(f"unknown numerics option '{key}'")
                try:
                    fields[key] = _NUMERIC_KEYS[key](value)
                except ValueError as e:
                    raise ConfigError(f"numerics option {key}={value!r} is not a number") from e

        if parser.has_section('output'):
            section = parser['output']
            if 'out' in section:
                fields['out'] = Path(section['out'])
            if 'format' in section:
                fields['format'] = section['format']
            if 'jobs' in section:
                fields['jobs'] = (parse_int_list(section['jobs']) or [0])[0]

        logger.info("Arquivo de configuração carregado", path=str(path), keys=sorted(fields))
        return fields
