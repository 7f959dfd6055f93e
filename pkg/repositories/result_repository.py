"""
Result Repository - Escrita das tabelas de resultado em CSV e JSON
"""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Type

import structlog
from marshmallow import Schema, ValidationError, fields

from config.settings import Settings, settings
from entities.exceptions import ConfigError

logger = structlog.get_logger(__name__)


class QfiRowSchema(Schema):
    lam = fields.Float(required=True)
    r = fields.Float(required=True)
    n = fields.Integer(required=True)
    exact = fields.Float(required=True)
    series = fields.Float(required=True)
    h0 = fields.Float(allow_none=True)
    h1 = fields.Float(allow_none=True)
    h2 = fields.Float(allow_none=True)
    h3 = fields.Float(allow_none=True)
    h4 = fields.Float(allow_none=True)


class BoundsRowSchema(Schema):
    n = fields.Integer(required=True)
    lam = fields.Float(required=True)
    lower = fields.Float(required=True)
    canonical = fields.Float(required=True)
    grid_max = fields.Float(required=True)
    upper = fields.Float(required=True)
    passed = fields.Boolean(required=True)


class MeasureRowSchema(Schema):
    n = fields.Integer(required=True)
    lam = fields.Float(required=True)
    r = fields.Float(required=True)
    cfi = fields.Float(required=True)
    qfi = fields.Float(required=True)
    ratio = fields.Float(allow_none=True)


class EscherRowSchema(Schema):
    lam = fields.Float(required=True)
    r = fields.Float(required=True)
    escher_bound = fields.Float(required=True)
    exact_qfi = fields.Float(required=True)
    slack = fields.Float(required=True)


class FitRowSchema(Schema):
    n = fields.Integer(required=True)
    lam = fields.Float(required=True)
    order = fields.Integer(required=True)
    fitted = fields.Float(required=True)
    closed_form = fields.Float(allow_none=True)
    rel_error = fields.Float(allow_none=True)
    series = fields.Float(allow_none=True)
    series_rel_error = fields.Float(allow_none=True)


class ValidateRowSchema(Schema):
    lam = fields.Float(required=True)
    d_norm = fields.Float(required=True)
    m_max = fields.Float(required=True)
    passed = fields.Boolean(required=True)
    violations = fields.String(required=True)


SCHEMAS: Dict[str, Type[Schema]] = {
    'qfi': QfiRowSchema,
    'bounds': BoundsRowSchema,
    'measure': MeasureRowSchema,
    'escher': EscherRowSchema,
    'fit-orders': FitRowSchema,
    'validate-channel': ValidateRowSchema,
}


class ResultRepository:
    def __init__(self, config: Settings = settings):
        self.config = config

    def columns(self, command: str) -> List[str]:
        return list(self._schema(command).fields)

    def _schema(self, command: str) -> Schema:
        try:
            return SCHEMAS[command](many=True)
        except KeyError as e:
            raise ConfigError(f"no output schema for command '{command}'") from e

    def _format(self, value) -> str:
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return format(value, self.config.float_format)
        return str(value)

    def to_csv(self, command: str, rows: Sequence[dict]) -> str:
        """Tabela CSV com cabeçalho, vírgulas e '\\n' como fim de linha"""
        columns = self.columns(command)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(columns)
        for row in self._validated(command, rows):
            writer.writerow([self._format(row.get(column)) for column in columns])
        return buffer.getvalue()

    def _rounded(self, value):
        # mesmos dígitos do CSV; com 17 dígitos o float volta idêntico
        if isinstance(value, float) and not isinstance(value, bool):
            return float(format(value, self.config.float_format))
        return value

    def to_json(self, command: str, rows: Sequence[dict]) -> str:
        rows = [{key: self._rounded(value) for key, value in row.items()} for row in self._validated(command, rows)]
        document = {'command': command, 'columns': self.columns(command), 'rows': rows}
        return json.dumps(document, sort_keys=True, indent=2) + "\n"

    def _validated(self, command: str, rows: Sequence[dict]) -> List[dict]:
        schema = self._schema(command)
        errors = schema.validate(list(rows))
        if errors:
            raise ConfigError(f"rows for '{command}' do not match the output schema: {errors}")
        return schema.dump(list(rows))

    def load_json(self, command: str, text: str) -> List[dict]:
        """Lê e valida um documento JSON produzido por to_json"""
        document = json.loads(text)
        try:
            return self._schema(command).load(document['rows'])
        except (KeyError, ValidationError) as e:
            raise ConfigError(f"invalid result document for '{command}': {e}") from e

    def write(self, command: str, rows: Sequence[dict], out: Optional[Path], fmt: str) -> str:
        """Escreve a tabela no arquivo (ou na saída padrão) e devolve o texto"""
        text = self.to_json(command, rows) if fmt == 'json' else self.to_csv(command, rows)
        if out is None:
            sys.stdout.write(text)
        else:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            with open(out, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
            logger.info("Resultados gravados", path=str(out), rows=len(rows), format=fmt)
        return text
