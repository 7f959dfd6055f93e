"""
Expression Repository - Leitura segura de expressões em λ para canais do usuário

Aceita apenas números, λ (também escrito `lambda` ou `lam`), os operadores
+ - * / ^ e as funções sqrt, sin, cos, exp, além das constantes pi e E.
"""

import re
from dataclasses import dataclass
from typing import Callable

import structlog
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from entities.exceptions import ConfigError

logger = structlog.get_logger(__name__)

LAMBDA = sympy.Symbol('lam', real=True)

_FUNCTIONS = {'sqrt': sympy.sqrt, 'sin': sympy.sin, 'cos': sympy.cos, 'exp': sympy.exp}
_CONSTANTS = {'pi': sympy.pi, 'E': sympy.E}
_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


@dataclass(frozen=True)
class CompiledExpression:
    """Expressão simbólica com a derivada analítica e versões numéricas"""

    source: str
    expr: sympy.Expr
    derivative: sympy.Expr
    value: Callable[[float], float]
    slope: Callable[[float], float]


class ExpressionRepository:
    def _check_tokens(self, text: str) -> None:
        position = 0
        stripped = text.rstrip()
        while position < len(stripped):
            match = _TOKEN.match(stripped, position)
            if match is None or match.end() == position:
                raise ConfigError(f"unexpected character {stripped[position]!r} in expression {text!r}")
            name = match.group('name')
            if name is not None and name != 'lam' and name not in _FUNCTIONS and name not in _CONSTANTS:
                raise ConfigError(f"name {name!r} is not allowed in expression {text!r}")
            position = match.end()

    def parse(self, text: str) -> sympy.Expr:
        """Converte o texto numa expressão sympy em λ"""
        normalized = re.sub(r"\blambda\b", "lam", text.replace('λ', 'lam'))
        if not normalized.strip():
            raise ConfigError("empty expression")
        self._check_tokens(normalized)
        local_dict = {'lam': LAMBDA, **_FUNCTIONS, **_CONSTANTS}
        try:
            expr = parse_expr(
                normalized,
                local_dict=local_dict,
                transformations=standard_transformations + (convert_xor,),
                evaluate=True,
            )
        except (SyntaxError, TypeError, ValueError) as e:
            raise ConfigError(f"cannot parse expression {text!r}: {e}") from e
        if not expr.free_symbols <= {LAMBDA}:
            raise ConfigError(f"expression {text!r} uses symbols other than lambda")
        return sympy.sympify(expr)

    def compile(self, text: str) -> CompiledExpression:
        """Compila a expressão e sua derivada para funções numéricas"""
        expr = self.parse(text)
        derivative = sympy.diff(expr, LAMBDA)
        value = sympy.lambdify(LAMBDA, expr, 'numpy')
        slope = sympy.lambdify(LAMBDA, derivative, 'numpy')
        logger.debug("Expressão compilada", source=text, derivative=str(derivative))
        return CompiledExpression(
            source=text,
            expr=expr,
            derivative=derivative,
            value=lambda lam: float(value(lam)),
            slope=lambda lam: float(slope(lam)),
        )
