"""
Channel Controller - Comando `validate-channel`
"""

from typing import List

import structlog

from entities.exceptions import NumericError
from entities.run_config import RunConfig

from .base_controller import BaseController, CommandResult

logger = structlog.get_logger(__name__)


class ChannelController(BaseController):
    def cmd_validate_channel(self, run: RunConfig) -> CommandResult:
        """Restrições de Bloch do canal em cada λ da grade; falha se alguma linha falhar"""

        def build_rows() -> List[dict]:
            family = self.family(run)
            rows = []
            for lam in run.lambdas:
                report = self.bloch_use_case.validate(family.eval(lam))
                rows.append({
                    'lam': lam,
                    'd_norm': report.d_norm,
                    'm_max': report.m_max,
                    'passed': report.passed,
                    'violations': "; ".join(f"{v.constraint} ({v.magnitude:.3g})" for v in report.violations),
                })
            return rows

        rows, code = self.execute('validate-channel', build_rows)
        failed = [row['lam'] for row in rows if not row['passed']]
        if failed:
            logger.error("Canal viola as restrições de Bloch", lambdas=failed)
            return rows, NumericError.exit_code
        return rows, code
