"""
Measurement Controller - Comandos `measure` e `escher`
"""

from typing import List

import numpy as np
import structlog

from entities.run_config import RunConfig

from .base_controller import BaseController, CommandResult

logger = structlog.get_logger(__name__)

ESCHER_LAMBDAS = np.round(np.arange(1, 20) * 0.05, 10)
ESCHER_PURITIES = np.round(np.arange(1, 10) * 0.1, 10)


class MeasurementController(BaseController):
    def cmd_measure(self, run: RunConfig) -> CommandResult:
        """CFI da medição local contra a QFI exata, por célula (λ, r, n)"""

        def build_rows() -> List[dict]:
            family = self.family(run)
            cells = [
                {'lam': lam, 'r': r, 'n': n}
                for lam, r, n in self.grid(run.lambdas, run.purities, run.ns)
            ]

            def measure_row(lam: float, r: float, n: int) -> dict:
                spec = self.spec(run, family, lam, r, n)
                record = self.protocol_use_case.local_measurement_sim(spec)
                qfi = self.protocol_use_case.exact_qfi(spec)
                ratio = record.cfi / qfi if qfi > 1e-30 else None
                if qfi > 1e-30 and record.cfi > qfi + 1e-8:
                    logger.warning("CFI acima da QFI", lam=lam, r=r, n=n, cfi=record.cfi, qfi=qfi)
                return {'n': n, 'lam': lam, 'r': r, 'cfi': record.cfi, 'qfi': qfi, 'ratio': ratio}

            return self.sweep(measure_row, cells)

        return self.execute('measure', build_rows)

    def cmd_escher(self, run: RunConfig | None = None) -> CommandResult:
        """Limite de Escher contra a QFI ótima do phase flip na grade padrão 19 x 9"""

        def build_rows() -> List[dict]:
            rows = self.protocol_use_case.escher_phase_flip_demo(ESCHER_LAMBDAS.tolist(), ESCHER_PURITIES.tolist())
            return [row.to_dict() for row in rows]

        return self.execute('escher', build_rows)
