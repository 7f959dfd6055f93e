"""
QFI Controller - Comandos `qfi` e `fit-orders`
"""

from typing import List, Optional

import numpy as np
import structlog

from entities.bloch_channel import BlochChannel, ChannelFamily, Unitality
from entities.exceptions import DomainError, NumericError
from entities.protocol import ProtocolSpec
from entities.qfi_series import QfiSeries
from entities.run_config import RunConfig

from .base_controller import BaseController, CommandResult

logger = structlog.get_logger(__name__)

MAX_ROW_ORDER = 4
PERPENDICULAR_TOL = 1e-9


class QfiController(BaseController):
    def cmd_qfi(self, run: RunConfig) -> CommandResult:
        """Uma linha por célula (λ, r, n): QFI exata, estimativa da série e H^(j)"""

        def build_rows() -> List[dict]:
            family = self.family(run)
            cells = [
                {'lam': lam, 'r': r, 'n': n}
                for lam, r, n in self.grid(run.lambdas, run.purities, self.qubit_counts(run))
            ]
            logger.info("Calculando QFI", channel=family.name, protocol=run.protocol, cells=len(cells))

            def qfi_row(lam: float, r: float, n: int) -> dict:
                spec = self.spec(run, family, lam, r, n)
                result = self.protocol_use_case.protocol_qfi(spec, self.config.MAX_SERIES_ORDER)
                row = {'lam': lam, 'r': r, 'n': n, 'exact': result.exact, 'series': result.series_estimate}
                for j in range(MAX_ROW_ORDER + 1):
                    row[f'h{j}'] = result.series.order(j) if j <= result.series.K else None
                return row

            return self.sweep(qfi_row, cells)

        return self.execute('qfi', build_rows)

    def closed_form(self, family: ChannelFamily, ch: BlochChannel, spec: ProtocolSpec, order: int) -> Optional[float]:
        """Forma fechada de H^(order) para o protocolo, quando existe"""
        unital = ch.is_unital(self.config.UNITALITY_TOL)
        if order == 0 and family.unitality is Unitality.NONUNITAL_PARAM_DEP_SHIFT:
            return self.series_use_case.sqsc_nonunital_h0(ch)
        if not spec.is_correlated:
            if order == 2 and unital:
                return self.series_use_case.sqsc_unital_h2(ch, spec.r0)
            if order == 2 and family.unitality is Unitality.NONUNITAL_CONST_SHIFT:
                return self.series_use_case.sqsc_nonunital_const_h2(ch, spec.r0)
            return None
        if not unital:
            return None
        if order == 2:
            return self.series_use_case.corr_h2(ch, spec.n, spec.c, spec.r0)
        if order in (3, 4) and abs(float(spec.c @ spec.r0)) <= PERPENDICULAR_TOL:
            higher = self.series_use_case.corr_h3_h4(ch, spec.n, spec.c, spec.r0)
            return higher.h3 if order == 3 else higher.h4
        return None

    def generic_series(self, spec: ProtocolSpec, max_order: int) -> Optional[QfiSeries]:
        """Série ordem a ordem do protocolo; None quando ρ^(0) é singular"""
        try:
            return self.protocol_use_case.protocol_qfi(spec, max_order).series
        except NumericError as e:
            logger.warning("Série genérica indisponível", lam=spec.lam, n=spec.n, error=str(e))
            return None

    def cmd_fit_orders(self, run: RunConfig) -> CommandResult:
        """Ajusta a QFI exata em r e compara os coeficientes com as formas fechadas"""

        def build_rows() -> List[dict]:
            family = self.family(run)
            samples = self.series_use_case.fit_samples()
            max_order = self.config.MAX_SERIES_ORDER
            cells = [{'lam': lam, 'n': n} for lam, n in self.grid(run.lambdas, self.qubit_counts(run))]

            def fit_rows(lam: float, n: int) -> List[dict]:
                spec = self.spec(run, family, lam, samples[0], n)
                ch = family.eval(lam)
                self.bloch_use_case.check_unitality(family, ch)
                values = [self.protocol_use_case.exact_qfi(spec.with_purity(float(r))) for r in samples]
                min_order = 2 if family.unitality is Unitality.UNITAL else 0
                fit = self.series_use_case.fit_orders(samples, values, max_order + 2, min_order)
                logger.debug("Ajuste em r concluído", lam=lam, n=n, condition=fit.condition, residual=fit.residual)
                series = self.generic_series(spec, max_order)

                rows = []
                for order in range(min_order, max_order + 1):
                    fitted = fit.coefficient(order)
                    try:
                        closed = self.closed_form(family, ch, spec, order)
                    except DomainError:
                        closed = None
                    generic = None if series is None else series.order(order)
                    disagrees = (
                        closed is not None
                        and generic is not None
                        and _relative_error(generic, closed) > self.config.GAIN_TOLERANCE
                    )
                    if disagrees:
                        logger.warning(
                            "Forma fechada difere da série genérica",
                            lam=lam, n=n, order=order, closed=closed, series=generic,
                        )
                    rows.append({
                        'n': n,
                        'lam': lam,
                        'order': order,
                        'fitted': fitted,
                        'closed_form': closed,
                        'rel_error': None if closed is None else _relative_error(fitted, closed),
                        'series': generic,
                        'series_rel_error': None if generic is None else _relative_error(fitted, generic),
                    })
                return rows

            return [row for rows in self.sweep(fit_rows, cells) for row in rows]

        return self.execute('fit-orders', build_rows)


def _relative_error(fitted: float, closed: float) -> float:
    # erro absoluto quando a forma fechada se anula
    scale = abs(closed) if abs(closed) > 1e-12 else 1.0
    return float(np.abs(fitted - closed) / scale)
