"""
Bounds Controller - Comando `bounds`: limites de H^(2) correlacionado
"""

from typing import List

import structlog

from entities.exceptions import BranchError
from entities.run_config import RunConfig

from .base_controller import BaseController, CommandResult

logger = structlog.get_logger(__name__)

BOUNDS_TOL = 1e-9


class BoundsController(BaseController):
    def cmd_bounds(self, run: RunConfig) -> CommandResult:
        """lower ≤ H^(2)(c*, r0*) ≤ máximo na grade ≤ upper, por (n, λ)"""

        def build_rows() -> List[dict]:
            family = self.family(run)
            cells = [{'n': n, 'lam': lam} for n, lam in self.grid(run.ns, run.lambdas)]
            if any(cell['n'] < 2 for cell in cells):
                raise BranchError("bounds compare correlated protocols and need n >= 2")

            def bounds_row(n: int, lam: float) -> dict:
                ch = family.eval(lam)
                self.bloch_use_case.check_unitality(family, ch)
                if not ch.is_unital(self.config.UNITALITY_TOL):
                    raise BranchError(
                        f"bounds apply to unital channels; '{family.name}' is {family.unitality.value}"
                        " (use `qfi` for the zeroth-order non-unital terms)"
                    )
                bounds = self.series_use_case.corr_bounds(ch, n)
                search = self.series_use_case.direction_search(ch, n)
                passed = (
                    bounds.lower - BOUNDS_TOL <= search.canonical
                    and search.canonical <= search.h2 + BOUNDS_TOL
                    and search.h2 <= bounds.upper + BOUNDS_TOL
                )
                if not passed:
                    logger.warning("Ordem dos limites violada", n=n, lam=lam, lower=bounds.lower, upper=bounds.upper)
                return {
                    'n': n,
                    'lam': lam,
                    'lower': bounds.lower,
                    'canonical': search.canonical,
                    'grid_max': search.h2,
                    'upper': bounds.upper,
                    'passed': passed,
                }

            return self.sweep(bounds_row, cells)

        return self.execute('bounds', build_rows)
