"""
Fisher Use Case - SLD, QFI e CFI exatas a partir de operadores densos

É o oráculo de força bruta contra o qual as séries são verificadas.
"""

from typing import Callable, List, Sequence, Tuple

import numpy as np
import structlog

from config.settings import Settings, settings
from entities.exceptions import DomainError, NumericError
from entities.fisher_result import ProbModel, SldResult
from entities.pauli_state import DenseOperator

logger = structlog.get_logger(__name__)

TRACE_TOL = 1e-8


class FisherUseCase:
    def __init__(self, config: Settings = settings):
        self.config = config

    def _check_inputs(self, rho: DenseOperator, drho: DenseOperator) -> None:
        if rho.n != drho.n:
            raise NumericError(f"rho has n={rho.n} but drho has n={drho.n}")
        tol = self.config.HERMITIAN_TOL
        if not rho.is_hermitian(tol):
            raise NumericError(f"rho is not Hermitian (defect {rho.hermitian_defect():.3g})")
        if not drho.is_hermitian(tol):
            raise NumericError(f"drho is not Hermitian (defect {drho.hermitian_defect():.3g})")
        if abs(rho.trace() - 1) > TRACE_TOL:
            raise NumericError(f"rho has trace {rho.trace().real!r}, expected 1")
        if abs(drho.trace()) > TRACE_TOL:
            raise NumericError(f"drho has trace {drho.trace().real!r}, expected 0")

    def sld_exact(self, rho: DenseOperator, drho: DenseOperator, eps: float | None = None) -> SldResult:
        """L = 2 Σ_{p_j+p_k > eps·p_max} ⟨φj|ρ̇|φk⟩/(p_j+p_k) |φj⟩⟨φk| e QFI = Tr[ρ̇ L]"""
        self._check_inputs(rho, drho)
        eps = self.config.EIGEN_EPS if eps is None else eps

        eigenvalues, eigenvectors = np.linalg.eigh(rho.entries)
        if eigenvalues[0] < -self.config.PSD_TOL:
            raise NumericError(f"rho is not positive semidefinite: eigenvalue {eigenvalues[0]!r}")
        eigenvalues = np.clip(eigenvalues, 0.0, None)

        rotated = eigenvectors.conj().T @ drho.entries @ eigenvectors
        denominators = eigenvalues[:, None] + eigenvalues[None, :]
        kept = denominators > eps * eigenvalues.max()
        safe = np.where(kept, denominators, 1.0)
        sld_eigenbasis = np.where(kept, 2 * rotated / safe, 0.0)

        L = eigenvectors @ sld_eigenbasis @ eigenvectors.conj().T
        L = 0.5 * (L + L.conj().T)
        qfi = float(np.real(np.sum(np.where(kept, 2 * np.abs(rotated) ** 2 / safe, 0.0))))
        dropped = int(np.count_nonzero(~kept))
        if dropped:
            logger.debug("Pares nulos ignorados na SLD", dropped_pairs=dropped, n=rho.n)
        return SldResult(
            L=DenseOperator(rho.n, L),
            qfi=qfi,
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            dropped_pairs=dropped,
        )

    def qfi_exact(self, rho: DenseOperator, drho: DenseOperator, eps: float | None = None) -> float:
        return self.sld_exact(rho, drho, eps).qfi

    def numeric_drho(
        self,
        state_at: Callable[[float], DenseOperator],
        lam0: float,
        h: float | None = None,
    ) -> DenseOperator:
        """(ρ(λ0+h) − ρ(λ0−h))/(2h)"""
        h = self.config.FD_STEP if h is None else h
        if h <= 0:
            raise DomainError(f"finite-difference step must be positive, got {h!r}")
        plus, minus = state_at(lam0 + h), state_at(lam0 - h)
        return DenseOperator(plus.n, (plus.entries - minus.entries) / (2 * h))

    def qfi_numeric_derivative(
        self,
        state_at: Callable[[float], DenseOperator],
        lam0: float,
        h: float | None = None,
        eps: float | None = None,
    ) -> float:
        """QFI com ρ̇ por diferença central quando não há derivada analítica"""
        return self.qfi_exact(state_at(lam0), self.numeric_drho(state_at, lam0, h), eps)

    def cfi(self, model: ProbModel, eps: float | None = None) -> float:
        """Σ_x (∂p_x/∂λ)²/p_x, ignorando resultados com p_x < eps"""
        eps = self.config.CFI_EPS if eps is None else eps
        kept = model.probabilities >= eps
        if not np.any(kept):
            return 0.0
        return float(np.sum(model.derivatives[kept] ** 2 / model.probabilities[kept]))

    def prob_model(
        self,
        rho: DenseOperator,
        drho: DenseOperator,
        projectors: Sequence[DenseOperator],
    ) -> ProbModel:
        """Distribuição de uma medição projetiva: p_x = Tr[Π_x ρ], ∂p_x = Tr[Π_x ρ̇]"""
        outcomes: List[Tuple[float, float]] = [
            (float(np.real(np.trace(P.entries @ rho.entries))), float(np.real(np.trace(P.entries @ drho.entries))))
            for P in projectors
        ]
        return ProbModel.from_outcomes(outcomes)

    def sld_eigen_measurement(self, sld: SldResult) -> List[DenseOperator]:
        """Projetores de posto 1 sobre os autovetores da SLD

        A autodecomposição é determinística; para L = 0 resulta a base canônica.
        """
        _, vectors = np.linalg.eigh(sld.L.entries)
        projectors = [DenseOperator(sld.L.n, np.outer(v, v.conj())) for v in vectors.T]
        completeness = np.max(np.abs(np.sum([P.entries for P in projectors], axis=0) - np.eye(sld.L.dim)))
        if completeness > 1e-10:
            raise NumericError(f"SLD eigenprojectors are not complete (defect {completeness:.3g})")
        return projectors

    def eigenprojectors(self, op: DenseOperator) -> List[DenseOperator]:
        """Projetores de posto 1 na autobase de um operador Hermitiano"""
        _, vectors = np.linalg.eigh(op.entries)
        return [DenseOperator(op.n, np.outer(v, v.conj())) for v in vectors.T]
