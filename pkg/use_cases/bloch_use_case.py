"""
Bloch Use Case - Validação, ação e derivadas de canais de um qubit
"""

from typing import Callable, Sequence, Tuple

import numpy as np
import structlog

from config.settings import Settings, settings
from entities.bloch_channel import (
    BlochChannel,
    ChannelFamily,
    SvdDecomp,
    Unitality,
    ValidationReport,
    Violation,
)
from entities.exceptions import BranchError, DomainError
from entities.pauli_state import PAULI_MATRICES

logger = structlog.get_logger(__name__)

ChannelValues = Callable[[float], Tuple[np.ndarray, np.ndarray]]


class BlochUseCase:
    def __init__(self, config: Settings = settings):
        self.config = config

    def validate(self, channel: BlochChannel, tol: float | None = None) -> ValidationReport:
        """Verifica |d| ≤ 1 e a implicação |d| = 1 ⇒ M = 0"""
        tol = self.config.VALIDATION_TOL if tol is None else tol
        d_norm = float(np.linalg.norm(channel.d))
        m_max = float(np.max(np.abs(channel.M)))
        violations = []
        if d_norm > 1 + tol:
            violations.append(Violation("|d| <= 1", d_norm - 1))
        if d_norm > 1 - tol and m_max > tol:
            violations.append(Violation("|d| = 1 requires M = 0", m_max))
        return ValidationReport(d_norm=d_norm, m_max=m_max, violations=violations)

    def apply_bloch(self, channel: BlochChannel, r: float, r_i: Sequence[float]) -> np.ndarray:
        """r_f = r·M·r_i + d"""
        r_i = np.asarray(r_i, dtype=float)
        if abs(np.linalg.norm(r_i) - 1) > self.config.UNIT_TOL:
            raise DomainError(f"initial direction must be a unit vector, |r_i| = {np.linalg.norm(r_i)!r}")
        if not 0 <= r <= 1:
            raise DomainError(f"purity r={r!r} outside [0, 1]")
        return r * channel.M @ r_i + channel.d

    def fd_derivative(
        self,
        values: ChannelValues,
        lam0: float,
        h: float,
        domain: Tuple[float, float] | None = None,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Diferença central (f(λ0+h) − f(λ0−h))/(2h) para M e d"""
        if h <= 0:
            raise DomainError(f"finite-difference step must be positive, got {h!r}")
        if domain is not None and not (domain[0] <= lam0 - h and lam0 + h <= domain[1]):
            raise DomainError(f"lambda0 ± h = {lam0} ± {h} leaves the domain {list(domain)}")
        m_plus, d_plus = (np.asarray(v, dtype=float) for v in values(lam0 + h))
        m_minus, d_minus = (np.asarray(v, dtype=float) for v in values(lam0 - h))
        return (m_plus - m_minus) / (2 * h), (d_plus - d_minus) / (2 * h)

    def _one_sided_derivative(self, values: ChannelValues, lam0: float, h: float) -> Tuple[np.ndarray, np.ndarray]:
        # três pontos, segunda ordem; h negativo olha para trás
        f0, f1, f2 = ([np.asarray(v, dtype=float) for v in values(lam0 + k * h)] for k in (0, 1, 2))
        return tuple((-3 * a + 4 * b - c) / (2 * h) for a, b, c in zip(f0, f1, f2))

    def family_from_callable(
        self,
        name: str,
        values: ChannelValues,
        domain: Tuple[float, float],
        h: float | None = None,
    ) -> ChannelFamily:
        """Família do usuário com derivadas por diferenças finitas"""
        step = self.config.FD_STEP if h is None else h
        lo, hi = domain

        def evaluate(lam: float) -> BlochChannel:
            M, d = values(lam)
            if lam - step >= lo and lam + step <= hi:
                dM, dd = self.fd_derivative(values, lam, step, domain)
            else:
                dM, dd = self._one_sided_derivative(values, lam, step if lam - step < lo else -step)
            return BlochChannel(M=M, d=d, dM=dM, dd=dd)

        unitality = self.classify_unitality(evaluate, domain)
        logger.info("Família do usuário criada", name=name, unitality=unitality.value, step=step)
        return ChannelFamily(name, evaluate, unitality, (lo, hi), analytic=False)

    def classify_unitality(self, evaluate: Callable[[float], BlochChannel], domain: Tuple[float, float]) -> Unitality:
        """Infere a classe de unitalidade amostrando d e ḋ no domínio"""
        samples = [evaluate(lam) for lam in np.linspace(domain[0], domain[1], 9)]
        tol = max(self.config.UNITALITY_TOL, 10 * self.config.FD_STEP ** 2)
        if all(np.linalg.norm(ch.d) < tol and np.linalg.norm(ch.dd) < tol for ch in samples):
            return Unitality.UNITAL
        if all(np.linalg.norm(ch.dd) < tol for ch in samples):
            return Unitality.NONUNITAL_CONST_SHIFT
        return Unitality.NONUNITAL_PARAM_DEP_SHIFT

    def check_unitality(self, family: ChannelFamily, channel: BlochChannel) -> None:
        """Confere o rótulo da família contra os valores numéricos do canal"""
        tol = self.config.UNITALITY_TOL if family.analytic else max(self.config.UNITALITY_TOL, 10 * self.config.FD_STEP ** 2)
        d_norm, dd_norm = float(np.linalg.norm(channel.d)), float(np.linalg.norm(channel.dd))
        consistent = {
            Unitality.UNITAL: d_norm < tol and dd_norm < tol,
            Unitality.NONUNITAL_CONST_SHIFT: dd_norm < tol,
            Unitality.NONUNITAL_PARAM_DEP_SHIFT: True,
        }[family.unitality]
        if not consistent:
            raise BranchError(
                f"channel '{family.name}' is labelled {family.unitality.value} but |d|={d_norm:.3g}, |dd|={dd_norm:.3g}"
            )

    def svd3(self, M: np.ndarray) -> SvdDecomp:
        """SVD 3x3 determinística: M = A·diag(S)·B, S decrescente

        O sinal de cada vetor singular à direita é escolhido de forma que
        sua maior componente (em módulo) seja positiva.
        """
        U, S, Vh = np.linalg.svd(np.asarray(M, dtype=float))
        U, Vh = U.copy(), Vh.copy()
        for i in range(3):
            pivot = int(np.argmax(np.abs(Vh[i])))
            if Vh[i, pivot] < 0:
                Vh[i] *= -1
                U[:, i] *= -1
        return SvdDecomp(A=U, S=S, B=Vh)

    def bloch_from_kraus(self, kraus: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
        """Extrai (M, d) de um conjunto de Kraus: T_ba = ½Tr[σ_b Φ(σ_a)]"""
        transfer = np.zeros((4, 4))
        for a in range(4):
            image = sum(E @ PAULI_MATRICES[a] @ E.conj().T for E in kraus)
            for b in range(4):
                transfer[b, a] = 0.5 * np.real(np.trace(PAULI_MATRICES[b] @ image))
        return transfer[1:, 1:], transfer[1:, 0]
