"""
Series Use Case - QFI em série de potências da pureza

Resolve a SLD ordem por ordem na autobase de ρ^(0), monta os termos H^(j)
e expõe as fórmulas fechadas de menor ordem para os protocolos SQSC e
correlacionado, os limites de H^(2) e os termos H^(3)/H^(4).
"""

from typing import List, Optional, Sequence

import numpy as np
import structlog
from scipy.optimize import minimize

from config.settings import Settings, settings
from entities.bloch_channel import BlochChannel
from entities.exceptions import BranchError, DimensionError, DomainError, NumericError
from entities.pauli_state import DenseOperator, OrderedState
from entities.qfi_series import (
    CorrBounds,
    DirectionSearch,
    FitResult,
    GainRatio,
    HigherOrders,
    QfiSeries,
    SldSeries,
    SqscOptimum,
)

from .bloch_use_case import BlochUseCase
from .mstate_use_case import MStateUseCase

logger = structlog.get_logger(__name__)

PERPENDICULAR_TOL = 1e-9
GOLDEN_ANGLE = np.pi * (3 - np.sqrt(5))


def spherical(theta: float, phi: float) -> np.ndarray:
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def fibonacci_sphere(count: int) -> np.ndarray:
    """`count` direções quase uniformes na esfera"""
    i = np.arange(count)
    z = 1 - (2 * i + 1) / count
    radius = np.sqrt(1 - z ** 2)
    phi = i * GOLDEN_ANGLE
    return np.stack([radius * np.cos(phi), radius * np.sin(phi), z], axis=1)


class SeriesUseCase:
    def __init__(
        self,
        mstate_use_case: Optional[MStateUseCase] = None,
        bloch_use_case: Optional[BlochUseCase] = None,
        config: Settings = settings,
    ):
        self.config = config
        self.mstate = mstate_use_case or MStateUseCase(config)
        self.bloch = bloch_use_case or BlochUseCase(config)

    # Verificações de ramo

    def _require_unital(self, ch: BlochChannel) -> None:
        if not ch.is_unital(self.config.UNITALITY_TOL):
            raise BranchError(
                f"operation needs a unital channel, got |d|={np.linalg.norm(ch.d):.3g}, |dd|={np.linalg.norm(ch.dd):.3g}"
            )

    def _unit(self, vector: Sequence[float], name: str) -> np.ndarray:
        vector = np.asarray(vector, dtype=float).reshape(-1)
        if vector.shape != (3,) or abs(np.linalg.norm(vector) - 1) > self.config.UNIT_TOL:
            raise DomainError(f"{name} must be a unit 3-vector, got {vector.tolist()}")
        return vector

    # Série genérica

    def sld_orders(self, state: OrderedState, K: Optional[int] = None) -> SldSeries:
        """Termos L^(k) a partir de ∂ρ^(k) = ½ Σ_j (L^(k−j)ρ^(j) + ρ^(j)L^(k−j))

        Cada ordem resolve L^(k)ρ^(0) + ρ^(0)L^(k) = 2R na autobase de ρ^(0),
        com R o lado esquerdo menos os termos já conhecidos.
        """
        K = state.max_order if K is None else K
        rho = [self.mstate.to_dense(state.order(j)).entries for j in range(K + 1)]
        drho = [self.mstate.to_dense(state.derivative(j)).entries for j in range(K + 1)]

        eigenvalues, eigenvectors = np.linalg.eigh(rho[0])
        if eigenvalues[0] <= self.config.PSD_TOL:
            raise NumericError(f"zeroth-order state is singular (smallest eigenvalue {eigenvalues[0]!r})")
        denominators = eigenvalues[:, None] + eigenvalues[None, :]

        slds: List[np.ndarray] = []
        for k in range(K + 1):
            rhs = drho[k].copy()
            for j in range(1, k + 1):
                lower = slds[k - j]
                rhs -= 0.5 * (lower @ rho[j] + rho[j] @ lower)
            rotated = eigenvectors.conj().T @ rhs @ eigenvectors
            L = eigenvectors @ (2 * rotated / denominators) @ eigenvectors.conj().T
            slds.append(0.5 * (L + L.conj().T))
        return SldSeries(tuple(DenseOperator(state.n, L) for L in slds))

    def qfi_orders(self, state: OrderedState, sld: SldSeries, K: Optional[int] = None, meta: Optional[dict] = None) -> QfiSeries:
        """H^(j) = Σ_k Tr[∂ρ^(j−k) L^(k)]"""
        K = sld.K if K is None else K
        if K > sld.K:
            raise DimensionError(f"SLD series has order {sld.K}, requested {K}")
        drho = [self.mstate.to_dense(state.derivative(j)).entries for j in range(K + 1)]
        orders = np.zeros(K + 1)
        for j in range(K + 1):
            orders[j] = sum(np.real(np.trace(drho[j - k] @ sld.orders[k].entries)) for k in range(j + 1))
        return QfiSeries(orders, meta=dict(meta or {}))

    def protocol_series(
        self,
        ch: BlochChannel,
        n: int,
        r0: Sequence[float],
        c: Optional[Sequence[float]] = None,
        K: Optional[int] = None,
    ) -> QfiSeries:
        """Série completa da QFI para SQSC (n = 1) ou para o protocolo correlacionado"""
        K = self.config.MAX_SERIES_ORDER if K is None else K
        state = self.mstate.prepare_orders(ch, n, r0, c, K)
        series = self.qfi_orders(state, self.sld_orders(state, K), K, meta={'n': n})
        if ch.is_unital(self.config.UNITALITY_TOL) and max(abs(series.order(0)), abs(series.order(1))) > 1e-10:
            raise NumericError(f"unital series has non-zero low orders {series.orders[:2].tolist()}")
        return series

    def series_estimate(self, series: QfiSeries, r: float, n: int) -> float:
        """Σ r^j H^(j), avisando quando n·r² sai do regime de validade"""
        if n * r ** 2 > self.config.SERIES_WARN_NR2:
            logger.warning("Série fora do regime de validade", n=n, r=r, nr2=n * r ** 2)
        return series.estimate(r)

    # Fórmulas fechadas, SQSC

    def sqsc_unital_h2(self, ch: BlochChannel, r0: Sequence[float]) -> float:
        """r0ᵀ Ṁᵀ Ṁ r0"""
        self._require_unital(ch)
        slope = ch.dM @ self._unit(r0, 'r0')
        return float(slope @ slope)

    def sqsc_unital_opt(self, ch: BlochChannel) -> SqscOptimum:
        """h2_opt = s1², r0_opt = Bᵀe1 e direção de medição A·e1"""
        self._require_unital(ch)
        svd = self.bloch.svd3(ch.dM)
        informative = svd.s1 > 0
        if not informative:
            logger.warning("Canal sem informação sobre λ (s1 = 0)")
        return SqscOptimum(
            h2_opt=svd.s1 ** 2,
            r0_opt=svd.right_vector(0),
            meas_dir=svd.left_vector(0),
            informative=informative,
        )

    def sqsc_nonunital_h0(self, ch: BlochChannel) -> float:
        """ḋ·ḋ + [∂(d²)/∂λ]²/(4(1−d²))"""
        if np.linalg.norm(ch.dd) < self.config.UNITALITY_TOL:
            raise BranchError("zeroth-order QFI needs a parameter-dependent shift (dd = 0)")
        d2 = float(ch.d @ ch.d)
        base = float(ch.dd @ ch.dd)
        if d2 >= 1 - self.config.VALIDATION_TOL:
            return base
        return base + (2 * float(ch.d @ ch.dd)) ** 2 / (4 * (1 - d2))

    def _const_shift_matrix(self, ch: BlochChannel) -> np.ndarray:
        d2 = float(ch.d @ ch.d)
        if d2 < self.config.UNITALITY_TOL ** 2 or np.linalg.norm(ch.dd) >= self.config.UNITALITY_TOL:
            raise BranchError("operation needs a constant non-zero shift (d != 0, dd = 0)")
        if d2 >= 1 - self.config.VALIDATION_TOL:
            raise DomainError(f"constant shift needs |d| < 1, got {np.sqrt(d2)!r}")
        d_hat = ch.d / np.sqrt(d2)
        projector = np.outer(d_hat, d_hat)
        return ch.dM.T @ ch.dM + d2 / (1 - d2) * ch.dM.T @ projector @ ch.dM

    def sqsc_nonunital_const_h2(self, ch: BlochChannel, r0: Sequence[float]) -> float:
        """r0ᵀ[ṀᵀṀ + d²/(1−d²)·ṀᵀP_d̂Ṁ]r0"""
        r0 = self._unit(r0, 'r0')
        return float(r0 @ self._const_shift_matrix(ch) @ r0)

    def sqsc_nonunital_const_opt(self, ch: BlochChannel) -> SqscOptimum:
        """Maximiza o h2 de deslocamento constante: autovetor dominante da forma quadrática"""
        values, vectors = np.linalg.eigh(self._const_shift_matrix(ch))
        r0 = vectors[:, -1]
        pivot = int(np.argmax(np.abs(r0)))
        r0 = r0 if r0[pivot] >= 0 else -r0
        slope = ch.dM @ r0
        norm = np.linalg.norm(slope)
        return SqscOptimum(
            h2_opt=float(max(values[-1], 0.0)),
            r0_opt=r0,
            meas_dir=slope / norm if norm > 0 else r0,
            informative=bool(values[-1] > 0),
        )

    # Protocolo correlacionado

    def corr_h2(self, ch: BlochChannel, n: int, c: Sequence[float], r0: Sequence[float]) -> float:
        """r0ᵀ[(I−Pc)G(I−Pc) + (2−n)·Pc·G·Pc]r0 + (n−1)·cᵀGc, com G = ṀᵀṀ"""
        self._require_unital(ch)
        if n < 2:
            raise DimensionError(f"correlated protocol needs n >= 2, got {n}")
        c, r0 = self._unit(c, 'c'), self._unit(r0, 'r0')
        gram = ch.dM.T @ ch.dM
        pc = np.outer(c, c)
        qc = np.eye(3) - pc
        form = qc @ gram @ qc + (2 - n) * pc @ gram @ pc
        return float(r0 @ form @ r0 + (n - 1) * c @ gram @ c)

    def corr_bounds(self, ch: BlochChannel, n: int) -> CorrBounds:
        """lower = n·s1² − s1²(1 − s2²/s1²), upper = n·s1²"""
        self._require_unital(ch)
        if n < 2:
            raise DimensionError(f"correlated protocol needs n >= 2, got {n}")
        svd = self.bloch.svd3(ch.dM)
        if svd.s1 == 0:
            return CorrBounds(lower=0.0, upper=0.0)
        s1_sq, s2_sq = svd.s1 ** 2, svd.s2 ** 2
        return CorrBounds(lower=n * s1_sq - s1_sq * (1 - s2_sq / s1_sq), upper=n * s1_sq)

    def corr_gain_ratio(self, ch: BlochChannel, n: int) -> GainRatio:
        """Limites da razão H_corr_opt/H_s_opt: (n − (1 − s2²/s1²), n)"""
        self._require_unital(ch)
        svd = self.bloch.svd3(ch.dM)
        if svd.s1 == 0:
            raise NumericError("gain ratio undefined: channel carries no information (s1 = 0)")
        return GainRatio(lo=n - (1 - svd.s2 ** 2 / svd.s1 ** 2), hi=float(n))

    def corr_h3_h4(self, ch: BlochChannel, n: int, c: Sequence[float], r0: Sequence[float]) -> HigherOrders:
        """
        H^(3) = 0 e a forma fechada publicada de H^(4) para c ⊥ r0 (n ≥ 3); n = 2 usa a série genérica.

        A forma fechada não coincide com a QFI exata (no depolarizante dá (n−1) + λ²n(3n−2),
        enquanto a série e o oráculo denso dão 0 para n = 2); o valor confiável é generic_h3_h4.
        """
        self._require_unital(ch)
        c, r0 = self._unit(c, 'c'), self._unit(r0, 'r0')
        if abs(c @ r0) > PERPENDICULAR_TOL:
            raise DomainError(f"closed-form H^(4) needs c perpendicular to r0, c·r0 = {c @ r0!r}")
        if n < 2:
            raise DimensionError(f"correlated protocol needs n >= 2, got {n}")
        if n == 2:
            return self.generic_h3_h4(ch, n, c, r0)

        M, dM = ch.M, ch.dM
        gram = dM.T @ dM
        dgram = dM.T @ M + M.T @ dM
        cross = np.cross(r0, c)
        dcross = np.cross(dM @ r0, M @ c) + np.cross(M @ r0, dM @ c)
        c_term = float(c @ dgram @ c)
        h4 = (
            (n - 1) * float(cross @ gram @ cross)
            + 0.25 * (float(r0 @ dgram @ r0) + (n - 1) * c_term) ** 2
            + (n - 1) * float(dcross @ dcross)
            + (n - 1) * (n - 2) / 2 * c_term ** 2
        )
        return HigherOrders(h3=0.0, h4=h4, method="closed_form")

    def generic_h3_h4(self, ch: BlochChannel, n: int, c: Sequence[float], r0: Sequence[float]) -> HigherOrders:
        """H^(3) e H^(4) do protocolo correlacionado pela série de SLD ordem a ordem"""
        self._require_unital(ch)
        if n < 2:
            raise DimensionError(f"correlated protocol needs n >= 2, got {n}")
        series = self.protocol_series(ch, n, r0, c, K=4)
        return HigherOrders(h3=series.order(3), h4=series.order(4), method="generic")

    def saturating_basis_lowest_order(self, drho1: DenseOperator) -> List[DenseOperator]:
        """Projetores na autobase de ∂ρ^(1)/∂λ; operador nulo dá a base canônica"""
        if not drho1.is_hermitian(self.config.HERMITIAN_TOL):
            raise NumericError(f"first-order derivative is not Hermitian (defect {drho1.hermitian_defect():.3g})")
        _, vectors = np.linalg.eigh(drho1.entries)
        return [DenseOperator(drho1.n, np.outer(v, v.conj())) for v in vectors.T]

    def canonical_directions(self, ch: BlochChannel):
        """(c*, r0*) = (Bᵀe1, Bᵀe2) da SVD de Ṁ"""
        svd = self.bloch.svd3(ch.dM)
        return svd.right_vector(0), svd.right_vector(1)

    def direction_search(self, ch: BlochChannel, n: int, grid: Optional[int] = None) -> DirectionSearch:
        """Maximiza corr_h2 numa grade de direções e refina com Nelder–Mead"""
        self._require_unital(ch)
        grid = self.config.DIRECTION_GRID if grid is None else grid
        points = fibonacci_sphere(grid)
        c_star, r0_star = self.canonical_directions(ch)
        canonical = self.corr_h2(ch, n, c_star, r0_star)

        grid_max, best = -np.inf, (c_star, r0_star)
        for c in points:
            for r0 in points:
                value = self.corr_h2(ch, n, c / np.linalg.norm(c), r0 / np.linalg.norm(r0))
                if value > grid_max:
                    grid_max, best = value, (c, r0)
        start_value = max(grid_max, canonical)
        if canonical >= grid_max:
            best = (c_star, r0_star)

        def angles(v: np.ndarray):
            v = v / np.linalg.norm(v)
            return np.arccos(np.clip(v[2], -1, 1)), np.arctan2(v[1], v[0])

        def objective(x: np.ndarray) -> float:
            return -self.corr_h2(ch, n, spherical(x[0], x[1]), spherical(x[2], x[3]))

        x0 = np.array([*angles(best[0]), *angles(best[1])])
        result = minimize(objective, x0, method='Nelder-Mead', options={'xatol': 1e-10, 'fatol': 1e-13, 'maxiter': 4000})
        if -result.fun > start_value:
            c_best, r0_best, h2 = spherical(*result.x[:2]), spherical(*result.x[2:]), float(-result.fun)
        else:
            c_best, r0_best, h2 = best[0] / np.linalg.norm(best[0]), best[1] / np.linalg.norm(best[1]), float(start_value)
        logger.debug("Busca de direções concluída", n=n, grid_max=grid_max, refined=h2, canonical=canonical)
        return DirectionSearch(c=c_best, r0=r0_best, h2=h2, grid_max=float(grid_max), canonical=canonical)

    # Ajuste polinomial

    def fit_orders(
        self,
        r_samples: Sequence[float],
        values: Sequence[float],
        max_power: int,
        min_order: int = 0,
    ) -> FitResult:
        """Mínimos quadrados de Σ_{j=min_order..max_power} a_j r^j com colunas normalizadas"""
        r = np.asarray(r_samples, dtype=float)
        y = np.asarray(values, dtype=float)
        powers = np.arange(min_order, max_power + 1)
        if r.size < powers.size:
            raise NumericError(f"need at least {powers.size} purity samples for the fit, got {r.size}")
        vandermonde = r[:, None] ** powers[None, :]
        scale = np.max(np.abs(vandermonde), axis=0)
        scaled = vandermonde / scale
        condition = float(np.linalg.cond(scaled))
        if not np.isfinite(condition) or condition > self.config.FIT_MAX_CONDITION:
            raise NumericError(f"ill-conditioned purity fit: condition number {condition:.3e}")
        solution, residuals, _, _ = np.linalg.lstsq(scaled, y, rcond=None)
        residual = float(np.sqrt(residuals[0])) if residuals.size else float(np.linalg.norm(scaled @ solution - y))
        return FitResult(coefficients=solution / scale, min_order=min_order, condition=condition, residual=residual)

    def fit_samples(self, count: Optional[int] = None, r_min: Optional[float] = None, r_max: Optional[float] = None) -> np.ndarray:
        """Purezas log-espaçadas para o ajuste"""
        return np.geomspace(
            self.config.FIT_R_MIN if r_min is None else r_min,
            self.config.FIT_R_MAX if r_max is None else r_max,
            self.config.FIT_SAMPLES if count is None else count,
        )
