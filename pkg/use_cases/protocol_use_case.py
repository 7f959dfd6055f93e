"""
Protocol Use Case - Montagem e comparação de protocolos SQSC e correlacionados
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import structlog

from config.settings import Settings, settings
from entities.bloch_channel import BlochChannel, ChannelFamily, Unitality
from entities.exceptions import BranchError, DomainError, NumericError
from entities.fisher_result import ProbModel
from entities.pauli_state import PauliState
from entities.protocol import (
    BuiltState,
    EscherRow,
    GainReport,
    GainStatus,
    MeasurementRecord,
    NonUnitalCheck,
    ProtocolKind,
    ProtocolQfi,
    ProtocolSpec,
)

from .bloch_use_case import BlochUseCase
from .fisher_use_case import FisherUseCase
from .mstate_use_case import MStateUseCase
from .series_use_case import SeriesUseCase

logger = structlog.get_logger(__name__)

T = TypeVar('T')
R = TypeVar('R')

NONUNITAL_TOL = 1e-8
GROUPING_TOL = 1e-10
UNDEFINED_QFI = 1e-30
CANONICAL_TOL = 1e-9


class ProtocolUseCase:
    def __init__(
        self,
        mstate_use_case: Optional[MStateUseCase] = None,
        fisher_use_case: Optional[FisherUseCase] = None,
        series_use_case: Optional[SeriesUseCase] = None,
        bloch_use_case: Optional[BlochUseCase] = None,
        config: Settings = settings,
    ):
        self.config = config
        self.mstate = mstate_use_case or MStateUseCase(config)
        self.fisher = fisher_use_case or FisherUseCase(config)
        self.bloch = bloch_use_case or BlochUseCase(config)
        self.series = series_use_case or SeriesUseCase(self.mstate, self.bloch, config)

    # Especificações prontas

    def canonical_directions(self, ch: BlochChannel) -> Tuple[np.ndarray, np.ndarray]:
        return self.series.canonical_directions(ch)

    def canonical_spec(self, family: ChannelFamily, lam: float, r: float, n: int) -> ProtocolSpec:
        """Protocolo correlacionado com c = Bᵀe1 e r0 = Bᵀe2"""
        c, r0 = self.canonical_directions(family.eval(lam))
        return ProtocolSpec.correlated(family, lam, r, n, c, r0)

    def optimal_sqsc_spec(self, family: ChannelFamily, lam: float, r: float) -> ProtocolSpec:
        """SQSC com a direção inicial ótima de menor ordem"""
        ch = family.eval(lam)
        if ch.is_unital(self.config.UNITALITY_TOL):
            r0 = self.series.sqsc_unital_opt(ch).r0_opt
        elif family.unitality is Unitality.NONUNITAL_CONST_SHIFT:
            r0 = self.series.sqsc_nonunital_const_opt(ch).r0_opt
        else:
            r0 = np.array([0.0, 0.0, 1.0])
        return ProtocolSpec.sqsc(family, lam, r, r0)

    # Estados

    def _prepared(self, spec: ProtocolSpec) -> PauliState:
        state = self.mstate.initial_state(spec.n, spec.r, spec.r0)
        if spec.is_correlated:
            state = self.mstate.conjugate_pairwise(state, spec.c)
        return state

    def _pauli_state(self, spec: ProtocolSpec, ch: BlochChannel) -> Tuple[PauliState, PauliState]:
        state = self._prepared(spec)
        return self.mstate.apply_channel(state, ch, 0), self.mstate.apply_channel(state, ch, 0, derivative=True)

    def build_state(self, spec: ProtocolSpec, max_order: Optional[int] = None) -> BuiltState:
        """Estado ρ_f (denso em r fixo) e suas ordens em r, ambos com ∂/∂λ analítica"""
        ch = spec.family.eval(spec.lam)
        pauli, dpauli = self._pauli_state(spec, ch)
        ordered = self.mstate.prepare_orders(ch, spec.n, spec.r0, spec.c, max_order)
        rho, drho = self.mstate.to_dense(pauli), self.mstate.to_dense(dpauli)
        if abs(rho.trace() - 1) > 1e-12:
            raise NumericError(f"built state has trace {rho.trace().real!r}")
        return BuiltState(spec=spec, pauli=pauli, dpauli=dpauli, rho=rho, drho=drho, ordered=ordered)

    def protocol_qfi(self, spec: ProtocolSpec, max_order: Optional[int] = None) -> ProtocolQfi:
        """QFI exata (oráculo denso) e a estimativa pela série, por invocação do canal"""
        built = self.build_state(spec, max_order)
        exact = self.fisher.qfi_exact(built.rho, built.drho)
        series = self.series.qfi_orders(
            built.ordered,
            self.series.sld_orders(built.ordered),
            meta=spec.describe(),
        )
        estimate = self.series.series_estimate(series, spec.r, spec.n)
        logger.debug("QFI do protocolo", kind=spec.kind.value, n=spec.n, lam=spec.lam, r=spec.r, exact=exact)
        return ProtocolQfi(exact=exact, series_estimate=estimate, series=series)

    def exact_qfi(self, spec: ProtocolSpec) -> float:
        """Só o oráculo denso, sem a série (aceita ρ^(0) singular)"""
        ch = spec.family.eval(spec.lam)
        pauli, dpauli = self._pauli_state(spec, ch)
        return self.fisher.qfi_exact(self.mstate.to_dense(pauli), self.mstate.to_dense(dpauli))

    # Medição local

    def _outcome_tensor(self, state: PauliState, r0: np.ndarray) -> np.ndarray:
        """p[s0, ..., s_{n−1}] para projetores (I ± σ·r0)/2, s = 0 para +"""
        response = np.array([np.concatenate(([1.0], r0)), np.concatenate(([1.0], -r0))])
        tensor = state.tensor()
        for _ in range(state.n):
            tensor = np.tensordot(tensor, response, axes=([0], [1]))
        return tensor

    def _probabilities(self, spec: ProtocolSpec, lam: float) -> np.ndarray:
        # u_prep é Hermitiano e involutivo: desfaz a preparação após o canal
        state = self.mstate.apply_channel(self._prepared(spec), spec.family.eval(lam), 0)
        state = self.mstate.conjugate_pairwise(state, spec.c)
        return self._outcome_tensor(state, spec.r0)

    def _slope(self, spec: ProtocolSpec, h: float) -> np.ndarray:
        lo, hi = spec.family.domain
        lam = spec.lam
        if lam - h >= lo and lam + h <= hi:
            return (self._probabilities(spec, lam + h) - self._probabilities(spec, lam - h)) / (2 * h)
        step = h if lam - h < lo else -h
        f0, f1, f2 = (self._probabilities(spec, lam + k * step) for k in range(3))
        return (-3 * f0 + 4 * f1 - f2) / (2 * step)

    def _group(self, tensor: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Soma sobre os resultados com o mesmo sinal no qubit 0 e k '+' nos demais"""
        n = tensor.ndim
        flat = tensor.reshape(2, -1)
        # bit 1 = resultado '−'
        plus_counts = np.array([n - 1 - bin(i).count('1') for i in range(2 ** (n - 1))], dtype=int)
        grouped = np.zeros((2, n))
        for k in range(n):
            grouped[:, k] = flat[:, plus_counts == k].sum(axis=1)
        return grouped[0], grouped[1]

    def local_measurement_sim(self, spec: ProtocolSpec, h: Optional[float] = None, ungrouped: bool = True) -> MeasurementRecord:
        """u_prep após o canal, medida local de cada qubit ao longo de r0 e CFI agrupada por (sinal, k)"""
        if not spec.is_correlated:
            raise DomainError("local measurement scheme needs a correlated protocol")
        h = self.config.MEASUREMENT_FD_STEP if h is None else h
        probabilities = self._probabilities(spec, spec.lam)
        slope = self._slope(spec, h)

        p_plus, p_minus = self._group(probabilities)
        dp_plus, dp_minus = self._group(slope)
        grouped_model = ProbModel(np.concatenate([p_plus, p_minus]), np.concatenate([dp_plus, dp_minus]))
        cfi = self.fisher.cfi(grouped_model)

        full_cfi = None
        if ungrouped:
            full_cfi = self.fisher.cfi(ProbModel(probabilities.reshape(-1), slope.reshape(-1)))
            if abs(full_cfi - cfi) > GROUPING_TOL * max(1.0, full_cfi):
                logger.warning("Agrupamento (sinal, k) perdeu informação", grouped=cfi, ungrouped=full_cfi, n=spec.n, r=spec.r)
        return MeasurementRecord(
            n=spec.n, p_plus=p_plus, p_minus=p_minus, dp_plus=dp_plus, dp_minus=dp_minus,
            cfi=cfi, ungrouped_cfi=full_cfi,
        )

    def is_canonical(self, ch: BlochChannel, c: Sequence[float], r0: Sequence[float]) -> bool:
        """c e r0 são vetores singulares à direita de Ṁ para s1 e s2, ortogonais entre si"""
        svd = self.bloch.svd3(ch.dM)
        gram = ch.dM.T @ ch.dM
        c, r0 = np.asarray(c, dtype=float), np.asarray(r0, dtype=float)
        return bool(
            np.linalg.norm(gram @ c - svd.s1 ** 2 * c) < CANONICAL_TOL
            and np.linalg.norm(gram @ r0 - svd.s2 ** 2 * r0) < CANONICAL_TOL
            and abs(c @ r0) < CANONICAL_TOL
        )

    def measurement_cfi_lowest_order(self, ch: BlochChannel, n: int, c: Sequence[float], r0: Sequence[float]) -> float:
        """(n−1)s1² + s2² para as direções canônicas"""
        if not ch.is_unital(self.config.UNITALITY_TOL):
            raise BranchError("measurement formula needs a unital channel")
        if not self.is_canonical(ch, c, r0):
            raise DomainError("canonical measurement formula needs c = Bᵀe1 and r0 = Bᵀe2")
        svd = self.bloch.svd3(ch.dM)
        return (n - 1) * svd.s1 ** 2 + svd.s2 ** 2

    def measurement_cfi_general(self, ch: BlochChannel, n: int, c: Sequence[float], r0: Sequence[float]) -> float:
        """(r0ᵀṀr0)² + (n−1)(cᵀṀc)², coeficiente de r² para direções quaisquer"""
        if not ch.is_unital(self.config.UNITALITY_TOL):
            raise BranchError("measurement formula needs a unital channel")
        c, r0 = np.asarray(c, dtype=float), np.asarray(r0, dtype=float)
        return float((r0 @ ch.dM @ r0) ** 2 + (n - 1) * (c @ ch.dM @ c) ** 2)

    # Comparação e demonstrações

    def compare(self, spec_a: ProtocolSpec, spec_b: ProtocolSpec) -> GainReport:
        """Razão das QFIs por invocação de A sobre B, com os limites de ganho"""
        if spec_a.family.name != spec_b.family.name or spec_a.lam != spec_b.lam:
            raise DomainError("compared protocols must use the same channel family and lambda")
        qa, qb = self.protocol_qfi(spec_a), self.protocol_qfi(spec_b)
        nr2 = max(spec_a.n * spec_a.r ** 2, spec_b.n * spec_b.r ** 2)
        note = f"series ratio valid only for n*r^2 << 1 (n*r^2 = {nr2:.3g})"
        report = dict(exact_a=qa.exact, exact_b=qb.exact, series_a=qa.series_estimate, series_b=qb.series_estimate, note=note)

        if abs(qb.exact) < UNDEFINED_QFI:
            logger.warning("Ganho indefinido: QFI de referência nula", channel=spec_a.family.name, lam=spec_a.lam)
            return GainReport(status=GainStatus.UNDEFINED, **report)

        ratio_exact = qa.exact / qb.exact
        ratio_series = qa.series_estimate / qb.series_estimate if abs(qb.series_estimate) >= UNDEFINED_QFI else None
        ch = spec_a.family.eval(spec_a.lam)
        bound_lo = bound_hi = None
        violations: List[str] = []
        if spec_a.is_correlated and spec_b.kind is ProtocolKind.SQSC and ch.is_unital(self.config.UNITALITY_TOL):
            try:
                ratio = self.series.corr_gain_ratio(ch, spec_a.n)
            except NumericError:
                return GainReport(status=GainStatus.UNDEFINED, ratio_exact=ratio_exact, ratio_series=ratio_series, **report)
            bound_lo, bound_hi = ratio.lo, ratio.hi
            slack = self.config.GAIN_TOLERANCE + nr2
            if ratio_exact < bound_lo * (1 - slack):
                violations.append(f"exact ratio {ratio_exact:.6g} below lower bound {bound_lo:.6g}")
            if ratio_exact > bound_hi * (1 + slack):
                violations.append(f"exact ratio {ratio_exact:.6g} above upper bound {bound_hi:.6g}")
        status = GainStatus.VIOLATION if violations else GainStatus.OK
        if violations:
            logger.warning("Razão de ganho fora dos limites", violations=violations)
        return GainReport(
            status=status, ratio_exact=ratio_exact, ratio_series=ratio_series,
            bound_lo=bound_lo, bound_hi=bound_hi, violations=violations, **report,
        )

    def escher_phase_flip_demo(self, lams: Iterable[float], rs: Iterable[float]) -> List[EscherRow]:
        """Limite 1/[λ(1−λ)] contra a QFI ótima 4r²/[1−(1−2λ)²r²] do phase flip"""
        rows = []
        rs = list(rs)
        for lam in lams:
            if not 0 < lam < 1:
                raise DomainError(f"Escher demonstration needs lambda in (0, 1), got {lam!r}")
            for r in rs:
                if not 0 <= r < 1:
                    raise DomainError(f"Escher demonstration needs r in [0, 1), got {r!r}")
                row = EscherRow(
                    lam=float(lam),
                    r=float(r),
                    escher_bound=1 / (lam * (1 - lam)),
                    exact_qfi=4 * r ** 2 / (1 - (1 - 2 * lam) ** 2 * r ** 2),
                )
                if row.slack <= 0:
                    raise NumericError(f"Escher bound not above the exact QFI at lambda={lam}, r={r}")
                rows.append(row)
        return rows

    def nonunital_corr_equals_sqsc_check(self, family: ChannelFamily, n: int, lam: float) -> NonUnitalCheck:
        """Em r = 0 o protocolo correlacionado não ganha nada sobre o SQSC"""
        if family.unitality is not Unitality.NONUNITAL_PARAM_DEP_SHIFT:
            raise BranchError(f"channel '{family.name}' has no parameter-dependent shift")
        ch = family.eval(lam)
        self.bloch.check_unitality(family, ch)
        z, x = np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])
        sqsc = self.exact_qfi(ProtocolSpec.sqsc(family, lam, 0.0, z))
        correlated = self.exact_qfi(ProtocolSpec.correlated(family, lam, 0.0, n, x, z))
        check = NonUnitalCheck(
            n=n, lam=lam, correlated_qfi=correlated, sqsc_qfi=sqsc,
            closed_form_h0=self.series.sqsc_nonunital_h0(ch), tol=NONUNITAL_TOL,
        )
        if not check.equal:
            logger.warning("QFI correlacionada difere do SQSC em r = 0", **check.to_dict())
        return check

    # Varreduras

    def sweep(self, func: Callable[[T], R], cells: Sequence[T], jobs: Optional[int] = None) -> List[R]:
        """Avalia as células em paralelo; a ordem do resultado é a da entrada"""
        jobs = self.config.JOBS if jobs is None else jobs
        if jobs <= 1:
            return [func(cell) for cell in cells]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, cells))


__all__ = ['ProtocolUseCase']
