"""
MState Use Case - Álgebra de n qubits na base de strings de Pauli

Estados, porta preparatória par a par, aplicação de canais de um qubit,
decomposição em ordens de pureza e conversão para matrizes densas.
"""

from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np
import structlog

from config.settings import Settings, settings
from entities.bloch_channel import BlochChannel
from entities.exceptions import DimensionError, DomainError, NumericError
from entities.pauli_state import (
    PAULI_MATRICES,
    DenseOperator,
    OrderedState,
    PauliState,
    letter_weights,
)

logger = structlog.get_logger(__name__)

StateLike = Union[PauliState, OrderedState]

_TWO_QUBIT_PAULIS = np.einsum('aij,bkl->abikjl', PAULI_MATRICES, PAULI_MATRICES).reshape(16, 4, 4)


def sigma(direction: Sequence[float]) -> np.ndarray:
    """σ·v para um 3-vetor v"""
    return np.tensordot(np.asarray(direction, dtype=float), PAULI_MATRICES[1:], axes=1)


def embed(operators: dict, n: int) -> np.ndarray:
    """Produto tensorial com operadores 2x2 nas posições dadas e identidade no resto"""
    result = np.ones((1, 1), dtype=complex)
    for qubit in range(n):
        result = np.kron(result, operators.get(qubit, PAULI_MATRICES[0]))
    return result


class MStateUseCase:
    def __init__(self, config: Settings = settings):
        self.config = config

    # Limites de tamanho

    def _check_pauli_n(self, n: int) -> None:
        if n < 1 or n > self.config.PAULI_MAX_QUBITS:
            raise DimensionError(f"n={n} outside the Pauli-basis range 1..{self.config.PAULI_MAX_QUBITS}")

    def _check_dense_n(self, n: int) -> None:
        if n < 1 or n > self.config.DENSE_MAX_QUBITS:
            raise DimensionError(f"n={n} outside the dense range 1..{self.config.DENSE_MAX_QUBITS}")

    def _unit(self, vector: Sequence[float], name: str) -> np.ndarray:
        vector = np.asarray(vector, dtype=float).reshape(-1)
        if vector.shape != (3,) or abs(np.linalg.norm(vector) - 1) > self.config.UNIT_TOL:
            raise DomainError(f"{name} must be a unit 3-vector, got {vector.tolist()}")
        return vector

    # Estados iniciais e ordens de pureza

    def initial_state(self, n: int, r: float, r0: Sequence[float]) -> PauliState:
        """((I + r σ·r0)/2)^⊗n na base de Pauli"""
        self._check_pauli_n(n)
        if not 0 <= r <= 1:
            raise DomainError(f"purity r={r!r} outside [0, 1]")
        r0 = self._unit(r0, 'r0')
        single = np.concatenate(([0.5], 0.5 * r * r0))
        coeffs = np.ones(1)
        for _ in range(n):
            coeffs = np.kron(coeffs, single)
        return PauliState(n, coeffs)

    def order_decompose(self, unit_purity_state: PauliState, max_order: Optional[int] = None) -> OrderedState:
        """Separa um estado produto em potências de r

        Recebe o estado avaliado em r = 1: num produto de fatores
        (I + r σ·r0)/2, o coeficiente de uma string com k letras não
        identidade é proporcional a r^k.
        """
        n = unit_purity_state.n
        max_order = n if max_order is None else max_order
        weights = letter_weights(n)
        orders = [PauliState(n, np.where(weights == j, unit_purity_state.coeffs, 0.0)) for j in range(max_order + 1)]
        return OrderedState(n, tuple(orders))

    def initial_orders(self, n: int, r0: Sequence[float], max_order: Optional[int] = None) -> OrderedState:
        return self.order_decompose(self.initial_state(n, 1.0, r0), max_order)

    # Porta preparatória

    def u_c(self, c: Sequence[float]) -> DenseOperator:
        """(I⊗I + I⊗σc + σc⊗I − σc⊗σc)/2"""
        sc = sigma(self._unit(c, 'c'))
        eye = PAULI_MATRICES[0]
        return DenseOperator(2, 0.5 * (np.kron(eye, eye) + np.kron(eye, sc) + np.kron(sc, eye) - np.kron(sc, sc)))

    def _u_c_on_pair(self, sc: np.ndarray, n: int, first: int, second: int) -> np.ndarray:
        identity = np.eye(2 ** n, dtype=complex)
        return 0.5 * (
            identity
            + embed({second: sc}, n)
            + embed({first: sc}, n)
            - embed({first: sc, second: sc}, n)
        )

    def u_prep(self, n: int, c: Sequence[float]) -> DenseOperator:
        """Produto de u_c sobre os n(n−1)/2 pares de qubits"""
        if n < 2:
            raise DimensionError(f"preparatory unitary needs n >= 2, got {n}")
        self._check_dense_n(n)
        sc = sigma(self._unit(c, 'c'))
        total = np.eye(2 ** n, dtype=complex)
        for first, second in combinations(range(n), 2):
            total = self._u_c_on_pair(sc, n, first, second) @ total
        return DenseOperator(n, total)

    def pair_transfer(self, c: Sequence[float]) -> np.ndarray:
        """Matriz 16x16 real R[b, a] = Tr[P_b U P_a U†]/4 da conjugação por u_c"""
        U = self.u_c(c).entries
        conjugated = np.einsum('ij,ajk,kl->ail', U, _TWO_QUBIT_PAULIS, U.conj().T)
        transfer = np.einsum('bji,aij->ba', _TWO_QUBIT_PAULIS, conjugated) / 4
        return np.real(transfer)

    def conjugate_pairwise(self, state: StateLike, c: Sequence[float]) -> StateLike:
        """Conjuga por u_prep aplicando u_c a cada par na base de Pauli"""
        self._check_pauli_n(state.n)
        if state.n < 2:
            raise DimensionError(f"preparatory unitary needs n >= 2, got {state.n}")
        transfer = self.pair_transfer(c)

        def conjugate_one(term: PauliState) -> PauliState:
            for first, second in combinations(range(term.n), 2):
                term = term.apply_pair_transfer(transfer, first, second)
            return term

        if isinstance(state, OrderedState):
            return state.map(conjugate_one)
        return conjugate_one(state)

    def conjugate(self, state: StateLike, U: DenseOperator) -> StateLike:
        """U ρ U† por ordem, passando pela forma densa"""
        if U.n != state.n:
            raise DimensionError(f"unitary acts on {U.n} qubits, state has {state.n}")

        def conjugate_one(term: PauliState) -> PauliState:
            dense = self.to_dense(term).entries
            return self.from_dense(DenseOperator(term.n, U.entries @ dense @ U.entries.conj().T))

        if isinstance(state, OrderedState):
            result = state.map(conjugate_one)
            if not result.orders[0].allclose(state.orders[0], atol=1e-12):
                raise NumericError("zeroth purity order changed under conjugation")
            return result
        return conjugate_one(state)

    # Canais

    def apply_channel(self, state: StateLike, ch: BlochChannel, qubit: int = 0, derivative: bool = False) -> StateLike:
        """Aplica o canal (ou sua derivada em λ) ao qubit indicado

        Para OrderedState o resultado carrega as derivadas ∂ρ^(j)/∂λ pela
        regra do produto: T'·ρ^(j) + T·∂ρ^(j).
        """
        if not 0 <= qubit < state.n:
            raise DimensionError(f"qubit index {qubit} outside 0..{state.n - 1}")
        transfer = ch.transfer_matrix()
        slope = ch.derivative_transfer_matrix()
        if isinstance(state, PauliState):
            return state.apply_transfer(slope if derivative else transfer, qubit)

        orders = tuple(term.apply_transfer(transfer, qubit) for term in state.orders)
        derivatives = []
        for j, term in enumerate(state.orders):
            value = term.apply_transfer(slope, qubit)
            if state.derivatives is not None:
                value = value + state.derivatives[j].apply_transfer(transfer, qubit)
            derivatives.append(value)
        return OrderedState(state.n, orders, tuple(derivatives))

    def apply_kraus(self, op: DenseOperator, kraus: Sequence[np.ndarray], qubit: int = 0) -> DenseOperator:
        """Σ E ρ E† com cada E atuando no qubit indicado (oráculo denso)"""
        if not 0 <= qubit < op.n:
            raise DimensionError(f"qubit index {qubit} outside 0..{op.n - 1}")
        total = np.zeros_like(op.entries)
        for E in kraus:
            full = embed({qubit: np.asarray(E, dtype=complex)}, op.n)
            total = total + full @ op.entries @ full.conj().T
        return DenseOperator(op.n, total)

    def prepare_orders(
        self,
        ch: BlochChannel,
        n: int,
        r0: Sequence[float],
        c: Optional[Sequence[float]] = None,
        max_order: Optional[int] = None,
    ) -> OrderedState:
        """Ordens de ρ_f com derivadas: estado produto, u_prep (se n ≥ 2), canal no qubit 0"""
        max_order = self.config.MAX_SERIES_ORDER if max_order is None else max_order
        state = self.initial_orders(n, r0, max_order)
        if n >= 2:
            if c is None:
                raise DomainError("correlated preparation needs a control direction c")
            state = self.conjugate_pairwise(state, c)
        return self.apply_channel(state, ch, 0)

    # Conversão densa

    def to_dense(self, state: PauliState) -> DenseOperator:
        """ρ = Σ coeffs[P]·P como matriz 2^n x 2^n"""
        self._check_dense_n(state.n)
        n = state.n
        tensor = state.tensor().astype(complex)
        for _ in range(n):
            tensor = np.tensordot(tensor, PAULI_MATRICES, axes=([0], [0]))
        # eixos agora (i0, j0, i1, j1, ...)
        order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        return DenseOperator(n, tensor.transpose(order).reshape(2 ** n, 2 ** n))

    def from_dense(self, op: DenseOperator) -> PauliState:
        """Coeficientes Tr[ρP]/2^n; exige partes imaginárias desprezíveis"""
        self._check_dense_n(op.n)
        n = op.n
        tensor = op.entries.reshape((2,) * (2 * n))
        order = [axis for k in range(n) for axis in (k, n + k)]
        tensor = tensor.transpose(order)
        transposed = PAULI_MATRICES.transpose(0, 2, 1)
        for _ in range(n):
            tensor = np.tensordot(tensor, transposed, axes=([0, 1], [1, 2]))
        coeffs = tensor.reshape(-1) / 2 ** n
        imaginary = float(np.max(np.abs(coeffs.imag), initial=0.0))
        if imaginary > 1e-10:
            raise NumericError(f"operator is not Hermitian: Pauli coefficient imaginary part {imaginary:.3g}")
        return PauliState(n, coeffs.real)

    def state_to_dict(self, state: PauliState) -> dict:
        return state.to_dict()

    def state_from_dict(self, data: dict) -> PauliState:
        state = PauliState.from_dict(data)
        self._check_pauli_n(state.n)
        return state

    def permutation(self, n: int, first: int, second: int) -> DenseOperator:
        """Operador de troca dos qubits first e second"""
        self._check_dense_n(n)
        axes = list(range(n))
        axes[first], axes[second] = axes[second], axes[first]
        identity = np.eye(2 ** n).reshape((2,) * n + (2 ** n,))
        swapped = identity.transpose(axes + [n]).reshape(2 ** n, 2 ** n)
        return DenseOperator(n, swapped)
