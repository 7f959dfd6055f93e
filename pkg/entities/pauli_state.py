"""
Pauli State Entity - Operadores de n qubits na base de strings de Pauli

Convenção: o coeficiente de P é Tr[ρP]/2^n, de modo que ρ = Σ coeffs[P]·P.
O qubit 0 é o fator tensorial mais à esquerda (dígito mais significativo
do índice em base 4); letras I, X, Y, Z = 0, 1, 2, 3.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .exceptions import DimensionError, NumericError

LETTERS = "IXYZ"
CONVENTION = "coeff = Tr[rho P]/2^n"

PAULI_MATRICES = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


def pauli_label(index: int, n: int) -> str:
    """Converte o índice linear numa string como 'XZI'"""
    digits = []
    for _ in range(n):
        index, letter = divmod(index, 4)
        digits.append(LETTERS[letter])
    return "".join(reversed(digits))


def pauli_index(label: str) -> int:
    index = 0
    for letter in label.upper():
        if letter not in LETTERS:
            raise DimensionError(f"invalid Pauli letter '{letter}' in '{label}'")
        index = 4 * index + LETTERS.index(letter)
    return index


def letter_weights(n: int) -> np.ndarray:
    """Número de letras diferentes de I em cada string, como array de 4^n"""
    weights = np.zeros((4,) * n, dtype=int)
    for axis in range(n):
        shape = [1] * n
        shape[axis] = 4
        weights = weights + (np.arange(4) > 0).reshape(shape)
    return weights.reshape(-1)


@dataclass(frozen=True, eq=False)
class PauliState:
    """Entidade PauliState: coeficientes reais sobre as 4^n strings de Pauli"""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        """Valida o tamanho e a finitude dos coeficientes"""
        coeffs = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if self.n < 1:
            raise DimensionError(f"qubit count must be positive, got {self.n}")
        if coeffs.size != 4 ** self.n:
            raise DimensionError(f"expected {4 ** self.n} coefficients for n={self.n}, got {coeffs.size}")
        if not np.all(np.isfinite(coeffs)):
            raise NumericError("Pauli coefficients must be finite")
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def zeros(cls, n: int) -> 'PauliState':
        return cls(n, np.zeros(4 ** n))

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> 'PauliState':
        coeffs = np.zeros(4 ** n)
        coeffs[0] = scale
        return cls(n, coeffs)

    @classmethod
    def from_entries(cls, n: int, entries: dict) -> 'PauliState':
        """Cria o estado a partir de {'XZ': valor, ...}"""
        coeffs = np.zeros(4 ** n)
        for label, value in entries.items():
            if len(label) != n:
                raise DimensionError(f"label '{label}' does not have {n} letters")
            coeffs[pauli_index(label)] += value
        return cls(n, coeffs)

    def tensor(self) -> np.ndarray:
        """Visão (4,)*n dos coeficientes, um eixo por qubit"""
        return self.coeffs.reshape((4,) * self.n)

    def coefficient(self, label: str) -> float:
        return float(self.coeffs[pauli_index(label)])

    def trace(self) -> float:
        return float(self.coeffs[0] * 2 ** self.n)

    def apply_transfer(self, transfer: np.ndarray, qubit: int) -> 'PauliState':
        """Aplica uma matriz de transferência 4x4 ao eixo do qubit indicado"""
        if not 0 <= qubit < self.n:
            raise DimensionError(f"qubit index {qubit} outside 0..{self.n - 1}")
        moved = np.tensordot(transfer, self.tensor(), axes=([1], [qubit]))
        return PauliState(self.n, np.moveaxis(moved, 0, qubit))

    def apply_pair_transfer(self, transfer: np.ndarray, first: int, second: int) -> 'PauliState':
        """Aplica uma matriz de transferência 16x16 ao par de qubits (first, second)"""
        if first == second or not (0 <= first < self.n and 0 <= second < self.n):
            raise DimensionError(f"invalid qubit pair ({first}, {second}) for n={self.n}")
        pair = transfer.reshape(4, 4, 4, 4)
        moved = np.tensordot(pair, self.tensor(), axes=([2, 3], [first, second]))
        return PauliState(self.n, np.moveaxis(moved, [0, 1], [first, second]))

    def scaled(self, factor: float) -> 'PauliState':
        return PauliState(self.n, factor * self.coeffs)

    def __add__(self, other: 'PauliState') -> 'PauliState':
        if other.n != self.n:
            raise DimensionError(f"cannot add states with n={self.n} and n={other.n}")
        return PauliState(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: 'PauliState') -> 'PauliState':
        return self + other.scaled(-1.0)

    def nonzero(self, tol: float = 0.0) -> Iterator[Tuple[str, float]]:
        for index in np.flatnonzero(np.abs(self.coeffs) > tol):
            yield pauli_label(int(index), self.n), float(self.coeffs[index])

    def allclose(self, other: 'PauliState', atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))

    def to_dict(self) -> dict:
        """Documento JSON com apenas as entradas não nulas"""
        return {
            'n': self.n,
            'convention': CONVENTION,
            'entries': [{'pauli': label, 'value': value} for label, value in self.nonzero()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'PauliState':
        """Cria uma instância PauliState a partir de um dicionário"""
        if data.get('convention', CONVENTION) != CONVENTION:
            raise DimensionError(f"unsupported coefficient convention: {data['convention']!r}")
        return cls.from_entries(int(data['n']), {e['pauli']: float(e['value']) for e in data['entries']})


@dataclass(frozen=True)
class OrderedState:
    """Estado como polinômio em r: orders[j] é o coeficiente de r^j

    Quando `derivatives` está presente, derivatives[j] = ∂orders[j]/∂λ.
    """

    n: int
    orders: Tuple[PauliState, ...]
    derivatives: Optional[Tuple[PauliState, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'orders', tuple(self.orders))
        if self.derivatives is not None:
            object.__setattr__(self, 'derivatives', tuple(self.derivatives))
            if len(self.derivatives) != len(self.orders):
                raise DimensionError("derivative orders do not match state orders")
        for term in self.orders + (self.derivatives or ()):
            if term.n != self.n:
                raise DimensionError(f"order term has n={term.n}, expected {self.n}")

    @property
    def max_order(self) -> int:
        return len(self.orders) - 1

    def order(self, j: int) -> PauliState:
        """Termo de ordem j (zero quando j excede a ordem guardada)"""
        if j < len(self.orders):
            return self.orders[j]
        return PauliState.zeros(self.n)

    def derivative(self, j: int) -> PauliState:
        if self.derivatives is None:
            raise NumericError("ordered state carries no lambda derivatives")
        if j < len(self.derivatives):
            return self.derivatives[j]
        return PauliState.zeros(self.n)

    def at(self, r: float) -> PauliState:
        """Avalia Σ r^j orders[j]"""
        return _evaluate(self.orders, r)

    def derivative_at(self, r: float) -> PauliState:
        if self.derivatives is None:
            raise NumericError("ordered state carries no lambda derivatives")
        return _evaluate(self.derivatives, r)

    def map(self, transform) -> 'OrderedState':
        """Aplica uma transformação linear a cada ordem (e às derivadas)"""
        derivatives = None if self.derivatives is None else tuple(transform(t) for t in self.derivatives)
        return OrderedState(self.n, tuple(transform(t) for t in self.orders), derivatives)


def _evaluate(terms: Tuple[PauliState, ...], r: float) -> PauliState:
    coeffs = np.zeros_like(terms[0].coeffs)
    for j, term in enumerate(terms):
        coeffs = coeffs + r ** j * term.coeffs
    return PauliState(terms[0].n, coeffs)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Matriz complexa 2^n x 2^n usada pelo oráculo de autodecomposição"""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        dim = 2 ** self.n
        if entries.shape != (dim, dim):
            raise DimensionError(f"expected a {dim}x{dim} matrix for n={self.n}, got {entries.shape}")
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermitian_defect() <= tol

    def __matmul__(self, other: 'DenseOperator') -> 'DenseOperator':
        return DenseOperator(self.n, self.entries @ other.entries)

    def __add__(self, other: 'DenseOperator') -> 'DenseOperator':
        return DenseOperator(self.n, self.entries + other.entries)

    def __sub__(self, other: 'DenseOperator') -> 'DenseOperator':
        return DenseOperator(self.n, self.entries - other.entries)

    def scaled(self, factor: complex) -> 'DenseOperator':
        return DenseOperator(self.n, factor * self.entries)

    @classmethod
    def identity(cls, n: int) -> 'DenseOperator':
        return cls(n, np.eye(2 ** n, dtype=complex))
