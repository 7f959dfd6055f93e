"""
Funções auxiliares dos testes: vetores, rotações e estados aleatórios
"""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.stats import special_ortho_group

X = np.array([1.0, 0.0, 0.0])
Y = np.array([0.0, 1.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])


def random_unit(rng: np.random.Generator) -> np.ndarray:
    vector = rng.normal(size=3)
    return vector / np.linalg.norm(vector)


def random_rotation(seed: int) -> np.ndarray:
    return special_ortho_group.rvs(3, random_state=seed)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Matriz densidade de posto completo"""
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T + 0.05 * np.eye(dim)
    return rho / np.trace(rho).real


def random_traceless_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = 0.5 * (A + A.conj().T)
    return H - np.trace(H).real / dim * np.eye(dim)


# vetores unitários para testes de propriedade
unit_vectors = (
    arrays(np.float64, 3, elements=st.floats(-1.0, 1.0))
    .filter(lambda v: np.linalg.norm(v) > 0.1)
    .map(lambda v: v / np.linalg.norm(v))
)
