import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from config.settings import Settings
from entities.exceptions import DimensionError, DomainError, NumericError
from entities.pauli_state import PAULI_MATRICES, DenseOperator, PauliState
from helpers import X, Y, Z, random_density, random_unit, unit_vectors
from repositories.channel_repository import ChannelRepository
from use_cases.mstate_use_case import MStateUseCase, embed, sigma

MSTATE = MStateUseCase()
CHANNELS = ChannelRepository()


def test_initial_state_single_qubit(mstate):
    state = mstate.initial_state(1, 0.4, Y)
    assert np.allclose(state.coeffs, [0.5, 0.0, 0.2, 0.0])
    assert state.coefficient('Y') == pytest.approx(0.2)


def test_initial_state_is_a_product(mstate):
    state = mstate.initial_state(2, 0.5, X)
    assert state.coefficient('XX') == pytest.approx(0.0625)
    assert state.coefficient('XI') == pytest.approx(0.125)
    assert state.trace() == pytest.approx(1.0)


def test_initial_state_rejects_bad_input(mstate):
    with pytest.raises(DomainError):
        mstate.initial_state(2, 1.2, X)
    with pytest.raises(DomainError):
        mstate.initial_state(2, 0.5, [1, 1, 0])
    with pytest.raises(DimensionError):
        mstate.initial_state(15, 0.5, X)


def test_order_decompose_recovers_state(mstate):
    r0 = np.array([0.6, 0.0, 0.8])
    orders = mstate.initial_orders(3, r0)
    assert orders.max_order == 3
    for r in (0.0, 0.3, 1.0):
        assert orders.at(r).allclose(mstate.initial_state(3, r, r0))
    padded = mstate.initial_orders(2, r0, max_order=4)
    assert padded.max_order == 4
    assert padded.order(4).allclose(PauliState.zeros(2))


def test_u_c_is_hermitian_and_unitary(mstate):
    U = mstate.u_c(random_unit(np.random.default_rng(3))).entries
    assert np.allclose(U, U.conj().T)
    assert np.allclose(U @ U, np.eye(4))


def test_u_c_along_z_is_controlled_phase(mstate):
    assert np.allclose(mstate.u_c(Z).entries, np.diag([1, 1, 1, -1]))


def test_u_prep_commutes_with_sigma_c_product(mstate):
    c = np.array([0.0, 0.6, 0.8])
    U = mstate.u_prep(3, c).entries
    V = embed({0: sigma(c), 1: sigma(c), 2: sigma(c)}, 3)
    assert np.allclose(U @ V, V @ U)
    assert np.allclose(U @ U.conj().T, np.eye(8))


def test_u_prep_needs_two_qubits(mstate):
    with pytest.raises(DimensionError):
        mstate.u_prep(1, Z)


@given(st.integers(min_value=0, max_value=2 ** 16), st.integers(min_value=2, max_value=4))
def test_pairwise_conjugation_matches_dense(seed, n):
    rng = np.random.default_rng(seed)
    c, r0 = random_unit(rng), random_unit(rng)
    state = MSTATE.initial_state(n, float(rng.uniform(0, 1)), r0)
    pairwise = MSTATE.conjugate_pairwise(state, c)
    dense = MSTATE.conjugate(state, MSTATE.u_prep(n, c))
    assert pairwise.allclose(dense, atol=1e-12)


def test_conjugation_keeps_zeroth_order(mstate):
    orders = mstate.initial_orders(3, X)
    conjugated = mstate.conjugate(orders, mstate.u_prep(3, Y))
    assert conjugated.orders[0].allclose(PauliState.identity(3, 1 / 8))


@pytest.mark.parametrize("name,params", [
    ("phase_flip", {}),
    ("depolarizing", {}),
    ("phase_shift", {}),
    ("gad", {'p': 0.7}),
])
@pytest.mark.parametrize("qubit", [0, 1])
def test_apply_channel_matches_kraus(mstate, name, params, qubit):
    lam = 0.3
    state = mstate.conjugate_pairwise(mstate.initial_state(2, 0.7, np.array([0.6, 0.0, 0.8])), Y)
    ch = CHANNELS.builtin(name, params).eval(lam)
    through_transfer = mstate.to_dense(mstate.apply_channel(state, ch, qubit))
    through_kraus = mstate.apply_kraus(mstate.to_dense(state), CHANNELS.kraus(name, lam, params), qubit)
    assert np.allclose(through_transfer.entries, through_kraus.entries, atol=1e-12)


def test_apply_channel_derivative(mstate):
    family = CHANNELS.builtin("gad", {'p': 0.8})
    state = mstate.initial_state(2, 0.5, X)
    h = 1e-6
    numeric = (
        mstate.apply_channel(state, family.eval(0.4 + h)).coeffs
        - mstate.apply_channel(state, family.eval(0.4 - h)).coeffs
    ) / (2 * h)
    analytic = mstate.apply_channel(state, family.eval(0.4), derivative=True)
    assert np.allclose(analytic.coeffs, numeric, atol=1e-8)


def test_apply_channel_rejects_bad_qubit(mstate):
    ch = CHANNELS.builtin("phase_flip").eval(0.3)
    with pytest.raises(DimensionError):
        mstate.apply_channel(mstate.initial_state(2, 0.5, X), ch, 2)


def test_prepare_orders_evaluates_to_full_state(mstate):
    family = CHANNELS.builtin("depolarizing")
    ch = family.eval(0.4)
    ordered = mstate.prepare_orders(ch, 3, Y, X)
    for r in (1e-3, 0.2, 0.9):
        full = mstate.apply_channel(mstate.conjugate_pairwise(mstate.initial_state(3, r, Y), X), ch)
        assert ordered.at(r).allclose(full, atol=1e-12)
        slope = mstate.apply_channel(mstate.conjugate_pairwise(mstate.initial_state(3, r, Y), X), ch, derivative=True)
        assert ordered.derivative_at(r).allclose(slope, atol=1e-12)


def test_prepare_orders_needs_control_for_correlated(mstate):
    with pytest.raises(DomainError):
        mstate.prepare_orders(CHANNELS.builtin("phase_flip").eval(0.1), 2, X)


def test_dense_conversion_of_known_state(mstate):
    dense = mstate.to_dense(mstate.initial_state(1, 1.0, Z)).entries
    assert np.allclose(dense, [[1, 0], [0, 0]])
    mixed = mstate.to_dense(PauliState.from_entries(2, {'II': 0.25, 'ZI': 0.25}))
    assert np.allclose(mixed.entries, np.diag([0.5, 0.5, 0.0, 0.0]))


def test_from_dense_inverts_to_dense(mstate):
    rho = random_density(np.random.default_rng(7), 8)
    state = mstate.from_dense(DenseOperator(3, rho))
    assert np.allclose(mstate.to_dense(state).entries, rho, atol=1e-12)
    assert state.trace() == pytest.approx(1.0)


def test_from_dense_rejects_non_hermitian(mstate):
    with pytest.raises(NumericError):
        mstate.from_dense(DenseOperator(1, [[0, 1], [0, 0]]))


def test_dense_cap():
    small = MStateUseCase(Settings(DENSE_MAX_QUBITS=2))
    with pytest.raises(DimensionError):
        small.to_dense(PauliState.identity(3, 1 / 8))


def test_state_document(mstate):
    state = mstate.initial_state(2, 0.5, X)
    document = mstate.state_to_dict(state)
    assert document['convention'] == "coeff = Tr[rho P]/2^n"
    assert {'pauli': 'XX', 'value': 0.0625} in document['entries']
    assert mstate.state_from_dict(document).allclose(state)


def test_permutation_swaps_qubits(mstate):
    swap = mstate.permutation(2, 0, 1).entries
    assert np.allclose(swap @ np.kron(X[:2], [0, 1]), np.kron([0, 1], X[:2]))


# Álgebra de Pauli e conjugação por u_c

LETTER_PRODUCTS = {
    ('X', 'Y'): (1j, 'Z'), ('Y', 'Z'): (1j, 'X'), ('Z', 'X'): (1j, 'Y'),
    ('Y', 'X'): (-1j, 'Z'), ('Z', 'Y'): (-1j, 'X'), ('X', 'Z'): (-1j, 'Y'),
}


def letter(name):
    return PAULI_MATRICES["IXYZ".index(name)]


@hypothesis_settings(max_examples=1000)
@given(
    arrays(np.float64, 3, elements=st.floats(-1.0, 1.0)),
    arrays(np.float64, 3, elements=st.floats(-1.0, 1.0)),
)
def test_pauli_product_rule(a, b):
    expected = (a @ b) * np.eye(2) + 1j * sigma(np.cross(a, b))
    assert np.allclose(sigma(a) @ sigma(b), expected, atol=1e-12)


@pytest.mark.parametrize("first", "XYZ")
@pytest.mark.parametrize("second", "XYZ")
def test_pauli_letters_commute_only_with_themselves(first, second):
    product = letter(first) @ letter(second)
    if first == second:
        assert np.allclose(product, np.eye(2))
        return
    phase, result = LETTER_PRODUCTS[(first, second)]
    assert np.allclose(product, phase * letter(result))
    assert np.allclose(product, -letter(second) @ letter(first))


@given(unit_vectors, unit_vectors)
def test_u_c_conjugates_a_single_pauli(a, c):
    U = MSTATE.u_c(c).entries
    sa, sc, eye = sigma(a), sigma(c), np.eye(2)
    expected = np.kron(sa, sc) + (a @ c) * (np.kron(sc, eye) - np.kron(sc, sc))
    assert np.allclose(U @ np.kron(sa, eye) @ U, expected, atol=1e-12)

    expected = np.kron(sc, sa) + (a @ c) * (np.kron(eye, sc) - np.kron(sc, sc))
    assert np.allclose(U @ np.kron(eye, sa) @ U, expected, atol=1e-12)


@given(unit_vectors, unit_vectors, unit_vectors)
def test_u_c_conjugates_a_pauli_pair(a, b, c):
    U = MSTATE.u_c(c).entries
    sc, eye = sigma(c), np.eye(2)
    alpha, beta = a @ c, b @ c
    expected = (
        beta * np.kron(sigma(a), eye)
        + alpha * np.kron(eye, sigma(b))
        - np.kron(sigma(np.cross(a, c)), sigma(np.cross(c, b)))
        + alpha * beta * (np.kron(sc, sc) - np.kron(sc, eye) - np.kron(eye, sc))
    )
    assert np.allclose(U @ np.kron(sigma(a), sigma(b)) @ U, expected, atol=1e-12)


def first_order_after_preparation(n, c, r0):
    """(1/N)[Σ_k σr0^(k) Π_{j≠k} σc^(j) + α Σ_k σc^(k) − nα σc^⊗n] com α = r0·c"""
    sc, s0 = sigma(c), sigma(r0)
    alpha = r0 @ c
    everywhere = {qubit: sc for qubit in range(n)}
    total = alpha * (1 - n) * embed(everywhere, n)
    for k in range(n):
        total = total + embed({**everywhere, k: s0}, n) + alpha * embed({k: sc}, n)
    return DenseOperator(n, total / 2 ** n)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_first_order_after_preparation(n, seed):
    rng = np.random.default_rng(seed)
    c, r0 = random_unit(rng), random_unit(rng)
    prepared = MSTATE.conjugate(MSTATE.initial_orders(n, r0, max_order=1), MSTATE.u_prep(n, c))
    expected = MSTATE.from_dense(first_order_after_preparation(n, c, r0))
    assert prepared.order(1).allclose(expected, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_first_order_pauli_coefficients_along_c(n):
    rng = np.random.default_rng(n)
    r0 = random_unit(rng)
    prepared = MSTATE.conjugate(MSTATE.initial_orders(n, r0, max_order=1), MSTATE.u_prep(n, Z)).order(1)
    # o termo −nα σc^⊗n cancela a componente z de Σ_k σr0^(k) Π σc^(j)
    assert prepared.coefficient('Z' * n) == pytest.approx(0.0, abs=1e-12)
    for k in range(n):
        single = 'I' * k + 'Z' + 'I' * (n - 1 - k)
        assert prepared.coefficient(single) == pytest.approx(r0[2] / 2 ** n, abs=1e-12)
        for axis, name in ((0, 'X'), (1, 'Y')):
            label = 'Z' * k + name + 'Z' * (n - 1 - k)
            assert prepared.coefficient(label) == pytest.approx(r0[axis] / 2 ** n, abs=1e-12)

    perpendicular = MSTATE.conjugate(MSTATE.initial_orders(n, X, max_order=1), MSTATE.u_prep(n, Z))
    labels = {label for label, _ in perpendicular.order(1).nonzero(1e-12)}
    assert labels == {'Z' * k + 'X' + 'Z' * (n - 1 - k) for k in range(n)}


@given(
    st.integers(min_value=0, max_value=2 ** 16),
    st.integers(min_value=1, max_value=3),
    st.sampled_from([("phase_flip", {}), ("depolarizing", {}), ("gad", {'p': 0.7})]),
    st.floats(min_value=0.05, max_value=0.9),
)
def test_apply_channel_matches_kraus_on_random_states(seed, n, channel, lam):
    name, params = channel
    rng = np.random.default_rng(seed)
    qubit = int(rng.integers(n))
    rho = DenseOperator(n, random_density(rng, 2 ** n))
    state = MSTATE.from_dense(rho)
    pauli = MSTATE.apply_channel(state, CHANNELS.builtin(name, params).eval(lam), qubit)
    kraus = MSTATE.apply_kraus(rho, CHANNELS.kraus(name, lam, params), qubit)
    assert np.allclose(MSTATE.to_dense(pauli).entries, kraus.entries, atol=1e-12)
