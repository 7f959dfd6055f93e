import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings as hypothesis_settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from entities.bloch_channel import BlochChannel, ChannelFamily, Unitality
from entities.exceptions import BranchError, DomainError
from entities.pauli_state import PAULI_MATRICES
from helpers import X, Z, unit_vectors
from repositories.channel_repository import ChannelRepository
from use_cases.bloch_use_case import BlochUseCase

BLOCH = BlochUseCase()


def test_validate_accepts_builtin_channels(bloch, channels):
    for name in ("phase_shift", "phase_flip", "depolarizing"):
        assert bloch.validate(channels.builtin(name).eval(0.3)).passed
    assert bloch.validate(channels.builtin("gad", {'p': 0.8}).eval(0.5)).passed


def test_validate_reports_each_constraint(bloch):
    replacement = BlochChannel(M=np.zeros((3, 3)), d=Z, dM=np.zeros((3, 3)), dd=np.zeros(3))
    assert bloch.validate(replacement).passed

    too_long = BlochChannel(M=np.zeros((3, 3)), d=1.2 * Z, dM=np.zeros((3, 3)), dd=np.zeros(3))
    report = bloch.validate(too_long)
    assert [v.constraint for v in report.violations] == ["|d| <= 1"]
    assert report.violations[0].magnitude == pytest.approx(0.2)

    pure_but_contracting = BlochChannel(M=0.5 * np.eye(3), d=Z, dM=np.zeros((3, 3)), dd=np.zeros(3))
    report = bloch.validate(pure_but_contracting)
    assert not report.passed
    assert report.violations[0].constraint == "|d| = 1 requires M = 0"


def test_apply_bloch(bloch, channels):
    ch = channels.builtin("phase_flip").eval(0.25)
    assert np.allclose(bloch.apply_bloch(ch, 0.5, X), [0.25, 0.0, 0.0])
    assert np.allclose(bloch.apply_bloch(ch, 1.0, Z), Z)

    with pytest.raises(DomainError):
        bloch.apply_bloch(ch, 0.5, [1.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        bloch.apply_bloch(ch, 1.5, X)


def test_fd_derivative_matches_analytic(bloch, channels):
    family = channels.builtin("gad", {'p': 0.8})

    def values(lam):
        ch = family.eval(lam)
        return ch.M, ch.d

    dM, dd = bloch.fd_derivative(values, 0.4, 1e-6, family.domain)
    exact = family.eval(0.4)
    assert np.allclose(dM, exact.dM, atol=1e-8)
    assert np.allclose(dd, exact.dd, atol=1e-8)


def test_fd_derivative_rejects_steps_leaving_the_domain(bloch, channels):
    family = channels.builtin("phase_flip")
    with pytest.raises(DomainError):
        bloch.fd_derivative(lambda lam: (family.eval(lam).M, family.eval(lam).d), 0.0, 1e-6, (0.0, 1.0))
    with pytest.raises(DomainError):
        bloch.fd_derivative(lambda lam: (np.eye(3), np.zeros(3)), 0.5, 0.0)


def test_family_from_callable(bloch, channels):
    gad = channels.builtin("gad", {'p': 1.0})

    def values(lam):
        root = np.sqrt(1 - lam)
        return np.diag([root, root, 1 - lam]), np.array([0.0, 0.0, lam])

    family = bloch.family_from_callable("my_gad", values, (0.0, 0.9))
    assert family.unitality is Unitality.NONUNITAL_PARAM_DEP_SHIFT
    assert not family.analytic
    for lam in (0.0, 0.3, 0.9):
        numeric, exact = family.eval(lam), gad.eval(lam)
        assert np.allclose(numeric.dM, exact.dM, atol=1e-5)
        assert np.allclose(numeric.dd, exact.dd, atol=1e-5)


def test_family_from_callable_classifies_unital(bloch):
    family = bloch.family_from_callable("flip", lambda lam: (np.diag([1 - 2 * lam, 1 - 2 * lam, 1]), np.zeros(3)), (0, 1))
    assert family.unitality is Unitality.UNITAL

    constant = bloch.family_from_callable("shifted", lambda lam: (lam * np.eye(3) * 0.5, 0.5 * Z), (0, 1))
    assert constant.unitality is Unitality.NONUNITAL_CONST_SHIFT


def test_check_unitality_rejects_wrong_label(bloch, channels):
    gad = channels.builtin("gad", {'p': 1.0})
    mislabelled = ChannelFamily("mislabelled", gad.evaluator, Unitality.UNITAL, (0.0, 0.9))
    with pytest.raises(BranchError):
        bloch.check_unitality(mislabelled, mislabelled.eval(0.3))
    bloch.check_unitality(gad, gad.eval(0.3))


def test_svd3_phase_flip(bloch, channels):
    svd = bloch.svd3(channels.builtin("phase_flip").eval(0.2).dM)
    assert np.allclose(svd.S, [2.0, 2.0, 0.0])
    assert (svd.s1, svd.s2, svd.s3) == pytest.approx((2.0, 2.0, 0.0))
    assert np.allclose(svd.reconstruct(), np.diag([-2.0, -2.0, 0.0]))


def test_svd3_rank_one(bloch, rank_one):
    svd = bloch.svd3(rank_one.eval(0.3).dM)
    assert np.allclose(svd.S, [2.0, 0.0, 0.0])
    assert np.allclose(svd.right_vector(0), Z)
    assert np.allclose(svd.left_vector(0), -Z)


@given(arrays(np.float64, (3, 3), elements=st.floats(min_value=-10, max_value=10)))
def test_svd3_is_deterministic_decomposition(matrix):
    svd = BLOCH.svd3(matrix)
    assert np.allclose(svd.reconstruct(), matrix, atol=1e-9)
    assert np.all(np.diff(svd.S) <= 1e-12)
    assert np.allclose(svd.B @ svd.B.T, np.eye(3), atol=1e-9)
    for row in svd.B:
        assert row[np.argmax(np.abs(row))] >= 0


@pytest.mark.parametrize("name,lam,params", [
    ("phase_shift", 0.3, {}),
    ("phase_flip", 0.3, {}),
    ("depolarizing", 0.3, {}),
    ("gad", 0.3, {'p': 0.8}),
    ("pauli", 0.2, {'px': 0.1, 'py': 0.05, 'vary': 3}),
])
def test_bloch_from_kraus_matches_builtin(name, lam, params):
    channels = ChannelRepository()
    M, d = BLOCH.bloch_from_kraus(channels.kraus(name, lam, params))
    ch = channels.builtin(name, params).eval(lam)
    assert np.allclose(M, ch.M, atol=1e-12)
    assert np.allclose(d, ch.d, atol=1e-12)


KRAUS_FAMILIES = [
    ("phase_shift", {}),
    ("phase_flip", {}),
    ("depolarizing", {}),
    ("gad", {'p': 0.8}),
    ("gad", {'p': 1.0}),
    ("pauli", {'px': 0.1, 'py': 0.1, 'vary': 3}),
]


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.real(np.einsum('ij,aji->a', rho, PAULI_MATRICES[1:]))


@given(st.sampled_from(KRAUS_FAMILIES + [("custom_diag", {})]), st.floats(min_value=0.0, max_value=0.6))
def test_validate_builtin_families_over_random_lambdas(family, lam):
    name, params = family
    expressions = {'m1': '0', 'm2': '0', 'm3': '1 - 2*lambda'} if name == "custom_diag" else None
    channel = ChannelRepository().builtin(name, params, expressions).eval(lam)
    assert BLOCH.validate(channel).passed


@hypothesis_settings(max_examples=1000)
@given(
    st.sampled_from(KRAUS_FAMILIES),
    st.floats(min_value=0.01, max_value=0.6),
    st.floats(min_value=0.0, max_value=1.0),
    unit_vectors,
)
def test_apply_bloch_matches_dense_channel(family, lam, r, r_i):
    name, params = family
    channels = ChannelRepository()
    r_f = BLOCH.apply_bloch(channels.builtin(name, params).eval(lam), r, r_i)
    rho = 0.5 * (np.eye(2) + r * np.tensordot(r_i, PAULI_MATRICES[1:], axes=1))
    out = sum(E @ rho @ E.conj().T for E in channels.kraus(name, lam, params))
    assert np.allclose(r_f, bloch_vector(out), atol=1e-12)
    assert np.linalg.norm(r_f) <= 1 + 1e-9


@pytest.mark.parametrize("name,params,lam0", [
    ("phase_shift", {}, 0.4),
    ("phase_flip", {}, 0.4),
    ("depolarizing", {}, 0.4),
    ("gad", {'p': 0.8}, 0.4),
    ("gad", {'p': 1.0}, 0.5),
    ("pauli", {'px': 0.1, 'py': 0.1, 'vary': 3}, 0.4),
])
@pytest.mark.parametrize("h", [1e-2, 1e-3])
def test_fd_derivative_error_is_second_order(name, params, lam0, h):
    family = ChannelRepository().builtin(name, params)

    def values(lam):
        channel = family.eval(lam)
        return channel.M, channel.d

    dM, dd = BLOCH.fd_derivative(values, lam0, h, family.domain)
    exact = family.eval(lam0)
    assert np.all(np.abs(dM - exact.dM) <= 10 * h ** 2 * np.maximum(1.0, np.abs(exact.dM)))
    assert np.all(np.abs(dd - exact.dd) <= 10 * h ** 2 * np.maximum(1.0, np.abs(exact.dd)))
