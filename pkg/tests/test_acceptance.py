"""
Verificações de ponta a ponta dos resultados principais
"""

import numpy as np
import pytest

from controllers.measurement_controller import MeasurementController
from controllers.qfi_controller import QfiController
from entities.protocol import GainStatus, ProtocolSpec
from entities.run_config import RunConfig
from helpers import X, random_rotation, random_unit

GRID = [round(0.1 * k, 10) for k in range(1, 10)]


def test_phase_flip_exact_qfi_grid(protocols, channels):
    family = channels.builtin("phase_flip")
    for lam in GRID:
        for r in GRID:
            expected = 4 * r ** 2 / (1 - (1 - 2 * lam) ** 2 * r ** 2)
            assert protocols.exact_qfi(ProtocolSpec.sqsc(family, lam, r, X)) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("p", [0.6, 0.8, 1.0])
def test_gad_zeroth_order(protocols, channels, p):
    family = channels.builtin("gad", {'p': p})
    s = 2 * p - 1
    for lam in GRID:
        qfi = protocols.exact_qfi(ProtocolSpec.sqsc(family, lam, 0.0, [0, 0, 1]))
        assert qfi == pytest.approx(s ** 2 / (1 - lam ** 2 * s ** 2), rel=1e-6)


@pytest.mark.slow
def test_lowest_order_matches_fit_for_random_unital_channels(protocols, series, channels):
    samples = series.fit_samples()
    names = ("phase_flip", "phase_shift", "depolarizing")
    for seed in range(50):
        rng = np.random.default_rng(seed)
        base = channels.builtin(names[seed % 3])
        family = channels.rotated(base, random_rotation(2 * seed), random_rotation(2 * seed + 1))
        lam = float(rng.uniform(0.1, 0.9))
        n = int(rng.integers(2, 5))
        c, r0 = random_unit(rng), random_unit(rng)
        spec = ProtocolSpec.correlated(family, lam, samples[0], n, c, r0)
        values = [protocols.exact_qfi(spec.with_purity(float(r))) for r in samples]
        fitted = series.fit_orders(samples, values, 6, min_order=2).coefficient(2)
        closed = series.corr_h2(family.eval(lam), n, c, r0)
        if closed < 1e-6:
            assert abs(fitted - closed) < 1e-9
        else:
            assert fitted == pytest.approx(closed, rel=5e-3)


@pytest.mark.slow
@pytest.mark.parametrize("name,lam", [("phase_flip", 0.2), ("phase_shift", 0.3), ("depolarizing", 0.5)])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_n_fold_gain(protocols, channels, name, lam, n):
    r = 1e-3
    family = channels.builtin(name)
    report = protocols.compare(protocols.canonical_spec(family, lam, r, n), protocols.optimal_sqsc_spec(family, lam, r))
    assert report.status is GainStatus.OK
    assert report.ratio_exact == pytest.approx(n, rel=0.02)


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank_one_channel_gives_n_minus_one_gain(series, rank_one, n):
    ch = rank_one.eval(0.3)
    search = series.direction_search(ch, n)
    bounds = series.corr_bounds(ch, n)
    assert search.h2 == pytest.approx(4 * (n - 1), rel=0.01)
    assert search.canonical == pytest.approx(bounds.lower, rel=1e-9)


@pytest.mark.slow
def test_depolarizing_higher_orders(config, channels):
    run = RunConfig(command="fit-orders", channel="depolarizing", lambdas=[0.25, 0.5], ns=[2, 3, 4])
    rows, code = QfiController(config, channels).cmd_fit_orders(run)
    assert code == 0
    assert len(rows) == 2 * 3 * 3
    for row in rows:
        assert row['series'] is not None
        if row['order'] == 2:
            assert row['fitted'] == pytest.approx(row['n'], rel=1e-3)
        if row['order'] == 3:
            assert abs(row['fitted']) < 1e-5
            assert abs(row['series']) < 1e-10
        if row['order'] == 4:
            assert row['fitted'] == pytest.approx(row['series'], abs=1e-3)
            if row['n'] >= 3:
                assert row['closed_form'] is not None


@pytest.mark.slow
@pytest.mark.parametrize("name", ["phase_flip", "depolarizing"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_measurement_saturates_lowest_order(protocols, channels, name, n):
    r, lam = 1e-3, 0.3
    family = channels.builtin(name)
    spec = protocols.canonical_spec(family, lam, r, n)
    expected = protocols.measurement_cfi_lowest_order(family.eval(lam), n, spec.c, spec.r0)
    assert protocols.local_measurement_sim(spec).cfi / r ** 2 == pytest.approx(expected, rel=0.02)


@pytest.mark.parametrize("p", [0.7, 1.0])
@pytest.mark.parametrize("n", [2, 3])
def test_non_unital_correlated_state_has_no_advantage(protocols, channels, p, n):
    family = channels.builtin("gad", {'p': p})
    for lam in (0.2, 0.5, 0.8):
        check = protocols.nonunital_corr_equals_sqsc_check(family, n, lam)
        assert check.difference <= 1e-8
        assert check.closed_form_agrees


def test_escher_bound_has_positive_slack(config):
    rows, code = MeasurementController(config).cmd_escher()
    assert code == 0
    assert len(rows) == 171
    assert min(row['slack'] for row in rows) > 0


def test_series_error_grows_with_n_r_squared(protocols, channels):
    family = channels.builtin("phase_flip")
    for n in (2, 4):
        r = float(np.sqrt(0.01 / n))
        spec = protocols.canonical_spec(family, 0.2, r, n)
        assert protocols.exact_qfi(spec) == pytest.approx(4 * n * r ** 2, rel=0.02)
