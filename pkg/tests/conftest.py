"""
Fixtures compartilhadas dos testes
"""

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from config.settings import Settings
from repositories.channel_repository import ChannelRepository
from use_cases.bloch_use_case import BlochUseCase
from use_cases.fisher_use_case import FisherUseCase
from use_cases.mstate_use_case import MStateUseCase
from use_cases.protocol_use_case import ProtocolUseCase
from use_cases.series_use_case import SeriesUseCase

hypothesis_settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("ci")


@pytest.fixture
def config():
    return Settings()


@pytest.fixture
def channels():
    return ChannelRepository()


@pytest.fixture
def bloch(config):
    return BlochUseCase(config)


@pytest.fixture
def mstate(config):
    return MStateUseCase(config)


@pytest.fixture
def fisher(config):
    return FisherUseCase(config)


@pytest.fixture
def series(mstate, bloch, config):
    return SeriesUseCase(mstate, bloch, config)


@pytest.fixture
def protocols(mstate, fisher, series, bloch, config):
    return ProtocolUseCase(mstate, fisher, series, bloch, config)


@pytest.fixture
def rank_one(channels):
    """Família unital com Ṁ de posto 1: M = diag(0, 0, 1 − 2λ)"""
    return channels.custom_diag({'m1': '0', 'm2': '0', 'm3': '1 - 2*lambda'})
