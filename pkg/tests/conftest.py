import numpy as np
import pytest

from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.rng import Rng
from channelaging.pydantic_models.models import CellGeometry


@pytest.fixture
def rng():
    return Rng(1234)


@pytest.fixture
def geometry():
    return CellGeometry()


@pytest.fixture
def unit_profile():
    return FadingProfile.from_betas(np.ones(10))


@pytest.fixture
def spread_profile():
    return FadingProfile.from_betas(np.linspace(0.3, 1.0, 10))


@pytest.fixture
def write_ini(tmp_path):
    def write(text: str, name: str = "scenario.ini") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
