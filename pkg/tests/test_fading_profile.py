import numpy as np
import pytest
from scipy import stats

from channelaging.models.channel.channel_model import drop_users
from channelaging.models.channel.fading_profile import FadingProfile
from channelaging.models.kernel.rng import Rng
from channelaging.pydantic_models.models import CellGeometry
from channelaging.utils.get_resource import get_resource, resolve_uri


def test_user_at_guard_range_has_unit_beta(geometry):
    profile = FadingProfile.from_positions([100.0], [1.0], geometry)
    assert profile.betas[0] == pytest.approx(1.0)


def test_user_at_cell_edge(geometry):
    profile = FadingProfile.from_positions([1000.0], [1.0], geometry)
    assert profile.betas[0] == pytest.approx(10 ** (-3.8), rel=1e-12)
    assert profile.betas[0] == pytest.approx(1.585e-4, rel=1e-3)


def test_positions_outside_annulus_rejected(geometry):
    with pytest.raises(ValueError):
        FadingProfile.from_positions([50.0], [1.0], geometry)
    with pytest.raises(ValueError):
        FadingProfile.from_positions([1200.0], [1.0], geometry)
    with pytest.raises(ValueError):
        FadingProfile.from_positions([500.0], [0.0], geometry)


def test_from_betas_validation():
    assert FadingProfile.from_betas([0.5, 0.0]).K == 2
    with pytest.raises(ValueError):
        FadingProfile.from_betas([])
    with pytest.raises(ValueError):
        FadingProfile.from_betas([1.0, -0.1])
    with pytest.raises(ValueError):
        FadingProfile.from_betas([[1.0]])


def test_drop_without_shadowing_is_deterministic_pathloss():
    geometry = CellGeometry(shadow_std_db=0.0)
    profile = drop_users(50, geometry, Rng(8))
    np.testing.assert_array_equal(profile.shadow_draws, np.ones(50))
    np.testing.assert_allclose(profile.betas, (profile.distances_m / 100.0) ** -3.8)


@pytest.mark.slow
def test_drop_is_area_uniform(geometry):
    profile = drop_users(10000, geometry, Rng(9))
    r0, R = geometry.guard_m, geometry.radius_m
    assert np.all(profile.distances_m >= r0) and np.all(profile.distances_m <= R)
    u = (profile.distances_m**2 - r0**2) / (R**2 - r0**2)
    assert stats.kstest(u, "uniform").pvalue > 0.001


@pytest.mark.slow
def test_drop_shadowing_spread(geometry):
    profile = drop_users(10000, geometry, Rng(10))
    shadow_db = 10.0 * np.log10(profile.shadow_draws)
    assert np.std(shadow_db) == pytest.approx(8.0, rel=0.05)
    assert np.mean(shadow_db) == pytest.approx(0.0, abs=0.3)


def test_drop_is_reproducible(geometry):
    a = drop_users(10, geometry, Rng(4, 2**63))
    b = drop_users(10, geometry, Rng(4, 2**63))
    np.testing.assert_array_equal(a.betas, b.betas)


def test_permuted(geometry):
    profile = drop_users(4, geometry, Rng(4))
    permuted = profile.permuted([2, 0, 3, 1])
    np.testing.assert_array_equal(permuted.betas, profile.betas[[2, 0, 3, 1]])
    np.testing.assert_array_equal(permuted.distances_m, profile.distances_m[[2, 0, 3, 1]])
    with pytest.raises(ValueError):
        profile.permuted([0, 0, 1, 2])


def test_save_and_load_drop(tmp_path, geometry):
    profile = drop_users(10, geometry, Rng(6))
    path = profile.save(str(tmp_path / "drops" / "drop.txt"))
    loaded = FadingProfile.load(path)
    np.testing.assert_array_equal(loaded.betas, profile.betas)
    np.testing.assert_array_equal(loaded.distances_m, profile.distances_m)
    np.testing.assert_array_equal(loaded.shadow_draws, profile.shadow_draws)


def test_save_and_load_synthetic_drop(tmp_path):
    profile = FadingProfile.from_betas([1.0, 0.25, 1e-4])
    path = profile.save(str(tmp_path / "drop.txt"))
    loaded = FadingProfile.load("file:" + path)
    np.testing.assert_array_equal(loaded.betas, profile.betas)
    assert loaded.distances_m is None and loaded.shadow_draws is None


def test_load_rejects_wrong_columns(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n3 4\n")
    with pytest.raises(ValueError):
        FadingProfile.load(str(path))


def test_get_resource(tmp_path, monkeypatch):
    path = tmp_path / "file.ini"
    path.write_text("")
    assert get_resource(str(path)) == str(path)
    assert get_resource("file://" + str(path)) == str(path)
    monkeypatch.setenv("CHANNEL_AGING_TEST_PATH", str(path))
    assert get_resource("env:CHANNEL_AGING_TEST_PATH") == str(path)
    with pytest.raises(ValueError):
        get_resource("env:CHANNEL_AGING_UNSET_VARIABLE")
    with pytest.raises(ValueError):
        get_resource("s3://bucket/file.ini")
    with pytest.raises(FileNotFoundError):
        get_resource(str(tmp_path / "missing.ini"))


def test_resolve_uri_does_not_need_the_file(tmp_path, monkeypatch):
    missing = str(tmp_path / "drops" / "k4.txt")
    assert resolve_uri(missing) == missing
    assert resolve_uri("file:drops/k4.txt") == "drops/k4.txt"
    assert resolve_uri("file://" + missing) == missing
    monkeypatch.setenv("CHANNEL_AGING_TEST_PATH", missing)
    assert resolve_uri("env:CHANNEL_AGING_TEST_PATH") == missing
    with pytest.raises(ValueError):
        resolve_uri("s3://bucket/k4.txt")
