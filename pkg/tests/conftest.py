"""
Shared fixtures for the treecrit test suite.
"""

import os
from pathlib import Path

import pytest

from treecrit.core.config import get_settings
from treecrit.services.catalogue import normal_brw, normal_env, point_mass_env, sec51_env, sec51_rwre
from treecrit.services.environment import load_env, parse_env

FIXTURES = Path(__file__).parent / "fixtures" / "envs"


def lognormal_config(mu: float = 0.0, sigma: float = 1.0, b: int = 2) -> dict:
    cell = {"kind": "log_normal", "mu": mu, "sigma": sigma}
    return {"b": b, "entries": [[dict(cell) for _ in range(b)] for _ in range(b)]}


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings."""
    for key in list(os.environ):
        if key.startswith("TREECRIT_"):
            monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def pm04_env():
    return load_env(FIXTURES / "pm04.json")


@pytest.fixture
def lognormal_env():
    return parse_env(lognormal_config())


@pytest.fixture
def subcritical_lognormal_env():
    """rho(1) = 2 exp(-1.5 + 0.125) ~ 0.506."""
    return parse_env(lognormal_config(mu=-1.5, sigma=0.5))


@pytest.fixture
def sec51_h05_env():
    return sec51_env(0.5)


@pytest.fixture
def sec51_h05_rwre():
    return sec51_rwre(0.5)


@pytest.fixture
def normal01_brw():
    return normal_brw(0.0, 1.0)


@pytest.fixture
def catalogue_envs():
    """One environment per built-in family plus two generic ones."""
    return {
        "sec51": sec51_env(0.5),
        "pointmass-b2": point_mass_env(0.4),
        "normal01": normal_env(1.0),
        "lognormal": parse_env(lognormal_config()),
    }


@pytest.fixture
def make_lognormal_config():
    return lognormal_config
