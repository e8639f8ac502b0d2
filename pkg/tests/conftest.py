from pathlib import Path

import pytest

from gridiron import fpm
from gridiron.core_data import load_dataset

DATA_DIR = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_RESULTS.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def mini_dir() -> Path:
    return DATA_DIR / "mini"


@pytest.fixture(scope="session")
def mini_dataset(mini_dir):
    return load_dataset(mini_dir)


@pytest.fixture(scope="session")
def small_synth():
    """4 compact seasons; enough for feature/evaluation mechanics."""
    params = fpm.SynthesisParams(n_seasons=4, n_teams=8, weeks=12, seed=1234)
    return fpm.synthesize_seasons(params)


@pytest.fixture(scope="session")
def medium_synth():
    """6 full-size seasons for fitting and cross-validation tests."""
    params = fpm.SynthesisParams(n_seasons=6, seed=88)
    return fpm.synthesize_seasons(params)
