import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from livingsom.codebook import Codebook
from livingsom.synthetic import echp_spec, generate_synthetic


@pytest.fixture(scope="session")
def codebook():
    return Codebook.default()


@pytest.fixture(scope="session")
def echp_small():
    spec = echp_spec(n=800)
    return generate_synthetic(spec, seed=11)


@pytest.fixture(scope="session")
def echp_full():
    return generate_synthetic(echp_spec(), seed=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
