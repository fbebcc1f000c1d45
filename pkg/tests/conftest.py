import numpy as np
import pytest

from lanehash.highway import Key256


@pytest.fixture
def ramp_key():
    return Key256.from_bytes(bytes(range(32)))


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_state(rng):
    """Uniform random HighwayHash state as four 4-lane tuples."""
    lanes = rng.integers(0, 1 << 64, size=16, dtype=np.uint64)
    return tuple(tuple(int(x) for x in lanes[i : i + 4]) for i in range(0, 16, 4))


def random_packet(rng):
    return tuple(int(x) for x in rng.integers(0, 1 << 64, size=4, dtype=np.uint64))


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance gate's one-line-per-criterion results."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.line(line)
