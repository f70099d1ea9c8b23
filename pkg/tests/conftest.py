import random

import pytest

from gcflab.gcf import GCFInput
from gcflab.substitution import PERIOD_DOUBLING


def pd13():
    """a_n = b_n = period doubling over the values a=1, b=3."""
    return GCFInput.from_substitution(PERIOD_DOUBLING, {"a": 1, "b": 3})


def random_input(rng: random.Random, length: int) -> GCFInput:
    alphabet = rng.sample(range(1, 10), rng.randint(2, 4))
    a = [rng.choice(alphabet) for _ in range(length)]
    b = [rng.choice(alphabet) for _ in range(length)]
    return GCFInput(a, b, min(alphabet), max(alphabet))


@pytest.fixture
def pd():
    return pd13()


@pytest.fixture
def ones():
    return GCFInput([1] * 4000, [1] * 4000, 1, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
