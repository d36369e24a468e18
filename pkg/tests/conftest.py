import numpy as np
import pytest
from hypothesis import settings

from lieobs.groups import E, R2, R3, r3_lambda, r3_prime_lambda

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ALL_CLASSES = [R2, R3, r3_lambda(0.25), r3_lambda(0.5), r3_lambda(1.0), r3_lambda(-0.7),
               r3_prime_lambda(0.5), r3_prime_lambda(-0.5), E]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
