import random

import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")

DEFAULT_SEED = 20240611


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
