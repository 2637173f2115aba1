import os
import sys
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

from corpus import FIXTURES, random_corpus  # noqa: E402

from grur.grur_ei import grur_ei  # noqa: E402
from grur.rur import grur_la  # noqa: E402


@lru_cache(maxsize=None)
def la_result(name):
    return grur_la(system_by_name(name).parametric(), 0)


@lru_cache(maxsize=None)
def ei_result(name):
    return grur_ei(system_by_name(name).parametric(), 0)


def system_by_name(name):
    if name in FIXTURES:
        return FIXTURES[name]
    for c in random_corpus():
        if c.name == name:
            return c
    raise KeyError(name)


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


def pytest_terminal_summary(terminalreporter):
    from report import summary_lines

    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
