"""Shared fixtures: the random corpus and the acceptance summary."""

from __future__ import annotations

import random

import pytest

from aelin import adjoin_identity, build_fixed_point_extension, orbit
from tests.gen import random_action, random_space

CORPUS_SEED = 20260808
CORPUS_SIZE = 200
CORPUS_BUDGET = 1000


class CorpusEntry:
    """One random space with its action, extension, and adjoined orbits."""

    __slots__ = ("space", "action", "extension", "orbits")

    def __init__(self, space, action, extension, orbits):
        self.space = space
        self.action = action
        self.extension = extension
        self.orbits = orbits


def build_corpus(seed: int = CORPUS_SEED, count: int = CORPUS_SIZE):
    rng = random.Random(seed)
    entries = []
    for _ in range(count):
        space = random_space(rng, rng.randint(4, 12))
        action = random_action(rng, space)
        extension = build_fixed_point_extension(space, action, CORPUS_BUDGET)
        act = adjoin_identity(action)
        orbits = {name: orbit(name, act, space, CORPUS_BUDGET) for name in space.names()}
        entries.append(CorpusEntry(space, action, extension, orbits))
    return entries


@pytest.fixture(scope="session")
def corpus_build():
    """Corpus entries plus the wall-clock seconds the build took."""
    import time

    t0 = time.perf_counter()
    entries = build_corpus()
    return entries, time.perf_counter() - t0


@pytest.fixture(scope="session")
def corpus(corpus_build):
    return corpus_build[0]


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(n, desc): acceptance criterion with its number")


_criteria_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        desc = marker.args[1] if len(marker.args) > 1 else item.name
        _criteria_results[marker.args[0]] = (rep.passed, desc)


def pytest_terminal_summary(terminalreporter):
    if not _criteria_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for n in sorted(_criteria_results):
        passed, desc = _criteria_results[n]
        terminalreporter.write_line(
            f"criterion {n:>2}: {'PASS' if passed else 'FAIL'} - {desc}")
