import contextlib
import os

import pytest

from mutanthedron import corpus, lorentz, table
from mutanthedron.pipeline import Pipeline

# (criterion, PASS/FAIL, detail) lines printed in the terminal summary
ACCEPTANCE_LINES = []


class _Criterion:
    def __init__(self, key, title):
        self.key, self.title, self.detail = key, title, ""


@contextlib.contextmanager
def _record(key, title):
    c = _Criterion(key, title)
    try:
        yield c
    except BaseException as exc:
        ACCEPTANCE_LINES.append((key, title, "FAIL", c.detail or f"{type(exc).__name__}: {exc}".splitlines()[0]))
        raise
    ACCEPTANCE_LINES.append((key, title, "PASS", c.detail))


@pytest.fixture
def criterion():
    """Context manager that records one pass/fail line for an acceptance criterion."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key, title, status, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{key} {status}  {title}" + (f"  [{detail}]" if detail else ""))


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    """A fresh cache per session unless MUTANTHEDRON_TEST_CACHE points at a reusable one."""
    env = os.environ.get("MUTANTHEDRON_TEST_CACHE")
    return env if env else str(tmp_path_factory.mktemp("mhcache"))


@pytest.fixture(scope="session")
def pipeline(cache_dir):
    return Pipeline(cache_dir)


@pytest.fixture(scope="session")
def table_results(pipeline):
    """Every pair of the table, computed once per session."""
    return table.run_table(pipeline, jobs=os.cpu_count() or 1)


@pytest.fixture(scope="session")
def aa5():
    return lorentz.realize(corpus.build("AA5"), 50)


@pytest.fixture(scope="session")
def aa5m():
    return lorentz.realize(corpus.build("AA5m"), 50)


@pytest.fixture(scope="session")
def corpus_realizations():
    """Every corpus polyhedron realized at 60 digits."""
    out = {}
    for e in corpus.corpus():
        out[e.name] = lorentz.realize(e.build(), 60)
    return out
