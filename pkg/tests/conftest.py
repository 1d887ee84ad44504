import time

import numpy as np
import pytest

from ptdirac import oracle
from ptdirac.model import sech

ACCEPTANCE = {}


def _scarf(a1, a2):
    return lambda x: a1 * sech(x) ** 2 + a2 * sech(x) * np.tanh(x)


POTENTIALS = {
    "eq38": _scarf(-1.0, -1j),
    "eq27": _scarf(-1.0, 1j),
    "eq39": _scarf(-3.0, 3j),
    "poschl-teller": _scarf(-1.0, 0.0),
}


@pytest.fixture(scope="session")
def potentials():
    return POTENTIALS


@pytest.fixture(scope="session")
def default_states():
    """Bound states on the default l=15, n=3001 grid, computed once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            start = time.perf_counter()
            cache[name] = oracle.bound_states(POTENTIALS[name], oracle.Grid())
            get.elapsed[name] = time.perf_counter() - start
        return cache[name]

    get.elapsed = {}
    return get


@pytest.fixture
def record():
    def _record(number, passed, detail):
        ACCEPTANCE[number] = (bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE, key=lambda k: (int(str(k).split("-")[0]), str(k))):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
