import numpy as np
import pytest

from ivcollage.ivfun import IvFun1D, dyadic_nodes
from ivcollage.problems import example, make_target

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ok, label, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


@pytest.fixture
def record():
    """Register one acceptance line, then assert it."""

    def _record(ok, label, detail):
        ACCEPTANCE.append((bool(ok), label, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return _record


@pytest.fixture(scope="session")
def ex1():
    return example(1)


@pytest.fixture(scope="session")
def ex2():
    return example(2)


@pytest.fixture(scope="session")
def ex1_target_m7(ex1):
    family, lam0 = ex1
    return make_target(family, lam0, 3, m=7)


def random_grid_fun(rng, level=4, domain=(0.0, 1.0), scale=2.0):
    nodes = dyadic_nodes(level, domain)
    lo = rng.uniform(-scale, scale, nodes.size)
    width = rng.uniform(0.0, scale, nodes.size)
    return IvFun1D.from_grid(nodes, lo, lo + width)
