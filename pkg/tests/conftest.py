import sys
from fractions import Fraction

import pytest

from daha_hc.polyring import ParamSpec
from daha_hc.rootdata import build_root_system


def params_for(label: str, v=Fraction(1, 2), u=Fraction(1, 3)) -> ParamSpec:
    return ParamSpec(build_root_system(label), v, u)


@pytest.fixture(scope="session")
def a1():
    return params_for("A1")


@pytest.fixture(scope="session")
def a2():
    return params_for("A2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
