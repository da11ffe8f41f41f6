import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nullitylab import ExampleSpec, abelian, build_example, heisenberg3, so3  # noqa: E402

CUSTOM_A = np.array([[0.0, 1.0, 1.0], [-1.0, 0.0, 0.0], [-1.0, 0.0, 2.0]])


def corpus() -> dict:
    """Every algebra the property suite quantifies over."""
    algs = {f"family_d{d}": build_example(ExampleSpec(d)) for d in range(3, 13)}
    algs["abelian4"] = abelian(4)
    algs["heisenberg3"] = heisenberg3()
    algs["so3"] = so3()
    algs["custom_A_d3"] = build_example(ExampleSpec(3, A=CUSTOM_A, mode="custom_A"))
    return algs


@pytest.fixture(scope="session")
def algebra_corpus():
    return corpus()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
