import sys

import pytest

from hnnsim.mapping import NocConfig
from hnnsim.workload import Dense, LayerSpec, NetworkModel


def dense_chain(widths, name="toy", **layer_kw) -> NetworkModel:
    """Dense layers widths[0] -> widths[1] -> ..."""
    layers = [LayerSpec(Dense(a, b), name=f"fc{i}", **layer_kw)
              for i, (a, b) in enumerate(zip(widths, widths[1:]))]
    return NetworkModel(name, layers)


@pytest.fixture
def noc():
    return NocConfig()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in acceptance.RESULTS:
        terminalreporter.write_line(line)
