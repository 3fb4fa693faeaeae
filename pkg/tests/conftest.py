import numpy as np
import pytest

# Published example data: first 25 subgroups (n=5), columns X-bar and S as printed.
TABLE1 = """\
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.3 50.0 50.0 50.0 50.0 50.1 0.2
50.0 50.2 50.0 50.7 50.0 50.2 0.3
50.4 50.0 50.0 50.0 50.0 50.1 0.2
50.0 50.3 50.8 50.0 50.0 50.2 0.3
50.6 50.0 50.0 50.0 51.2 50.4 0.5
50.0 50.5 50.9 50.8 50.6 50.5 0.4
50.0 50.0 50.0 50.0 50.7 50.1 0.3
50.0 50.4 50.0 50.0 50.0 50.1 0.2
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.9 50.0 50.0 50.0 50.0 50.2 0.4
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.0 50.0 50.0 50.0 50.0 50.0 0.0
50.3 50.0 50.0 50.0 50.0 50.1 0.1
50.0 50.0 50.0 50.0 50.5 50.1 0.2
50.0 50.0 50.0 50.2 50.0 50.0 0.1
50.0 50.0 50.0 51.0 50.0 50.2 0.4
50.0 50.0 50.0 50.0 50.0 50.0 0.0
"""

PAPER_MU = 49.0279
PAPER_SIGMA = 0.9915
PAPER_C = 50.0


def table1_array() -> np.ndarray:
    return np.array([[float(x) for x in line.split()] for line in TABLE1.strip().splitlines()])


@pytest.fixture
def table1():
    arr = table1_array()
    return arr[:, :5], arr[:, 5], arr[:, 6]


@pytest.fixture
def table1_csv(tmp_path):
    path = tmp_path / "table1.csv"
    rows = table1_array()[:, :5]
    path.write_text("\n".join(",".join(f"{v:.1f}" for v in r) for r in rows) + "\n")
    return path


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
