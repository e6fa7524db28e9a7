import numpy as np
import pytest

from csnewton import GmresConfig, NewtonConfig, jfnk_cs_newton
from csnewton import problems

# (criterion label, passed, detail) tuples filled in by the acceptance tests
# and echoed once at the end of the run, one line per criterion.
_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_record():
    def record(label, passed, detail):
        _ACCEPTANCE_LINES.append((label, passed, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    def order(entry):
        return int(entry[0].split(" ")[0])

    for label, passed, detail in sorted(_ACCEPTANCE_LINES, key=order):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {label}: {detail}")


@pytest.fixture(scope="session")
def dnls_ground():
    """Converged standing-wave profile for the default lattice (shared:
    the solve costs a few seconds)."""
    params = problems.DnlsParams()
    cfg = NewtonConfig(h=0.05, step_tol=1e-12, max_iter=200,
                       inner=GmresConfig(rel_tol=1e-12))
    rep = jfnk_cs_newton(problems.dnls_steady_residual(params),
                         problems.dnls_initial_guess(params), cfg)
    assert rep.converged
    return params, np.asarray(rep.iterate_history[-1]), rep
