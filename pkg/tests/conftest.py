import numpy as np


def random_corr(rng, p, extra=2):
    """Random well-formed correlation matrix of order ``p``."""
    b = rng.standard_normal((p, p + extra))
    c = b @ b.T
    d = 1 / np.sqrt(np.diag(c))
    r = c * d[:, None] * d[None, :]
    r = (r + r.T) / 2
    np.fill_diagonal(r, 1.0)
    return r


def regression_multiple_correlations(r):
    """Multiple correlations from the normal equations, one criterion at a time."""
    r = np.asarray(r)
    p = r.shape[0]
    out = np.empty(p)
    for i in range(p):
        rest = [j for j in range(p) if j != i]
        v = r[i, rest]
        beta = np.linalg.solve(r[np.ix_(rest, rest)], v)
        out[i] = np.sqrt(v @ beta)
    return out


# Acceptance results collected for the end-of-run summary.
ACCEPTANCE_NOTES: dict[str, list[str]] = {}
_acceptance: list[tuple[str, str]] = []


def note(test_name: str, line: str) -> None:
    ACCEPTANCE_NOTES.setdefault(test_name, []).append(line)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in _acceptance:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
        for line in ACCEPTANCE_NOTES.get(name, []):
            terminalreporter.write_line(f"      {line}")
