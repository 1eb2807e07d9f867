import re

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_force_shrink(x, lam, m, step=1e-4):
    """Grid-search minimiser of 0.5*(x - r)^2 + lam*|r| over r in [-m, m]."""
    grid = np.arange(-m, m + step / 2, step)
    grid = np.clip(grid, -m, m)
    obj = 0.5 * (x - grid) ** 2 + lam * np.abs(grid)
    return grid[np.argmin(obj)]


def central_difference(fun, x, step=1e-6):
    """Central finite-difference gradient of a scalar function of a matrix."""
    grad = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        xp = x.copy()
        xm = x.copy()
        xp[idx] += step
        xm[idx] -= step
        grad[idx] = (fun(xp) - fun(xm)) / (2 * step)
    return grad


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when in ("call", "setup"):
                rows.append((props["criterion"], outcome.upper(), props.get("detail", "")))
                continue
            match = re.search(r"test_c(\d+)_(\w+)", rep.nodeid)
            if outcome == "skipped" and match and isinstance(rep.longrepr, tuple):
                name = f"C{match.group(1)} {match.group(2).replace('_', ' ')}"
                rows.append((name, "SKIPPED", rep.longrepr[2].removeprefix("Skipped: ")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in sorted(rows, key=lambda r: int(r[0].split()[0][1:])):
        terminalreporter.write_line(f"{outcome:7s} {name}  {detail}")
