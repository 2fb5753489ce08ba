import math

import numpy as np
import pytest

from popuc.zeros import ZeroSet

TWO_PI = 2 * math.pi

# Every ZeroSet built during the session is checked for gap closure and the
# pigeonhole bound at the end of the test that built it.
_created: list[ZeroSet] = []
_stats = {"checked": 0}
_orig_init = ZeroSet.__init__


def _recording_init(self, *args, **kwargs):
    _orig_init(self, *args, **kwargs)
    _created.append(self)


ZeroSet.__init__ = _recording_init

ACCEPTANCE_LINES: list[str] = []


def zero_set_problems(zs: ZeroSet) -> list[str]:
    gaps = np.diff(np.append(zs.thetas, zs.thetas[0] + TWO_PI))
    mean = TWO_PI / zs.n_plus_1
    out = []
    if abs(gaps.sum() - TWO_PI) > 1e-9:
        out.append(f"gaps sum to {gaps.sum()!r}")
    if not gaps.min() <= mean + 1e-15 or not gaps.max() >= mean - 1e-15:
        out.append(f"pigeonhole fails: min {gaps.min()!r}, max {gaps.max()!r}, mean {mean!r}")
    return out


@pytest.fixture(autouse=True)
def _check_zero_sets():
    start = len(_created)
    yield
    fresh = _created[start:]
    del _created[start:]
    _stats["checked"] += len(fresh)
    for zs in fresh:
        problems = zero_set_problems(zs)
        if problems:
            pytest.fail(f"ZeroSet(n+1={zs.n_plus_1}) violates closure/pigeonhole: {problems}")


def zero_sets_checked() -> int:
    return _stats["checked"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    terminalreporter.write_line(f"zero sets checked for closure/pigeonhole: {_stats['checked']}")


def cyclic_match(a: np.ndarray, b: np.ndarray) -> float:
    """Largest circular angle difference after the best cyclic alignment."""
    a, b = np.sort(a), np.sort(b)
    assert a.size == b.size
    best = math.inf
    for shift in range(a.size):
        d = np.abs((a - np.roll(b, shift) + math.pi) % TWO_PI - math.pi)
        best = min(best, float(d.max()))
    return best
