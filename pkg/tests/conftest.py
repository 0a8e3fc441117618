import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from blockmatch.frame_model import Frame  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def noise_pair(rng):
    """64x64 noise reference and the same content sampled at offset (+3, -2)."""
    big = rng.integers(0, 256, size=(96, 96), dtype=np.uint8)
    ref = big[16:80, 16:80]
    # current(x, y) = ref(x + 3, y - 2)
    cur = big[16 - 2:80 - 2, 16 + 3:80 + 3]
    return Frame.from_array(cur), Frame.from_array(ref)


def make_shifted(rng, width, height, dx, dy):
    """Noise reference and a current frame with current(x, y) = ref(x + dx, y + dy)."""
    pad = max(abs(dx), abs(dy)) + 1
    big = rng.integers(0, 256, size=(height + 2 * pad, width + 2 * pad), dtype=np.uint8)
    ref = big[pad:pad + height, pad:pad + width]
    cur = big[pad + dy:pad + dy + height, pad + dx:pad + dx + width]
    return Frame.from_array(cur), Frame.from_array(ref)


# one summary line per acceptance criterion

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.append((marker.args[0], marker.args[1], report.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    grouped = {}
    for number, title, outcome in _ACCEPTANCE:
        grouped.setdefault((number, title), []).append(outcome)
    terminalreporter.section("acceptance criteria")
    for (number, title), outcomes in sorted(grouped.items()):
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        cases = f" [{outcomes.count('passed')}/{len(outcomes)} cases]" if len(outcomes) > 1 else ""
        terminalreporter.write_line(f"{verdict}  AC{number}  {title}{cases}")
