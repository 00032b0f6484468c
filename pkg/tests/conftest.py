import ctypes
import re

_CRITERIA: dict[int, str] = {}


def _keep_large_blocks():
    """Depth-3 hat codes are ~13 MB strings built and dropped thousands of times.

    glibc hands blocks that size back to the kernel on every free, so each new
    one page-faults in from scratch; raising the mmap and trim thresholds lets
    the heap reuse them.  No-op off glibc.
    """
    try:
        libc = ctypes.CDLL("libc.so.6")
        libc.mallopt(-3, 1 << 30)  # M_MMAP_THRESHOLD
        libc.mallopt(-1, 1 << 31)  # M_TRIM_THRESHOLD
    except (OSError, AttributeError):
        pass


_keep_large_blocks()


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.failed:
        _CRITERIA[n] = "FAIL"
    elif report.when == "call" and n not in _CRITERIA:
        _CRITERIA[n] = "PASS"
    elif report.skipped:
        _CRITERIA.setdefault(n, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {_CRITERIA[n]}")
