import os
import shutil
import tempfile

import pytest

from xraypent import paper_system as ps


def pytest_configure(config):
    # One throwaway cache per session; CLI subprocesses inherit it.
    path = tempfile.mkdtemp(prefix="xraypent-test-cache-")
    os.environ["XRAYPENT_CACHE"] = path
    config._xraypent_cache = path


def pytest_unconfigure(config):
    shutil.rmtree(getattr(config, "_xraypent_cache", ""), ignore_errors=True)


@pytest.fixture(scope="session")
def cache_dir():
    return os.environ["XRAYPENT_CACHE"]


@pytest.fixture(scope="session")
def curve(cache_dir):
    return ps.final_resultant(cache_dir)


_ACCEPTANCE: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        verdict = "PASS" if report.passed else "FAIL"
        _ACCEPTANCE.append((props["criterion"], verdict, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, verdict, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {crit}: {verdict}  {detail}")
