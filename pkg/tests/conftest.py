from functools import lru_cache

from hypothesis import HealthCheck, settings

from sympconn.config import build_algebra
from sympconn.grading import grade
from sympconn.sympdata import extract

settings.register_profile("repo", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

IDENTITY_CASES = ("sl_real:3", "sl_real:4", "su:1,2", "su:2,2", "sp_real:2", "sp_real:3",
                  "so:2,3", "g2_split")


@lru_cache(maxsize=None)
def algebra(spec):
    return build_algebra(spec)


@lru_cache(maxsize=None)
def grading(spec):
    return grade(algebra(spec))


@lru_cache(maxsize=None)
def ssd(spec):
    return extract(grading(spec))


@lru_cache(maxsize=None)
def flow_context(spec):
    from sympconn.contactflow import FlowContext
    return FlowContext(algebra(spec), grading(spec), ssd(spec))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[n])
