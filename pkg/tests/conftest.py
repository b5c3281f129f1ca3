import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance scorecard after the test table."""
    import sys

    module = next((m for name, m in sys.modules.items()
                   if name.endswith("test_acceptance") and m is not None),
                  None)
    lines = getattr(module, "SCORECARD", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
