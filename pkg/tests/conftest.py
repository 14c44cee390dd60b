import os
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden():
    """Compare text against tests/golden/<name>; SUPERDUAL_REGEN=1 rewrites the file."""
    def check(name: str, text: str):
        path = GOLDEN / name
        if os.environ.get("SUPERDUAL_REGEN") == "1" or not path.exists():
            if os.environ.get("SUPERDUAL_REGEN") != "1":
                pytest.fail(f"missing golden file {path}; run scripts/regen_goldens.py")
            path.write_text(text)
        assert text == path.read_text(), f"output differs from {path}"
    return check


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, summary_lines
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in summary_lines():
        terminalreporter.write_line(line)
