import sys

import pytest

from fqip.field import FieldSpec

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2)
F5 = FieldSpec(5)
F9 = FieldSpec(3, 2)


@pytest.fixture(params=[F2, F3, F4, F5, F9], ids=["F2", "F3", "F4", "F5", "F9"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
