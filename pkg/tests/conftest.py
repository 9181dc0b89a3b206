import pytest

_VERDICTS = []


class _Verdict:
    def __init__(self, number, title):
        self.number, self.title = number, title

    def check(self, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {self.number:>2}: {self.title} | {detail}"
        _VERDICTS.append((self.number, line))
        print(line)
        assert ok, line


@pytest.fixture
def criterion():
    return _Verdict


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
