import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record one ``PASS``/``FAIL`` line for the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number, title, passed, detail=""):
        text = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}"
        if detail:
            text += f" :: {detail}"
        lines.append((number, text))
        print(text)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, text in sorted(lines):
        terminalreporter.write_line(text)
