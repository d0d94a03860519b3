from __future__ import annotations

import oracles


def pytest_terminal_summary(terminalreporter):
    if oracles.ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(oracles.ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
