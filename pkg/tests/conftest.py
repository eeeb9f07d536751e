import json
import os
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
BOOKS_DIR = Path(os.environ.get("LEXISCALE_BOOKS_DIR", DATA / "books"))
SPEECH_DIR = os.environ.get("LEXISCALE_SPEECH_DIR")


@pytest.fixture(scope="session")
def published():
    return json.loads((DATA / "published_stats.json").read_text())


@pytest.fixture(scope="session")
def alice():
    from lexiscale.corpus import load_corpus

    path = BOOKS_DIR / "alice.txt"
    if not path.exists():
        pytest.skip("alice.txt not available")
    return load_corpus(path, identifier="alice")


def pytest_terminal_summary(terminalreporter):
    module = terminalreporter.config.pluginmanager.get_plugin("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        import sys
        results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
