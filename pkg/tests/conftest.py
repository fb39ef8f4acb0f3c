from __future__ import annotations

import textwrap
from pathlib import Path

import pytest

from conflog.corpus import SourceCorpus, parse_corpus
from conflog.lexicon import OptionLexicon

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def write_sources(root: Path, files: dict[str, str]) -> Path:
    for name, body in files.items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(textwrap.dedent(body), encoding="utf-8")
    return root


@pytest.fixture
def make_corpus(tmp_path):
    def build(files: dict[str, str] | str) -> SourceCorpus:
        if isinstance(files, str):
            files = {"unit.c": files}
        return parse_corpus(write_sources(tmp_path / "src", files))

    return build


@pytest.fixture
def lexicon_of():
    return OptionLexicon.from_names


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if rep.failed:
        _ACCEPTANCE[name] = "FAIL"
    elif rep.when == "call" and rep.passed:
        _ACCEPTANCE.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, status in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{status}  {name}")
