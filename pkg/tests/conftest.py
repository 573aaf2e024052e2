import os

import pytest
from hypothesis import HealthCheck, settings

from relolog import corpus
from relolog.logic import parse_signature_map, parse_theory
from relolog.text import parse_instance, parse_olog

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = os.path.join(os.path.dirname(__file__), "data")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture(scope="session")
def foaf():
    return parse_olog(corpus.read("foaf.olog"))


@pytest.fixture(scope="session")
def foaf_inst(foaf):
    return parse_instance(corpus.read("foaf.inst"), foaf)


@pytest.fixture(scope="session")
def family():
    return parse_olog(corpus.read("family.olog"))


@pytest.fixture(scope="session")
def shapes():
    return parse_olog(corpus.read("shapes.olog"))


@pytest.fixture(scope="session")
def foaf_theory():
    return parse_theory(corpus.read("foaf.theory"))


@pytest.fixture(scope="session")
def shapes_theory():
    return parse_theory(corpus.read("shapes.theory"))


@pytest.fixture(scope="session")
def foaf_map():
    return parse_signature_map(corpus.read("foaf.map"), corpus.HERE)


@pytest.fixture(scope="session")
def shapes_map():
    return parse_signature_map(corpus.read("shapes.map"), corpus.HERE)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
