from pathlib import Path

import pytest
from hypothesis import strategies as st

from stackwalk.complex import from_facets

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES: list[str] = []


facet_lists = st.lists(
    st.frozensets(st.integers(0, 7), min_size=1, max_size=4),
    min_size=1, max_size=6,
)

complexes = facet_lists.map(lambda fs: from_facets([sorted(f) for f in fs]))

small_complexes = st.lists(
    st.frozensets(st.integers(0, 9), min_size=1, max_size=5),
    min_size=1, max_size=8,
).map(lambda fs: from_facets([sorted(f) for f in fs]))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
