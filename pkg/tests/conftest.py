import pytest
from hypothesis import strategies as st

from ciliate_assembly import LegalString

ACCEPTANCE = {}


@st.composite
def legal_strings(draw, max_pointers=5):
    m = draw(st.integers(0, max_pointers))
    values = [v for v in range(2, m + 2) for _ in range(2)]
    order = draw(st.permutations(values))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=len(order), max_size=len(order)))
    return LegalString(v * s for v, s in zip(order, signs))


@pytest.fixture
def acceptance():
    """Record ``name -> (passed, detail)`` for the end-of-run summary."""
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (passed, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
