from fractions import Fraction

from hypothesis import strategies as st

from iterant.algebra import IterantElement, IterantView

small_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=7)
nonzero_fractions = small_fractions.filter(bool)
views = st.builds(IterantView, small_fractions, small_fractions)
elements = st.builds(IterantElement, views, views)


def F(*args) -> Fraction:
    return Fraction(*args)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
