from fractions import Fraction

from hypothesis import strategies as st

from phylogf.algebra import MultilinearElem

small_fractions = st.builds(
    Fraction, st.integers(min_value=-20, max_value=20), st.integers(min_value=1, max_value=6)
)


@st.composite
def elems(draw, k=None, unit=False):
    if k is None:
        k = draw(st.integers(min_value=0, max_value=4))
    coeffs = draw(st.lists(small_fractions, min_size=1 << k, max_size=1 << k))
    if unit and coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    return MultilinearElem(k, coeffs)


@st.composite
def elem_pairs(draw, count=2):
    k = draw(st.integers(min_value=0, max_value=4))
    return tuple(draw(elems(k)) for _ in range(count))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
