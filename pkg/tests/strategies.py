"""Hypothesis strategies shared across test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from macmahon.poly import Polynomial, var

SMALL_VARS = [var("A", 1, 1), var("A", 1, 2), var("A", 2, 1), var("beta"), var("theta", 1), var("z")]
GRADED_VARS = [var("A", 1, 1), var("A", 2, 2), var("z"), var("theta", 1)]

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def monomials(draw, pool=SMALL_VARS, max_factors=3):
    p = Polynomial.const(1)
    for v in draw(st.lists(st.sampled_from(pool), max_size=max_factors)):
        p = p * v
    return p


@st.composite
def polynomials(draw, pool=SMALL_VARS, max_terms=4):
    total = Polynomial()
    for _ in range(draw(st.integers(0, max_terms))):
        total = total + draw(monomials(pool)).scale(draw(coefficients))
    return total


@st.composite
def positive_grade(draw, max_terms=4):
    """Polynomials whose every term has grade >= 1 (beta is weight 0 and may tag along)."""
    total = Polynomial()
    for _ in range(draw(st.integers(0, max_terms))):
        head = draw(st.sampled_from(GRADED_VARS))
        tail = draw(monomials([var("beta"), var("z"), var("A", 1, 1)], max_factors=2))
        total = total + (head * tail).scale(draw(coefficients))
    return total


int_matrices = lambda n: st.lists(  # noqa: E731
    st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)

__all__ = ["Fraction", "coefficients", "monomials", "polynomials", "positive_grade", "int_matrices"]
