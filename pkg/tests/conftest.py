from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nctorsion.algebra import MultiPoly, RationalFunction

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_int = st.integers(min_value=-4, max_value=4)


@st.composite
def laurent_polys(draw, nvars=1, max_terms=3, exp_range=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(-exp_range, exp_range)) for _ in range(nvars))
        terms[e] = Fraction(draw(small_int))
    return MultiPoly(nvars, terms)


@st.composite
def rational_functions(draw, nvars=1, nonzero=False):
    num = draw(laurent_polys(nvars))
    if nonzero and num.is_zero():
        num = MultiPoly.constant(nvars, 1)
    den = draw(laurent_polys(nvars))
    if den.is_zero():
        den = MultiPoly.constant(nvars, 1)
    return RationalFunction(num, den)


def points(nvars, seed=0):
    """A few rational evaluation points that avoid small poles."""
    import random
    rng = random.Random(seed)
    return [tuple(Fraction(rng.randint(7, 97), rng.randint(3, 11)) for _ in range(nvars)) for _ in range(5)]
