from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(bound: int = 9):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))


def matrices(rows, cols, bound: int = 4):
    return st.lists(st.lists(rationals(bound), min_size=cols, max_size=cols), min_size=rows, max_size=rows)
