from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "exact",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


def fractions(max_num: int = 12, max_den: int = 6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def weight_triples(max_num: int = 12, max_den: int = 6):
    return st.tuples(fractions(max_num, max_den), fractions(max_num, max_den), fractions(max_num, max_den))
