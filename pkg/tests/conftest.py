import os

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=20,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def _c(re, im):
    return st.builds(complex, st.floats(*re), st.floats(*im))


# tau near the fundamental domain, x inside the first cell
taus = _c((-0.5, 0.5), (0.85, 1.8))
xs = _c((-0.45, 0.45), (-0.2, 0.2))
small = _c((-0.4, 0.4), (-0.4, 0.4))
