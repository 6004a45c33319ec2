"""Shared pytest configuration for the tauberlab test suite."""

from hypothesis import HealthCheck, settings

# Quadrature-backed properties can exceed the default 200 ms deadline on a
# loaded machine; correctness is grid-driven, not time-driven.
settings.register_profile(
    "tauberlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("tauberlab")
