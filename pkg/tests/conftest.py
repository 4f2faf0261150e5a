import math

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def ulps_between(a: float, b: float, anchor: float = 0.0) -> float:
    """Distance between two floats in units of the last place.

    The ulp is taken at the largest magnitude involved; ``anchor`` sets a
    floor on that magnitude, for comparisons of O(1)-bounded quantities
    whose absolute error budget should not shrink with the values.
    """
    if a == b:
        return 0.0
    scale = max(abs(a), abs(b), anchor)
    return abs(a - b) / math.ulp(scale)


def assert_ulps(a: float, b: float, tol: float = 4.0, anchor: float = 0.0) -> None:
    got = ulps_between(a, b, anchor=anchor)
    assert got <= tol, f"{a!r} vs {b!r}: {got:.2f} ulps > {tol}"
