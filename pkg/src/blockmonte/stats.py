"""Reference constants and the uncertainty arithmetic shared by all
estimators: Wilson intervals for proportions, delta-method standard errors
for trials/successes ratios, and relative-error reporting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateSampleError


@dataclass(frozen=True)
class ReferenceConstants:
    """Published values, stored as literals so they stay independent of the
    code under test; sec1_plus_tan1 is the one derived member and is
    cross-checked against its own series in the test suite."""

    sqrt2: float = 1.4142135623730951
    pi: float = 3.1415926535897932
    e: float = 2.7182818284590452
    zeta3: float = 1.2020569031595943
    sec1_plus_tan1: float = field(default=math.tan(1.0) + 1.0 / math.cos(1.0))


CONSTANTS = ReferenceConstants()


def wilson_ci(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Stays inside [0, 1] and contains successes/trials for any inputs, which
    a plain normal interval does not guarantee near the boundaries.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must be in [0, trials]")
    if not z > 0:
        raise ValueError("z must be > 0")
    p_hat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p_hat + z2 / (2 * trials)) / denom
    margin = (z / denom) * math.sqrt(p_hat * (1 - p_hat) / trials + z2 / (4 * trials * trials))
    return max(0.0, center - margin), min(1.0, center + margin)


def ratio_stderr(successes: int, trials: int) -> float:
    """Delta-method standard error of the ratio trials/successes.

    With p_hat = successes/trials, the first-order error of 1/p_hat is
    sqrt(p_hat (1 - p_hat) / trials) / p_hat^2.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if successes > trials or successes < 0:
        raise ValueError("successes must be in [0, trials]")
    if successes == 0:
        raise DegenerateSampleError("no successes: ratio stderr undefined")
    p_hat = successes / trials
    return math.sqrt(p_hat * (1.0 - p_hat) / trials) / (p_hat * p_hat)


def relative_error(estimate: float, reference: float) -> float:
    """Percent error 100*|estimate - reference|/|reference|, rounded to
    3 significant digits."""
    if reference == 0:
        raise ValueError("reference must be non-zero")
    value = 100.0 * abs(estimate - reference) / abs(reference)
    return round_to_sig(value, 3)


def round_to_sig(value: float, digits: int) -> float:
    if value == 0 or not math.isfinite(value):
        return value
    scale = digits - 1 - math.floor(math.log10(abs(value)))
    return round(value, scale)
