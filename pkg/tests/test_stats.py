import math
from fractions import Fraction

import pytest

from blockmonte.errors import DegenerateSampleError
from blockmonte.stats import (
    CONSTANTS,
    ratio_stderr,
    relative_error,
    round_to_sig,
    wilson_ci,
)

# 30-digit references for checking the stored float literals.
REFERENCE_30 = {
    "sqrt2": "1.41421356237309504880168872421",
    "pi": "3.14159265358979323846264338328",
    "e": "2.71828182845904523536028747135",
    "zeta3": "1.20205690315959428539973816151",
}


def boustrophedon_zigzag(limit: int) -> list[int]:
    # Test-local alternating-permutation counts, free of the library's
    # 64-bit cap so the series can run past n = 20.
    row = [1]
    counts = [1]
    for i in range(1, limit + 1):
        prev = row
        row = [0]
        for k in range(1, i + 1):
            row.append(row[k - 1] + prev[i - k])
        counts.append(row[-1])
    return counts


class TestReferenceConstants:
    @pytest.mark.parametrize("name", sorted(REFERENCE_30))
    def test_literals_match_published_digits(self, name):
        assert getattr(CONSTANTS, name) == float(REFERENCE_30[name])

    def test_sec_tan_constant_against_trig(self):
        assert CONSTANTS.sec1_plus_tan1 == pytest.approx(
            math.tan(1.0) + 1.0 / math.cos(1.0), rel=0, abs=0)

    def test_sec_tan_constant_against_its_series(self):
        # Partial sums of sum A_n/n! converge only geometrically (ratio 2/pi),
        # so the 30-term sum pins the constant to about 3e-6 absolute; check
        # agreement against the rigorous tail bound 2*(2/pi)^32/(1 - 2/pi).
        counts = boustrophedon_zigzag(30)
        partial = sum(Fraction(counts[n], math.factorial(n)) for n in range(31))
        tail_bound = 2 * (2 / math.pi) ** 32 / (1 - 2 / math.pi)
        gap = CONSTANTS.sec1_plus_tan1 - float(partial)
        assert 0 < gap < tail_bound


class TestWilson:
    def test_zero_successes_low_boundary(self):
        low, high = wilson_ci(0, 50, 1.96)
        assert low == 0.0
        assert 0 < high < 1

    def test_all_successes_high_boundary(self):
        low, high = wilson_ci(50, 50, 1.96)
        assert high == 1.0
        assert 0 < low < 1

    def test_quoted_proportion_interval(self):
        low, high = wilson_ci(508, 619, 1.96)
        assert low < 508 / 619 < high
        assert 0 < low and high < 1

    @pytest.mark.parametrize("successes,trials", [(1, 10), (5, 10), (123, 456), (999, 1000)])
    def test_interval_contains_point_estimate(self, successes, trials):
        low, high = wilson_ci(successes, trials, 2.5)
        assert 0 <= low <= successes / trials <= high <= 1

    def test_validation(self):
        with pytest.raises(ValueError):
            wilson_ci(1, 0, 1.96)
        with pytest.raises(ValueError):
            wilson_ci(5, 4, 1.96)
        with pytest.raises(ValueError):
            wilson_ci(1, 10, 0.0)


class TestRatioStderr:
    def test_all_successes_means_zero_spread(self):
        assert ratio_stderr(1000, 1000) == 0.0

    def test_e_counts_within_three_stderr(self):
        stderr = ratio_stderr(238, 647)
        assert stderr > 0
        assert abs(647 / 238 - CONSTANTS.e) < 3 * stderr

    def test_zeta_counts_within_three_stderr(self):
        stderr = ratio_stderr(58, 70)
        assert stderr > 0
        assert abs(70 / 58 - CONSTANTS.zeta3) < 3 * stderr

    def test_zero_successes_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            ratio_stderr(0, 100)


class TestRelativeError:
    def test_sqrt2_reported_line(self):
        assert relative_error(1.3902, CONSTANTS.sqrt2) == pytest.approx(1.70)

    def test_exact_match_is_zero(self):
        assert relative_error(2.5, 2.5) == 0.0

    def test_e_reported_line(self):
        assert relative_error(2.71849, CONSTANTS.e) == pytest.approx(0.00766)

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            relative_error(1.0, 0.0)

    @pytest.mark.parametrize("value,expected", [
        (1.6980152, 1.70), (4.4920337, 4.49), (0.40261393, 0.403), (123.456, 123.0)])
    def test_three_significant_digits(self, value, expected):
        assert round_to_sig(value, 3) == pytest.approx(expected)
