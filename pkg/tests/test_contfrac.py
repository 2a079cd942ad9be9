import random

import pytest
from gmpy2 import mpq

from cyclebound.contfrac import (
    ContinuedFraction,
    cf_expand,
    convergents,
    nearest_fraction_above,
    smallest_denominator_in_open_interval,
)
from cyclebound.errors import InsufficientPrecisionError
from cyclebound.numerics import RealInterval, delta_interval, floor_rational


def _brute_smallest_denominator(alpha, beta):
    q = 1
    while True:
        p = floor_rational(alpha * q) + 1
        if mpq(p, q) < beta:
            return mpq(p, q)
        q += 1


def _brute_nearest_above(x_lo, x_hi, max_denominator):
    best = None
    for q in range(1, max_denominator + 1):
        p = floor_rational(x_lo * q) + 1
        assert floor_rational(x_hi * q) + 1 == p
        candidate = mpq(p, q)
        if best is None or candidate < best:
            best = candidate
    return best


@pytest.fixture
def delta():
    return delta_interval(384)


class TestContinuedFraction:
    def test_exact_rational(self):
        """Test that a rational expands completely"""
        cf = cf_expand(RealInterval.exact(mpq(22, 7)), 10)
        assert cf.partial_quotients == (3, 7)
        assert cf.exact
        assert str(cf) == "[3; 7]"

    def test_delta_prefix(self):
        """Test the leading quotients of log2(3)"""
        cf = cf_expand(delta_interval(256), 10)
        assert cf.partial_quotients == (1, 1, 1, 2, 2, 3, 1, 5, 2, 23)
        assert not cf.exact

    def test_precision_exhausted(self):
        """Test that expansion stops where the enclosure no longer decides"""
        cf = cf_expand(delta_interval(32), 100)
        assert cf.precision_exhausted
        assert cf.partial_quotients[:5] == (1, 1, 1, 2, 2)

    def test_wide_interval(self):
        """Test that a width-one enclosure cannot fix a0"""
        with pytest.raises(InsufficientPrecisionError) as exc_info:
            cf_expand(RealInterval(1, 2), 5)
        assert "insufficient precision" in str(exc_info.value)

    def test_convergents(self):
        """Test the convergent recurrence"""
        assert convergents(ContinuedFraction((1, 1, 1, 2, 2))) == [
            1, 2, mpq(3, 2), mpq(8, 5), mpq(19, 12)
        ]
        assert convergents(ContinuedFraction((3, 7))) == [3, mpq(22, 7)]
        assert convergents(ContinuedFraction((1, 1, 1, 2, 2, 3, 1, 5)))[-1] == mpq(485, 306)

    def test_invalid_quotients(self):
        """Test that nonpositive later quotients are refused"""
        with pytest.raises(ValueError) as exc_info:
            ContinuedFraction((1, 0))
        assert "must be positive" in str(exc_info.value)


class TestSmallestDenominator:
    def test_known_intervals(self):
        """Test small intervals with known answers"""
        found = smallest_denominator_in_open_interval(
            RealInterval.exact(mpq(3, 10)), RealInterval.exact(mpq(1, 2))
        )
        assert found.value == mpq(1, 3)
        found = smallest_denominator_in_open_interval(
            RealInterval.exact(mpq(1, 3)), RealInterval.exact(mpq(1, 2))
        )
        assert found.value == mpq(2, 5)

    @pytest.mark.parametrize("alpha, beta", [
        (mpq(13, 29), mpq(7, 15)),
        (mpq(2, 3), mpq(3, 4)),
        (mpq(5, 2), mpq(26, 10)),
        (mpq(101, 103), mpq(1, 1)),
        (mpq(1, 1), mpq(1001, 1000)),
        (mpq(355, 113), mpq(22, 7)),
    ])
    def test_matches_brute_force(self, alpha, beta):
        """Test agreement with an exhaustive search over denominators"""
        found = smallest_denominator_in_open_interval(
            RealInterval.exact(alpha), RealInterval.exact(beta)
        )
        assert found.value == _brute_smallest_denominator(alpha, beta)

    def test_random_intervals(self):
        """Test random intervals with small endpoint denominators against brute force"""
        rng = random.Random(16)
        for _ in range(2000):
            first = mpq(rng.randrange(0, 600), rng.randrange(1, 201))
            second = mpq(rng.randrange(0, 600), rng.randrange(1, 201))
            if first == second:
                continue
            alpha, beta = min(first, second), max(first, second)
            found = smallest_denominator_in_open_interval(
                RealInterval.exact(alpha), RealInterval.exact(beta)
            )
            assert found.value == _brute_smallest_denominator(alpha, beta)

    @pytest.mark.slow
    def test_random_intervals_many(self):
        """Test 10,000 random intervals with endpoint denominators up to 200"""
        rng = random.Random(17)
        checked = 0
        while checked < 10_000:
            first = mpq(rng.randrange(0, 600), rng.randrange(1, 201))
            second = mpq(rng.randrange(0, 600), rng.randrange(1, 201))
            if first == second:
                continue
            alpha, beta = min(first, second), max(first, second)
            found = smallest_denominator_in_open_interval(
                RealInterval.exact(alpha), RealInterval.exact(beta)
            )
            assert found.value == _brute_smallest_denominator(alpha, beta)
            checked += 1

    def test_near_delta(self, delta):
        """Test intervals just above delta against brute force"""
        for width in (mpq(1, 10**3), mpq(1, 10**5), mpq(1, 10**7)):
            beta = delta + RealInterval.exact(width, 384)
            found = smallest_denominator_in_open_interval(delta, beta)
            assert delta.hi < found.value < beta.lo
            assert found.value == _brute_smallest_denominator(delta.hi, beta.lo)

    def test_tiny_window_above_delta(self, delta):
        """Test that a window of 6.9e-32 above delta needs K > 5.2e15"""
        beta = delta + RealInterval.exact(mpq(69, 10**33), 384)
        found = smallest_denominator_in_open_interval(delta, beta)
        assert found.denominator > 52 * 10**14

    def test_overlapping_enclosures(self):
        """Test that overlapping enclosures ask for more precision"""
        with pytest.raises(InsufficientPrecisionError) as exc_info:
            smallest_denominator_in_open_interval(RealInterval(0, 2), RealInterval(1, 3))
        assert "overlap" in str(exc_info.value)

    def test_empty_interval(self):
        """Test that alpha above beta is refused"""
        with pytest.raises(ValueError) as exc_info:
            smallest_denominator_in_open_interval(RealInterval.exact(2), RealInterval.exact(1))
        assert "empty open interval" in str(exc_info.value)


class TestNearestFractionAbove:
    @pytest.mark.parametrize("max_denominator", [1, 2, 5, 12, 40, 306, 1000])
    def test_matches_brute_force(self, delta, max_denominator):
        """Test agreement with an exhaustive search"""
        found = nearest_fraction_above(delta, max_denominator)
        assert found == _brute_nearest_above(delta.lo, delta.hi, max_denominator)

    def test_denominator_one(self, delta):
        """Test that 2/1 is the first fraction above delta"""
        assert nearest_fraction_above(delta, 1) == 2

    def test_exact_input(self):
        """Test that an exact rational is refused"""
        with pytest.raises(ValueError) as exc_info:
            nearest_fraction_above(RealInterval.exact(mpq(3, 2)), 10)
        assert "irrational" in str(exc_info.value)
