import pytest
from gmpy2 import mpq

from cyclebound.numerics import delta_interval
from cyclebound.pipeline import ThresholdMode, x0_threshold

K_TARGET = 137_500_000_000


@pytest.fixture(scope="module")
def weighted():
    return x0_threshold(K_TARGET, ThresholdMode.WEIGHTED)


class TestX0Threshold:
    def test_weighted(self, weighted):
        """Test that K >= 1.375e11 needs X0 of about 2836 * 2^60"""
        assert 2835 < weighted.x0_in_units_of_2_60 < 2837
        assert weighted.mode is ThresholdMode.WEIGHTED

    def test_theorem20_matches_weighted(self, weighted):
        """Test that theorem20 gives the weighted X0"""
        result = x0_threshold(K_TARGET, "theorem20")
        assert result.mode is ThresholdMode.THEOREM20
        assert result.x0_required == weighted.x0_required

    def test_legacy(self):
        """Test that the coefficient 1/3 needs about 3781 * 2^60"""
        result = x0_threshold(K_TARGET, "legacy")
        assert 3780 < result.x0_in_units_of_2_60 < 3782

    def test_epsilon_star(self, weighted):
        """Test the gap between delta and the nearest admissible fraction"""
        assert mpq(1103, 10**25) <= weighted.epsilon_star.lo
        assert weighted.epsilon_star.hi <= mpq(11035, 10**26)
        assert weighted.fraction.denominator < K_TARGET

    def test_fraction_above_delta(self, weighted):
        """Test that the fraction lies strictly above delta"""
        assert weighted.fraction > delta_interval(weighted.precision_bits).hi

    def test_smallest_target(self):
        """Test that K_target 2 uses the fraction 2/1"""
        result = x0_threshold(2)
        assert result.fraction == 2

    def test_invalid_target(self):
        """Test that a target below 2 is refused"""
        with pytest.raises(ValueError) as exc_info:
            x0_threshold(1)
        assert "at least 2" in str(exc_info.value)

    def test_to_dict(self, weighted):
        """Test the string export"""
        exported = weighted.to_dict()
        assert exported["mode"] == "weighted"
        assert exported["K_target"] == str(K_TARGET)
        assert int(exported["x0_required"]) == weighted.x0_required
