import mpmath
import pytest
from gmpy2 import mpq

from cyclebound.errors import InsufficientPrecisionError, PrecisionExhaustedError
from cyclebound.numerics import (
    RealInterval,
    TriState,
    cmp_conservative,
    default_precision_bits,
    delta_interval,
    format_scientific,
    interval_pow,
    log2_interval,
    log_interval,
    require,
    run_with_precision_retry,
    to_rational,
)
from cyclebound.numerics.rational import round_down, round_up


def _mpf(value):
    return mpmath.mpf(int(value.numerator)) / int(value.denominator)


@pytest.fixture
def high_precision():
    with mpmath.workdps(600):
        yield


class TestTriState:
    def test_negate(self):
        """Test that negation swaps TRUE and FALSE and keeps UNKNOWN"""
        assert TriState.TRUE.negate() is TriState.FALSE
        assert TriState.FALSE.negate() is TriState.TRUE
        assert TriState.UNKNOWN.negate() is TriState.UNKNOWN

    def test_no_truth_value(self):
        """Test that a TriState cannot be used as a boolean"""
        with pytest.raises(TypeError) as exc_info:
            if TriState.UNKNOWN:
                pass
        assert "no truth value" in str(exc_info.value)

    def test_require_unknown(self):
        """Test that requiring an UNKNOWN decision asks for more precision"""
        with pytest.raises(InsufficientPrecisionError) as exc_info:
            require(TriState.UNKNOWN, "x < y")
        assert "x < y" in str(exc_info.value)
        assert require(TriState.TRUE, "x < y") is True
        assert require(TriState.FALSE, "x < y") is False


class TestRational:
    def test_parse_forms(self):
        """Test fraction, decimal and scientific literals"""
        assert to_rational("97/54") == mpq(97, 54)
        assert to_rational("1.4784") == mpq(14784, 10000)
        assert to_rational("7e11") == 700000000000
        assert to_rational("-2.5e-3") == mpq(-1, 400)

    def test_float_rejected(self):
        """Test that binary floats are refused"""
        with pytest.raises(TypeError) as exc_info:
            to_rational(0.1)
        assert "binary floats" in str(exc_info.value)

    def test_zero_denominator(self):
        """Test that p/0 is refused"""
        with pytest.raises(ValueError) as exc_info:
            to_rational("3/0")
        assert "zero denominator" in str(exc_info.value)

    def test_directed_rounding(self):
        """Test that rounding down and up brackets the exact value"""
        value = mpq(10**50 + 7, 3**40)
        assert round_down(value, 32) <= value <= round_up(value, 32)
        assert round_down(-value, 32) <= -value <= round_up(-value, 32)

    def test_format_scientific(self):
        """Test directed decimal rendering"""
        assert format_scientific(mpq(1, 3), 4, "down") == "3.333e-01"
        assert format_scientific(mpq(1, 3), 4, "up") == "3.334e-01"
        assert format_scientific(mpq(7 * 10**11), 2) == "7.0e+11"
        assert format_scientific(mpq(99999), 2, "up") == "1.0e+05"
        assert format_scientific(mpq(-1, 3), 4, "up") == "-3.333e-01"


class TestPrecision:
    def test_environment_default(self, monkeypatch):
        """Test that the precision comes from the environment when set"""
        monkeypatch.delenv("CYCLEBOUND_PRECISION_BITS", raising=False)
        assert default_precision_bits() == 384
        monkeypatch.setenv("CYCLEBOUND_PRECISION_BITS", "512")
        assert default_precision_bits() == 512

    def test_environment_invalid(self, monkeypatch):
        """Test that a malformed environment value is rejected"""
        monkeypatch.setenv("CYCLEBOUND_PRECISION_BITS", "lots")
        with pytest.raises(ValueError) as exc_info:
            default_precision_bits()
        assert "CYCLEBOUND_PRECISION_BITS" in str(exc_info.value)

    def test_retry_doubles(self):
        """Test that the retry loop doubles until the decision is made"""
        def needs_100_bits(bits):
            if bits < 100:
                raise InsufficientPrecisionError("not yet")
            return bits

        assert run_with_precision_retry(needs_100_bits, 32, 1024) == (128, 128)

    def test_retry_ceiling(self):
        """Test that the ceiling ends the retry loop with a clear error"""
        def never(bits):
            raise InsufficientPrecisionError("undecidable")

        with pytest.raises(PrecisionExhaustedError) as exc_info:
            run_with_precision_retry(never, 32, 64)
        assert exc_info.value.precision_bits == 64
        assert "ceiling" in str(exc_info.value)


class TestRealInterval:
    def test_out_of_order(self):
        """Test that lo > hi is rejected"""
        with pytest.raises(ValueError) as exc_info:
            RealInterval(2, 1)
        assert "out of order" in str(exc_info.value)

    def test_arithmetic_encloses(self):
        """Test that arithmetic on enclosures encloses the exact result"""
        a = RealInterval.exact(mpq(1, 3), 64)
        b = RealInterval.exact(mpq(2, 7), 64)
        assert (a + b).contains(mpq(13, 21))
        assert (a - b).contains(mpq(1, 21))
        assert (a * b).contains(mpq(2, 21))
        assert (a / b).contains(mpq(7, 6))
        assert (a ** 5).contains(mpq(1, 243))

    def test_reciprocal_straddling_zero(self):
        """Test that dividing by an interval around zero needs more precision"""
        with pytest.raises(InsufficientPrecisionError) as exc_info:
            RealInterval(-1, 1).reciprocal()
        assert "contains zero" in str(exc_info.value)

    def test_cmp_conservative(self):
        """Test the three outcomes of a conservative comparison"""
        low, high = RealInterval(0, 1), RealInterval(2, 3)
        assert cmp_conservative(low, high) is TriState.TRUE
        assert cmp_conservative(high, low) is TriState.FALSE
        assert cmp_conservative(low, RealInterval(1, 2)) is TriState.UNKNOWN

    def test_log_and_pow(self, high_precision):
        """Test log and real powers against mpmath"""
        two = RealInterval.exact(2, 256)
        log_two = log_interval(two)
        assert _mpf(log_two.lo) <= mpmath.log(2) <= _mpf(log_two.hi)
        root = interval_pow(two, mpq(1, 2))
        assert root.lo ** 2 <= 2 <= root.hi ** 2
        assert root.width < mpq(1, 2**200)

    def test_log_nonpositive(self):
        """Test that log of a non-positive interval is refused"""
        with pytest.raises(ValueError) as exc_info:
            log_interval(RealInterval(0, 1))
        assert "positive interval" in str(exc_info.value)


class TestConstants:
    @pytest.mark.parametrize("bits", [16, 64, 384, 1000])
    def test_delta_encloses(self, bits, high_precision):
        """Test that delta encloses log2(3) with the promised width"""
        delta = delta_interval(bits)
        exact = mpmath.log(3) / mpmath.log(2)
        assert _mpf(delta.lo) <= exact <= _mpf(delta.hi)
        assert delta.width <= mpq(2, 2**bits)

    def test_delta_nested(self):
        """Test that a finer enclosure sits inside a coarser one"""
        assert delta_interval(64).contains(delta_interval(384))
        assert delta_interval(384).contains(delta_interval(2048))

    def test_log2_encloses(self, high_precision):
        """Test the enclosure of log 2"""
        log_two = log2_interval(384)
        assert _mpf(log_two.lo) <= mpmath.log(2) <= _mpf(log_two.hi)

    def test_precision_floor(self):
        """Test that tiny precisions are rejected"""
        with pytest.raises(ValueError) as exc_info:
            delta_interval(8)
        assert "at least 16" in str(exc_info.value)
