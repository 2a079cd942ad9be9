import logging
import random

import numpy as np
import pytest
from gmpy2 import mpq

from cyclebound.collatz import (
    accel_odd_run,
    collatz_step,
    merger_witness,
    odd_run_residue,
    odd_run_values,
    profile,
    read_checkpoint,
    t_value,
    two_adic_valuation,
    verify_block,
    verify_range,
)
from cyclebound.numerics import RealInterval, TriState, cmp_conservative, delta_interval, log_interval

LOG_BITS = 128


def _below_delta_power(n, next_n):
    """Compare log(next_n) with delta * log(n) on enclosures."""
    lhs = log_interval(RealInterval.exact(next_n, LOG_BITS))
    rhs = delta_interval(LOG_BITS) * log_interval(RealInterval.exact(n, LOG_BITS))
    return cmp_conservative(lhs, rhs)


class TestDynamics:
    def test_step(self):
        """Test both branches of the shortcut map"""
        assert collatz_step(7) == 11
        assert collatz_step(26) == 13

    def test_step_rejects_nonpositive(self):
        """Test that zero and negative inputs are refused"""
        with pytest.raises(ValueError) as exc_info:
            collatz_step(0)
        assert "must be positive" in str(exc_info.value)

    def test_valuation(self):
        """Test the 2-adic valuation"""
        assert two_adic_valuation(1) == 0
        assert two_adic_valuation(96) == 5
        assert two_adic_valuation(2**200) == 200

    def test_odd_run(self):
        """Test the closed form of the leading odd run"""
        assert accel_odd_run(7) == (3, 26)
        assert odd_run_values(7) == [7, 11, 17]
        assert t_value(7) == mpq(1, 7) + mpq(1, 11) + mpq(1, 17)

    def test_odd_run_matches_iteration(self):
        """Test the closed form against direct iteration"""
        for n in range(1, 2001, 2):
            k, end = accel_odd_run(n)
            value = n
            for _ in range(k):
                assert value % 2 == 1
                value = collatz_step(value)
            assert value == end
            assert end % 2 == 0

    def test_odd_run_rejects_even(self):
        """Test that the odd run needs an odd start"""
        with pytest.raises(ValueError) as exc_info:
            accel_odd_run(10)
        assert "requires odd n" in str(exc_info.value)

    def test_odd_run_residue(self):
        """Test the class of starts with exactly k odd steps"""
        residue, modulus = odd_run_residue(3)
        assert (residue, modulus) == (7, 16)
        for n in range(residue, 2000, modulus):
            assert accel_odd_run(n)[0] == 3

    def test_merger_witness(self):
        """Test that the witness joins the trajectory of n"""
        assert merger_witness(7) is None
        smaller, steps = merger_witness(13)
        assert (smaller, steps) == (6, 3)
        value, joined = 13, smaller
        for _ in range(steps):
            value = collatz_step(value)
        for _ in range(steps - 1):
            joined = collatz_step(joined)
        assert value == joined == 5

    def test_merger_small_starts(self):
        """Test the merger of 5 with 2 and the single halving after 17"""
        assert merger_witness(5) == (2, 3)
        assert merger_witness(17) is None


class TestTrajectoryProfile:
    def test_minima(self):
        """Test the recorded shape of each minimum"""
        result = profile(7, 2)
        assert [(r.n, r.k, r.ell) for r in result.minima] == [(7, 3, 1), (13, 1, 2)]
        assert result.minima[0].next_minimum == 13
        assert not result.truncated

    def test_truncated_at_one(self):
        """Test that falling to 1 ends the profile early"""
        result = profile(7, 10)
        assert len(result) == 3
        assert result.truncated
        assert not result.trivial_start

    def test_trivial_start(self):
        """Test that starting at 1 is flagged"""
        assert profile(1, 3).trivial_start

    def test_dataframe(self):
        """Test the tabular view"""
        frame = profile(27, 4).to_dataframe()
        assert list(frame.columns) == ["n", "k", "ell", "t_value"]
        assert frame["n"].iloc[0] == "27"
        assert frame["t_value"].iloc[0] == "68/1107"

    def test_even_start(self):
        """Test that even starts are refused"""
        with pytest.raises(ValueError) as exc_info:
            profile(8, 3)
        assert "odd positive start" in str(exc_info.value)

    def test_next_minimum_growth(self):
        """Test that each minimum stays below the previous one to the power 19/12"""
        rng = random.Random(14)
        for _ in range(2000):
            start = 2 * rng.randrange(1, 5 * 10**5) + 1
            for record in profile(start, 20).minima:
                assert record.next_minimum ** 12 < record.n ** 19

    def test_all_ones_start(self):
        """Test that n = -1 mod 2^k runs at least k odd steps"""
        rng = random.Random(12)
        for _ in range(1000):
            k = rng.randrange(1, 40)
            n = (rng.randrange(0, 10**6) << k) + (1 << k) - 1
            assert accel_odd_run(n)[0] >= k

    def test_trivial_t_bound(self):
        """Test T(n) < 3/n on profiled minima"""
        rng = random.Random(3)
        for _ in range(500):
            start = 2 * rng.randrange(1, 10**6) + 1
            for record in profile(start, 20).minima:
                assert record.t_value < mpq(3, record.n)

    def test_exact_k_t_bound(self):
        """Test T(n) <= (3 - 3 (2/3)^k)/n, strictly once k >= 2"""
        rng = random.Random(5)
        for _ in range(500):
            start = 2 * rng.randrange(1, 10**6) + 1
            for record in profile(start, 20).minima:
                bound = (3 - 3 * mpq(2, 3) ** record.k) / record.n
                if record.k == 1:
                    assert record.t_value == bound
                else:
                    assert record.t_value < bound

    def test_next_minimum_below_delta_power(self):
        """Test that the next minimum is certified below n ** log2(3)"""
        rng = random.Random(9)
        for _ in range(300):
            start = 2 * rng.randrange(1, 10**6) + 1
            for record in profile(start, 10).minima:
                assert _below_delta_power(record.n, record.next_minimum) is TriState.TRUE

    @pytest.mark.slow
    def test_next_minimum_below_delta_power_many(self):
        """Test the delta power bound on 10^5 consecutive pairs of minima"""
        rng = random.Random(10)
        checked = 0
        while checked < 10**5:
            start = 2 * rng.randrange(1, 10**12) + 1
            for record in profile(start, 4).minima:
                assert _below_delta_power(record.n, record.next_minimum) is TriState.TRUE
                checked += 1

    def test_odd_multiplier_exact_run(self):
        """Test that n = a 2^k - 1 with a odd runs exactly k odd steps"""
        rng = random.Random(13)
        for _ in range(2000):
            k = rng.randrange(1, 41)
            a = 2 * rng.randrange(0, 10**6) + 1
            assert accel_odd_run((a << k) - 1)[0] == k

    @pytest.mark.slow
    def test_odd_run_length_many(self):
        """Test the odd-run length of a 2^k - 1 on 10^5 random a"""
        rng = random.Random(15)
        for _ in range(10**5):
            k = rng.randrange(1, 41)
            a = rng.randrange(1, 10**12)
            length = accel_odd_run((a << k) - 1)[0]
            assert length >= k
            if a % 2 == 1:
                assert length == k


class TestRangeVerifier:
    def test_small_range(self):
        """Test that the excursion of 27 is found"""
        report = verify_range(30, block_size=8)
        assert report.verified
        assert report.max_excursion == 4616
        assert report.blocks_completed == 4
        assert report.first_failure is None

    def test_step_cap_failure(self):
        """Test that a start hitting the step cap is reported"""
        result = verify_block(27, 28, max_steps=10)
        assert not result.verified
        assert result.first_failure == 27

    def test_parallel_matches_serial(self):
        """Test that worker processes give the same verdict"""
        serial = verify_range(20000, block_size=1000)
        parallel = verify_range(20000, worker_count=2, block_size=1000)
        assert serial.verified and parallel.verified
        assert serial.max_excursion == parallel.max_excursion

    def test_checkpoint_resume(self, tmp_path):
        """Test that completed blocks are skipped on a second run"""
        path = str(tmp_path / "blocks.u64")
        first = verify_range(5000, block_size=500, checkpoint_path=path)
        assert len(read_checkpoint(path)) == 10
        second = verify_range(5000, block_size=500, checkpoint_path=path)
        assert second.blocks_completed == 10
        assert second.max_excursion == first.max_excursion
        assert len(read_checkpoint(path)) == 10

    def test_torn_checkpoint(self, tmp_path, caplog):
        """Test that a torn trailing record is dropped with a warning"""
        path = str(tmp_path / "blocks.u64")
        verify_range(2000, block_size=500, checkpoint_path=path)
        with open(path, "ab") as handle:
            np.array([7], dtype="<u8").tofile(handle)
        with caplog.at_level(logging.WARNING):
            records = read_checkpoint(path)
        assert len(records) == 4
        assert "torn trailing record" in caplog.text

    def test_invalid_limit(self):
        """Test that a limit below 2 is refused"""
        with pytest.raises(ValueError) as exc_info:
            verify_range(1)
        assert "at least 2" in str(exc_info.value)

    @pytest.mark.slow
    def test_hundred_million(self):
        """Test the full range up to 10**8"""
        report = verify_range(10**8, worker_count=4)
        assert report.verified

    @pytest.mark.slow
    def test_odd_run_exhaustive(self):
        """Test the closed form of the odd run for every odd n below 2^20"""
        for n in range(1, 1 << 20, 2):
            k, end = accel_odd_run(n)
            value = n
            for _ in range(k):
                value = collatz_step(value)
            assert value == end
