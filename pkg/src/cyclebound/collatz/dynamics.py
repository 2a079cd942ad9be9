"""Exact single-trajectory dynamics of the shortcut Collatz map."""

from typing import List, Optional, Tuple

import gmpy2
from gmpy2 import mpq, mpz


def _check_positive(n: int, name: str = "n") -> None:
    if isinstance(n, bool) or not isinstance(n, (int, type(mpz(0)))):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if n <= 0:
        raise ValueError(f"{name} must be positive, got {n}")


def collatz_step(n: int) -> int:
    """One step of C: n/2 for even n, (3n+1)/2 for odd n."""
    _check_positive(n)
    if n & 1:
        return (3 * n + 1) >> 1
    return n >> 1


def two_adic_valuation(n: int) -> int:
    """Exponent of the largest power of two dividing ``n`` (n > 0)."""
    _check_positive(n)
    return int(gmpy2.bit_scan1(mpz(n)))


def accel_odd_run(n: int) -> Tuple[int, int]:
    """Length of the leading odd run and the value reached after it.

    With n + 1 = 2**k * a, a odd, the run has exactly k odd steps and ends
    at a * 3**k - 1, which is even.

    Parameters
    ----------
    n : int
        An odd positive integer.

    Returns
    -------
    tuple[int, int]
        ``(k, C**k(n))``.
    """
    _check_positive(n)
    if n % 2 == 0:
        raise ValueError(f"accel_odd_run requires odd n, got {n}")
    k = two_adic_valuation(n + 1)
    a = mpz(n + 1) >> k
    return k, int(a * mpz(3) ** k - 1)


def odd_run_values(n: int) -> List[int]:
    """The odd values C**t(n), t = 0..k-1, of the leading odd run."""
    k, _ = accel_odd_run(n)
    a = mpz(n + 1) >> k
    return [int(a * mpz(3) ** t * (mpz(1) << (k - t)) - 1) for t in range(k)]


def odd_run_residue(k: int) -> Tuple[int, int]:
    """Class of the odd n with exactly k leading odd steps.

    Returns
    -------
    tuple[int, int]
        ``(residue, modulus)``: n = 2**k - 1 mod 2**(k+1).
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return (1 << k) - 1, 1 << (k + 1)


def t_value(n: int) -> mpq:
    """Exact sum of 1/C**t(n) over the leading odd run of ``n``."""
    return sum((mpq(1, value) for value in odd_run_values(n)), mpq(0))


def merger_witness(n: int) -> Optional[Tuple[int, int]]:
    """A smaller start whose trajectory merges with that of ``n``.

    When the odd run of n is followed by at least two halvings, (n-1)/2
    reaches C**(k+2)(n) after k+1 steps.

    Parameters
    ----------
    n : int
        An odd positive integer.

    Returns
    -------
    tuple[int, int] or None
        ``((n-1)/2, k+2)`` when the run ends with at least two halvings,
        otherwise ``None``.
    """
    k, end = accel_odd_run(n)
    if two_adic_valuation(end) < 2:
        return None
    return (n - 1) // 2, k + 2
