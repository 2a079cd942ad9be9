"""Exact checks of the product identity behind the epsilon bounds.

For a cycle of the map n -> n/2, n -> (3n+1)/2 with K odd and L even
members, 2**(K+L) equals the product of (3 + 1/n) over the odd members,
and that product is at most (3 + mu)**K with mu the mean of 1/n.
"""

from typing import Iterable, Sequence

from gmpy2 import mpq


def _odd_reciprocals(odd_members: Iterable[int]) -> list:
    reciprocals = []
    for n in odd_members:
        if n == 0 or n % 2 == 0:
            raise ValueError(f"expected odd nonzero members, got {n}")
        reciprocals.append(mpq(1, n))
    if not reciprocals:
        raise ValueError("expected at least one odd member")
    return reciprocals


def product_mean_bound_holds(odd_members: Iterable[int]) -> bool:
    """Decide exactly that prod(3 + 1/n) <= (3 + mean(1/n))**K.

    Parameters
    ----------
    odd_members : Iterable[int]
        A finite multiset of odd integers, all above -1/3 so that every
        factor is positive.

    Returns
    -------
    bool
        The outcome of the exact comparison.

    Raises
    ------
    ValueError
        If a member is even, zero or makes a factor non-positive, or the
        multiset is empty.
    """
    reciprocals = _odd_reciprocals(odd_members)
    product = mpq(1)
    for reciprocal in reciprocals:
        factor = 3 + reciprocal
        if factor <= 0:
            raise ValueError(f"factor 3 + {reciprocal} is not positive")
        product *= factor
    count = len(reciprocals)
    mean = sum(reciprocals, mpq(0)) / count
    return product <= (3 + mean) ** count


def cycle_product_identity(members: Sequence[int]) -> bool:
    """Check 2**(K+L) == prod over odd members of (3 + 1/n) for a cycle.

    Parameters
    ----------
    members : Sequence[int]
        One full period of a cycle in trajectory order, starting anywhere.

    Returns
    -------
    bool
        True when the identity holds exactly.

    Raises
    ------
    ValueError
        If ``members`` is empty, contains 0, or is not a cycle of the map.
    """
    if not members:
        raise ValueError("a cycle needs at least one member")
    for index, n in enumerate(members):
        following = members[(index + 1) % len(members)]
        image = n // 2 if n % 2 == 0 else (3 * n + 1) // 2
        if n == 0 or image != following:
            raise ValueError(f"{list(members)} is not a cycle: {n} maps to {image}")
    odd = [n for n in members if n % 2 != 0]
    product = mpq(1)
    for reciprocal in _odd_reciprocals(odd):
        product *= 3 + reciprocal
    return product == 2 ** len(members)
