"""Nodes of the residue-class case search.

A node fixes the root minimum to the class n1 = 2**e * a + r and records,
as integer affine forms in the free parameter a >= 0, every minimum whose
odd-run shape has been decided on the way down.
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

from gmpy2 import mpq

from cyclebound.numerics.rational import ceil_rational

TAIL_COEFFICIENT = mpq(3)


def exact_k_coefficient(k: int) -> mpq:
    """c with T(n) <= c/n for every n whose odd run has exactly k steps."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return 3 - 3 * mpq(2, 3) ** k


def tail_pair_coefficient(k_cap: int) -> mpq:
    """c with T(n) + T(n') <= c/n when k > k_cap and a single halving follows."""
    return 3 + 3 * mpq(2, 3) ** (k_cap + 1)


@dataclass(frozen=True)
class AffineForm:
    """The integer-valued affine map a -> A*a + B, with A > 0."""
    A: int  # pylint: disable=invalid-name
    B: int  # pylint: disable=invalid-name

    def __call__(self, a: int) -> int:
        return self.A * a + self.B

    def substitute(self, shift: int, offset: int) -> "AffineForm":
        """Rewrite in a new parameter via a = 2**shift * a' + offset."""
        return AffineForm(self.A << shift, self.B + self.A * offset)

    def __str__(self) -> str:
        return f"{self.A}*a+{self.B}"


@dataclass(frozen=True)
class MinimumForm:
    """A processed minimum and the shape of the run after it.

    Attributes
    ----------
    form : AffineForm
        The minimum as a function of a.
    k : int
        Odd-run length, or its lower bound when ``k_exact`` is False.
    ell : int
        Halving-run length, or its lower bound when ``ell_exact`` is False.
    k_exact : bool
        ``k`` is exact.
    ell_exact : bool
        ``ell`` is exact.
    """
    form: AffineForm
    k: int
    ell: int
    k_exact: bool = True
    ell_exact: bool = True

    @property
    def coef(self) -> mpq:
        if self.k_exact:
            return exact_k_coefficient(self.k)
        return TAIL_COEFFICIENT

    def substitute(self, shift: int, offset: int) -> "MinimumForm":
        return replace(self, form=self.form.substitute(shift, offset))


@dataclass(frozen=True)
class FloorConstraint:
    """form(a) >= x0_multiple * X0 + offset for every admissible a."""
    form: AffineForm
    x0_multiple: int
    offset: int

    def substitute(self, shift: int, offset: int) -> "FloorConstraint":
        return replace(self, form=self.form.substitute(shift, offset))

    def a_floor(self, x0: int) -> int:
        """Smallest a satisfying the constraint for a concrete X0."""
        return ceil_rational(mpq(self.x0_multiple * x0 + self.offset - self.form.B, self.form.A))


@dataclass(frozen=True)
class CaseState:
    """One node of the case search.

    Attributes
    ----------
    modulus_exp : int
        e in n1 = 2**e * a + r.
    residue : int
        r, odd, 0 <= r < 2**e.
    affine_forms : tuple[MinimumForm, ...]
        Processed minima n1, n2, ... in trajectory order.
    pending_form : AffineForm, optional
        The next minimum, whose odd run is still open.
    open_even_form : AffineForm, optional
        The latest value of an unfinished halving run after the last
        processed minimum; its parity is still open.
    constraints : tuple[FloorConstraint, ...]
        Lower bounds on forms in terms of X0.
    """
    modulus_exp: int
    residue: int
    affine_forms: Tuple[MinimumForm, ...] = ()
    pending_form: Optional[AffineForm] = None
    open_even_form: Optional[AffineForm] = None
    constraints: Tuple[FloorConstraint, ...] = ()

    @property
    def min_count(self) -> int:
        return len(self.affine_forms)

    @property
    def k_total(self) -> int:
        return sum(record.k for record in self.affine_forms)

    @property
    def root_form(self) -> AffineForm:
        return AffineForm(1 << self.modulus_exp, self.residue)

    @property
    def is_terminal(self) -> bool:
        """Nothing left to branch on."""
        return self.pending_form is None and self.open_even_form is None

    def a_floor(self, x0: int) -> int:
        """Least admissible a for a concrete X0 (never below 0)."""
        return max([0] + [constraint.a_floor(x0) for constraint in self.constraints])

    def substitute(self, shift: int, offset: int) -> "CaseState":
        """Restrict to a = 2**shift * a' + offset and rewrite every form."""
        if shift == 0:
            return self
        return CaseState(
            modulus_exp=self.modulus_exp + shift,
            residue=self.residue + (offset << self.modulus_exp),
            affine_forms=tuple(record.substitute(shift, offset) for record in self.affine_forms),
            pending_form=(
                None if self.pending_form is None
                else self.pending_form.substitute(shift, offset)
            ),
            open_even_form=(
                None if self.open_even_form is None
                else self.open_even_form.substitute(shift, offset)
            ),
            constraints=tuple(c.substitute(shift, offset) for c in self.constraints)
        )

    def sort_key(self) -> Tuple:
        """Total order used to report witnesses deterministically."""
        shape = tuple(
            (record.k, record.ell, record.k_exact, record.ell_exact)
            for record in self.affine_forms
        )
        return (self.modulus_exp, self.residue, self.min_count, shape)

    def describe(self) -> str:
        shape = ", ".join(
            f"k{'' if r.k_exact else '>='}{r.k} l{'' if r.ell_exact else '>='}{r.ell}"
            for r in self.affine_forms
        )
        return f"n1 = {self.residue} mod 2^{self.modulus_exp} [{shape}]"


def root_state() -> CaseState:
    """All odd n1 >= X0 + 1: n1 = 2a + 1 with n1 itself pending."""
    n1 = AffineForm(2, 1)
    return CaseState(
        modulus_exp=1,
        residue=1,
        pending_form=n1,
        constraints=(FloorConstraint(n1, 1, 1),)
    )
