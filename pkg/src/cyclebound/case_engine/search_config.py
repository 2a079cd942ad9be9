"""Configuration of the residue-class case search."""

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

from gmpy2 import mpq

from cyclebound.numerics.rational import Rational, RationalLike, rational_to_string, to_rational

# Every analytic lower bound used by the search holds once X0 > 765.
SYMBOLIC_X0_FLOOR = 766
DEFAULT_K_CAP = 64
DEFAULT_ELL_CAP = 64
DEFAULT_MODULUS_EXP_CEILING = 10_000
DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_FRONTIER_SIZE = 64


class SearchMode(Enum):
    """What a window's T-sum is averaged over."""
    UNWEIGHTED = "unweighted"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class X0Mode:
    """How the lower bound X0 on cycle members enters the closing test.

    Attributes
    ----------
    value : int, optional
        ``None`` for symbolic bounds valid for every X0 >= 766, otherwise
        the concrete X0.
    """
    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and self.value < SYMBOLIC_X0_FLOOR:
            raise ValueError(
                f"concrete X0 must be at least {SYMBOLIC_X0_FLOOR}, got {self.value}"
            )

    @classmethod
    def symbolic(cls) -> "X0Mode":
        return cls(None)

    @classmethod
    def concrete(cls, x0: int) -> "X0Mode":
        return cls(int(x0))

    @property
    def is_symbolic(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "symbolic" if self.value is None else str(self.value)


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one case search.

    Parameters
    ----------
    mode : SearchMode
        Average per minimum (UNWEIGHTED) or per odd step (WEIGHTED).
    target_coef : mpq
        The claimed bound is target_coef / X0 per unit of weight.
    x0_mode : X0Mode
        Symbolic or concrete X0.
    max_depth : int
        Most minima in one window.
    k_cap : int
        Odd-run lengths above this are lumped into one tail branch.
    ell_cap : int
        Halving-run lengths are refined up to this value.
    modulus_exp_ceiling : int
        Nodes whose modulus exceeds 2**ceiling become witnesses.
    node_budget : int
        Nodes explored per frontier subtree before giving up.
    frontier_size : int
        Number of subtrees the root is split into before exploring.

    Raises
    ------
    ValueError
        If ``target_coef <= 0``, ``max_depth < 1`` or a cap is not positive.
    """
    mode: SearchMode = SearchMode.UNWEIGHTED
    target_coef: Rational = field(default_factory=lambda: mpq(97, 54))
    x0_mode: X0Mode = field(default_factory=X0Mode.symbolic)
    max_depth: int = 3
    k_cap: int = DEFAULT_K_CAP
    ell_cap: int = DEFAULT_ELL_CAP
    modulus_exp_ceiling: int = DEFAULT_MODULUS_EXP_CEILING
    node_budget: int = DEFAULT_NODE_BUDGET
    frontier_size: int = DEFAULT_FRONTIER_SIZE

    def __post_init__(self):
        object.__setattr__(self, "target_coef", to_rational(self.target_coef))
        if not isinstance(self.mode, SearchMode):
            object.__setattr__(self, "mode", SearchMode(self.mode))
        if self.target_coef <= 0:
            raise ValueError(f"target_coef must be positive, got {self.target_coef}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be at least 1, got {self.max_depth}")
        for name in ("k_cap", "ell_cap", "modulus_exp_ceiling", "node_budget", "frontier_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.ell_cap < 2:
            raise ValueError(f"ell_cap must be at least 2, got {self.ell_cap}")

    @classmethod
    def create(
        cls,
        mode: str,
        target_coef: RationalLike,
        max_depth: int,
        x0: Optional[int] = None,
        **kwargs
    ) -> "SearchConfig":
        """Convenience constructor taking plain values."""
        x0_mode = X0Mode.symbolic() if x0 is None else X0Mode.concrete(x0)
        return cls(
            mode=SearchMode(mode),
            target_coef=to_rational(target_coef),
            x0_mode=x0_mode,
            max_depth=max_depth,
            **kwargs
        )

    def to_dict(self) -> Dict[str, str]:
        return {
            "mode": self.mode.value,
            "target_coef": rational_to_string(self.target_coef),
            "x0": str(self.x0_mode),
            "max_depth": str(self.max_depth),
            "k_cap": str(self.k_cap),
            "ell_cap": str(self.ell_cap),
            "modulus_exp_ceiling": str(self.modulus_exp_ceiling),
            "node_budget": str(self.node_budget),
            "frontier_size": str(self.frontier_size),
        }

    def config_hash(self) -> str:
        """sha256 of the canonical JSON of the fields."""
        payload = json.dumps(self.to_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()
