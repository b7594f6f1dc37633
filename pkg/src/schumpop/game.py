"""2x2 symmetric population games: payoffs, equilibrium, stability.

The matrix rows are the revising agent's strategy, columns the
opponent's. Payoffs at a population state are affine in the share x1 of
strategy-1 players. The four strict sign patterns of (a - c, b - d)
classify the long-run stable states; degenerate matrices (a = c or
b = d) carry no strict ranking and are rejected at construction.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError


@dataclass(frozen=True)
class GameMatrix:
    """Payoff matrix ((a, b), (c, d)) of a 2x2 symmetric game."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"matrix entry {name} must be a finite real, got {v!r}")
        if self.a == self.c:
            raise DomainError(
                "degenerate payoff matrix: a = c violates matrix invariant "
                "(strategies tie against a pure strategy-1 population)"
            )
        if self.b == self.d:
            raise DomainError(
                "degenerate payoff matrix: b = d violates matrix invariant "
                "(strategies tie against a pure strategy-2 population)"
            )

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class PopulationState:
    """Point of the one-dimensional simplex; x2 is derived, never stored."""

    x1: float

    def __post_init__(self):
        if not (0.0 <= self.x1 <= 1.0):
            raise DomainError(f"population share x1 must lie in [0, 1], got {self.x1!r}")

    @property
    def x2(self) -> float:
        return 1.0 - self.x1

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)


class EssKind(enum.Enum):
    DOMINANT_1 = "dominant-1"
    DOMINANT_2 = "dominant-2"
    ANTI_COORDINATION = "anti-coordination"
    COORDINATION = "coordination"


@dataclass(frozen=True)
class EssClassification:
    """Stable-state structure of a nondegenerate 2x2 population game."""

    kind: EssKind
    ess_states: tuple[PopulationState, ...]
    interior_eq: Optional[PopulationState]
    attracting: str


def payoff_vector(m: GameMatrix, x: PopulationState) -> tuple[float, float]:
    """Expected payoffs (pi1, pi2) under random matching at state x."""
    return _payoffs(m, x.x1)


def _payoffs(m: GameMatrix, x1: float) -> tuple[float, float]:
    return ((m.a - m.b) * x1 + m.b, (m.c - m.d) * x1 + m.d)


def average_payoff(m: GameMatrix, x: PopulationState) -> float:
    """Population-average payoff x1*pi1 + x2*pi2."""
    p1, p2 = _payoffs(m, x.x1)
    return x.x1 * p1 + (1.0 - x.x1) * p2


def interior_equilibrium(m: GameMatrix) -> Optional[PopulationState]:
    """The interior rest point p where both strategies earn the same.

    Exists iff (a - c)(d - b) > 0, i.e. in anti-coordination and
    coordination games; then p = (b - d) / (c - a + b - d) lies in
    (0, 1). Returns None when one strategy strictly dominates.
    """
    if (m.a - m.c) * (m.d - m.b) <= 0.0:
        return None
    p = (m.b - m.d) / (m.c - m.a + m.b - m.d)
    return PopulationState(p)


_MONO_1 = PopulationState(1.0)
_MONO_2 = PopulationState(0.0)


def classify_ess(m: GameMatrix) -> EssClassification:
    """Classify the game by the exact signs of a - c and b - d.

    No tolerance is applied: entries are user-supplied reals and a
    fuzz would silently change the game class.
    """
    first_better_vs_1 = m.a > m.c
    first_better_vs_2 = m.b > m.d
    if first_better_vs_1 and first_better_vs_2:
        return EssClassification(
            kind=EssKind.DOMINANT_1,
            ess_states=(_MONO_1,),
            interior_eq=None,
            attracting="globally attracting",
        )
    if not first_better_vs_1 and not first_better_vs_2:
        return EssClassification(
            kind=EssKind.DOMINANT_2,
            ess_states=(_MONO_2,),
            interior_eq=None,
            attracting="globally attracting",
        )
    p = interior_equilibrium(m)
    assert p is not None
    if not first_better_vs_1 and first_better_vs_2:
        return EssClassification(
            kind=EssKind.ANTI_COORDINATION,
            ess_states=(p,),
            interior_eq=p,
            attracting="globally attracting from any polymorphic initial state",
        )
    return EssClassification(
        kind=EssKind.COORDINATION,
        ess_states=(_MONO_1, _MONO_2),
        interior_eq=p,
        attracting=(
            f"basins split at p={p.x1!r}: states below p are attracted to (0,1), "
            "states above p to (1,0)"
        ),
    )


def _bilinear(m: GameMatrix, x1: float, y1: float) -> float:
    # x^T M y for mixed states x = (x1, 1-x1), y = (y1, 1-y1)
    x2 = 1.0 - x1
    y2 = 1.0 - y1
    return x1 * (m.a * y1 + m.b * y2) + x2 * (m.c * y1 + m.d * y2)


def satisfies_ess_conditions(
    m: GameMatrix,
    x: PopulationState,
    n_grid: int = 1001,
    margin: float = 1e-12,
) -> bool:
    """Direct check of the two evolutionary-stability inequalities.

    ``x`` must earn at least as much against itself as any mutant state
    does, and beat every payoff-tying mutant against that mutant. The
    mutant set is a uniform grid of ``n_grid`` points plus the two
    vertices; for two strategies the inequalities are quadratic in the
    mutant, so a fine grid plus endpoints is conclusive in practice.
    Near-ties within ``margin`` are reported as a warning.
    """
    near_ties = 0
    mutants = [i / (n_grid - 1) for i in range(n_grid)] + [0.0, 1.0]
    own = _bilinear(m, x.x1, x.x1)
    for q in mutants:
        if q == x.x1:
            continue
        against_x = _bilinear(m, q, x.x1)
        if against_x > own + margin:
            return False
        if abs(against_x - own) <= margin:
            # payoff tie: x must strictly beat the mutant in the mutant's world
            x_vs_q = _bilinear(m, x.x1, q)
            q_vs_q = _bilinear(m, q, q)
            if x_vs_q <= q_vs_q + margin:
                if x_vs_q > q_vs_q:
                    near_ties += 1
                else:
                    return False
    if near_ties:
        warnings.warn(
            f"evolutionary-stability check passed with {near_ties} near-tie(s) "
            f"within margin {margin}",
            stacklevel=2,
        )
    return True
