"""Innovation games built from market value and diversity change.

Firms choose between innovating (strategy 1) and refraining (strategy
2). The market value pi of the old technology, the innovation cost, the
market-value gain alpha from the new technology's extra attributes, and
the forgone value beta of old attributes the innovation drops determine
a 2x2 population game. When the stability condition holds (innovating
must neither dominate nor be dominated), the game is anti-coordinating
and the population settles into a unique mixed state of coexisting
innovators and imitators, available here in closed form together with
its comparative statics in (alpha, beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .diversity import DiversityModel, dissimilarity, is_relevant_innovation
from .errors import DomainError
from .game import EssKind, GameMatrix, classify_ess


@dataclass(frozen=True)
class MarketValueMap:
    """Increasing map from a dissimilarity to a market-value change.

    Three parametric families, all strictly increasing on [0, inf) and
    zero at zero: linear k*delta, power k*delta**exponent, and
    saturating k*delta/(scale + delta).
    """

    kind: str
    k: float
    exponent: float = 1.0
    scale: float = 1.0

    _KINDS = ("linear", "power", "saturating")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(
                f"unknown market-value map kind {self.kind!r} (expected one of {self._KINDS})"
            )
        if not (self.k > 0.0):
            raise DomainError(f"market-value map coefficient k must be positive, got {self.k!r}")
        if self.kind == "power" and not (self.exponent > 0.0):
            raise DomainError(f"power map exponent must be positive, got {self.exponent!r}")
        if self.kind == "saturating" and not (self.scale > 0.0):
            raise DomainError(f"saturating map scale must be positive, got {self.scale!r}")

    @classmethod
    def linear(cls, k: float) -> "MarketValueMap":
        return cls(kind="linear", k=k)

    @classmethod
    def power(cls, k: float, exponent: float) -> "MarketValueMap":
        return cls(kind="power", k=k, exponent=exponent)

    @classmethod
    def saturating(cls, k: float, scale: float) -> "MarketValueMap":
        return cls(kind="saturating", k=k, scale=scale)

    def __call__(self, delta: float) -> float:
        if not (delta >= 0.0):
            raise DomainError(f"dissimilarity must be nonnegative, got {delta!r}")
        if self.kind == "linear":
            return self.k * delta
        if self.kind == "power":
            return self.k * delta**self.exponent
        return self.k * delta / (self.scale + delta)


@dataclass(frozen=True)
class SchumpeterParams:
    """Market parameters (pi, cost, alpha, beta) of an innovation game.

    pi is the market value of the old technology, cost the fixed R&D
    outlay of innovating, alpha the market-value gain from the
    innovation's new attributes and beta the value of old-technology
    attributes the innovation forgoes. The gain must strictly exceed the
    loss: the innovation raises the market's value.
    """

    pi: float
    cost: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("pi", "cost", "alpha", "beta"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"parameter {name} must be a finite real, got {v!r}")
        if not (self.pi > 0.0):
            raise DomainError(f"market value pi must be positive, got {self.pi!r}")
        if not (self.cost > 0.0):
            raise DomainError(f"innovation cost must be positive, got {self.cost!r}")
        if not (self.beta >= 0.0):
            raise DomainError(f"forgone value beta must be nonnegative, got {self.beta!r}")
        if not (self.alpha > self.beta):
            raise DomainError(
                f"market-value gain alpha={self.alpha!r} must strictly exceed the forgone "
                f"value beta={self.beta!r}: an innovation raises the market's value"
            )


@dataclass(frozen=True)
class SchumpeterianState:
    """The unique stable mix of innovators and imitators.

    The imitator rate is stored as the exact complement of the
    innovator rate, so the two always sum to 1.
    """

    x_I: float
    x_R: float

    def __post_init__(self):
        if not (0.0 < self.x_I < 1.0):
            raise DomainError(f"innovator rate must be strictly inside (0, 1), got {self.x_I!r}")
        if self.x_I + self.x_R != 1.0:
            raise DomainError("innovator and imitator rates must sum to 1")


def params_from_diversity(
    model: DiversityModel,
    y: str,
    yp: str,
    f: MarketValueMap,
    ft: MarketValueMap,
    pi: float,
    cost: float,
) -> SchumpeterParams:
    """Derive game parameters from the dissimilarities of (old, new).

    alpha = f(delta(new, old)) values the attributes the innovation
    adds; beta = ft(delta(old, new)) values those it forgoes. ``yp``
    must be a relevant innovation of ``y``, and the resulting alpha must
    exceed beta (use a slower-growing ft, or identical maps, to ensure
    it).
    """
    if not is_relevant_innovation(model, yp, y):
        raise DomainError(
            f"technology {yp!r} is not a relevant innovation of {y!r}: "
            "its singleton diversity does not strictly exceed the old one's"
        )
    alpha = f(dissimilarity(model, yp, y))
    beta = ft(dissimilarity(model, y, yp))
    return SchumpeterParams(pi=pi, cost=cost, alpha=alpha, beta=beta)


def build_game(p: SchumpeterParams) -> GameMatrix:
    """Payoff matrix of the innovation game.

    Meeting innovators split the improved market value pi+alpha-beta and
    both pay the cost; a lone innovator takes the improved value while
    the refrainer keeps the beta share; meeting refrainers split pi.
    """
    a = (p.pi + p.alpha - p.beta) / 2.0 - p.cost
    b = p.pi + p.alpha - p.beta - p.cost
    c = p.beta
    d = p.pi / 2.0
    try:
        return GameMatrix(a=a, b=b, c=c, d=d)
    except DomainError as err:
        raise DomainError(
            f"degenerate innovation game: {err}; the polymorphic-stability "
            "inequalities hold with equality at this parameter boundary"
        ) from err


def is_schumpeterian(p: SchumpeterParams) -> bool:
    """Whether the parameters admit a stable innovator-imitator mix.

    Two strict inequalities: innovating must not pay against a market of
    innovators (pi/2 + (alpha-beta)/2 < beta + cost), yet must pay
    against a market of refrainers (pi/2 + alpha > beta + cost). They
    make the game anti-coordinating, hence its mixed rest point the
    unique, globally attracting stable state.
    """
    lhs1 = p.pi / 2.0 + (p.alpha - p.beta) / 2.0
    lhs2 = p.pi / 2.0 + p.alpha
    rhs = p.beta + p.cost
    return lhs1 < rhs and lhs2 > rhs


def schumpeterian_state(p: SchumpeterParams) -> SchumpeterianState:
    """Closed-form innovator/imitator rates of the stable mixed state.

    x_I = (pi + 2(alpha - beta - cost)) / (alpha + beta); the imitator
    rate is the complement, equal to (2 cost - alpha - pi + 3 beta) /
    (alpha + beta). Requires the parameters to be Schumpeterian.
    """
    lhs1 = p.pi / 2.0 + (p.alpha - p.beta) / 2.0
    lhs2 = p.pi / 2.0 + p.alpha
    rhs = p.beta + p.cost
    if not (lhs1 < rhs):
        raise DomainError(
            "not Schumpeterian: innovating dominates — pi/2 + (alpha-beta)/2 < "
            f"beta + cost fails ({lhs1!r} >= {rhs!r})"
        )
    if not (lhs2 > rhs):
        raise DomainError(
            "not Schumpeterian: innovating never pays — pi/2 + alpha > "
            f"beta + cost fails ({lhs2!r} <= {rhs!r})"
        )
    x_i = (p.pi + 2.0 * (p.alpha - p.beta - p.cost)) / (p.alpha + p.beta)
    return SchumpeterianState(x_I=x_i, x_R=1.0 - x_i)


def ess_innovator_rate(m: GameMatrix) -> Optional[float]:
    """Long-run innovator share of the game, if it is start-independent.

    Strategy 1 is 'innovate'. Returns 1 or 0 when one strategy strictly
    dominates, the interior rest point for anti-coordination, and None
    for coordination games (there the limit depends on the initial
    state).
    """
    cls = classify_ess(m)
    if cls.kind is EssKind.COORDINATION:
        return None
    return cls.ess_states[0].x1


def in_domain(alpha: float, beta: float, xi: float) -> bool:
    """Admissible region of the comparative statics in (alpha, beta).

    With xi = 2*cost - pi held fixed, the stability condition becomes
    alpha/3 - xi/3 < beta < alpha - xi/2 (strictly) with alpha > 0.
    """
    return alpha > 0.0 and alpha / 3.0 - xi / 3.0 < beta < alpha - xi / 2.0


def _require_domain(alpha: float, beta: float, xi: float) -> None:
    if not in_domain(alpha, beta, xi):
        raise DomainError(
            f"(alpha={alpha!r}, beta={beta!r}) lies outside the admissible region for "
            f"xi={xi!r}: need alpha > 0 and alpha/3 - xi/3 < beta < alpha - xi/2"
        )


def gamma(alpha: float, beta: float, xi: float) -> float:
    """Innovator rate of the stable mix as a function of (alpha, beta).

    Equals (2(alpha - beta) - xi) / (alpha + beta), which lies in (0, 1)
    on the admissible region; xi = 2*cost - pi summarizes the two
    non-diversity parameters.
    """
    _require_domain(alpha, beta, xi)
    return (2.0 * (alpha - beta) - xi) / (alpha + beta)


def gamma_gradient(alpha: float, beta: float, xi: float) -> tuple[float, float]:
    """Partial derivatives of the innovator rate in (alpha, beta).

    d/dalpha = (4*beta + xi) / (alpha + beta)^2 is positive on the
    admissible region and d/dbeta = (xi - 4*alpha) / (alpha + beta)^2
    negative: a more valuable innovation attracts innovators, a costlier
    loss of old attributes repels them.
    """
    _require_domain(alpha, beta, xi)
    denom = (alpha + beta) ** 2
    return ((4.0 * beta + xi) / denom, (xi - 4.0 * alpha) / denom)


@dataclass(frozen=True)
class SweepRow:
    """One grid cell of a comparative-statics sweep."""

    alpha: float
    beta: float
    xi: float
    in_domain: bool
    x_I: Optional[float]
    dGamma_dalpha: Optional[float]
    dGamma_dbeta: Optional[float]


@dataclass(frozen=True)
class SweepResult:
    """Row-major (alpha outer) evaluation of gamma over a product grid."""

    rows: tuple[SweepRow, ...]


def _check_grid(name: str, grid: Sequence[float]) -> list[float]:
    values = [float(v) for v in grid]
    if not values:
        raise DomainError(f"{name} grid must be nonempty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{name} grid must be strictly increasing")
    return values


def sweep(alphas: Iterable[float], betas: Iterable[float], xi: float) -> SweepResult:
    """Evaluate the innovator rate and its gradient over a product grid.

    Cells outside the admissible region carry absent values. Rows are
    ordered with alpha as the outer loop, matching the CSV layout.
    """
    alpha_grid = _check_grid("alpha", list(alphas))
    beta_grid = _check_grid("beta", list(betas))
    rows = []
    for alpha in alpha_grid:
        for beta in beta_grid:
            if in_domain(alpha, beta, xi):
                value = gamma(alpha, beta, xi)
                d_alpha, d_beta = gamma_gradient(alpha, beta, xi)
                rows.append(SweepRow(alpha, beta, xi, True, value, d_alpha, d_beta))
            else:
                rows.append(SweepRow(alpha, beta, xi, False, None, None, None))
    return SweepResult(rows=tuple(rows))
