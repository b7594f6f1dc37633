"""Revision-protocol dynamics over a 2x2 population game.

Agents occasionally revise their strategy; a protocol gives the
conditional rate rho_ij at which a revising strategy-i player switches
to j. Aggregating switches yields the one-dimensional inflow-outflow
mean dynamics

    dx1/dt = (1 - x1) * rho_21(x) - x1 * rho_12(x),

whose sign always agrees with the payoff advantage pi1 - pi2 at
interior states. The module provides the three classic protocols
(pairwise proportional imitation, pairwise comparison a la Smith, and
excess-payoff a la Brown-von Neumann-Nash), a fixed-step 4th-order
integrator for the mean dynamics, a vectorized batch integrator, and an
exact finite-population simulator driven by Poisson revision clocks.

Time conventions: trajectory times are always in mean-dynamics units.
A stochastic run with agent clocks of rate ``clock_rate`` and
uniformization bound K covers one mean-dynamics time unit in
K / clock_rate physical clock units; the physical duration of a run is
recorded in the trajectory metadata. Changing ``clock_rate`` therefore
rescales wall-clock time only, never the law of the sampled process.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, IntegrationError, NumericsError
from .game import GameMatrix, PopulationState, _payoffs

#: Max allowed post-step clamp of the integrator. The exact flow never
#: leaves the simplex, so a larger clamp signals a step-size error.
CLAMP_BUDGET = 1e-9


class RevisionProtocol(enum.Enum):
    """Switch-rate rule used by revising agents."""

    PPI = "ppi"
    SMITH = "smith"
    BNN = "bnn"

    @classmethod
    def parse(cls, name: str) -> "RevisionProtocol":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise DomainError(f"unknown revision protocol {name!r} (expected one of {valid})") from None


def _rates(protocol: RevisionProtocol, m: GameMatrix, x1: float) -> tuple[float, float]:
    """Conditional switch rates (rho_21, rho_12) at population share x1."""
    p1, p2 = _payoffs(m, x1)
    if protocol is RevisionProtocol.PPI:
        # imitate a randomly observed player whose strategy earns more
        return x1 * max(p1 - p2, 0.0), (1.0 - x1) * max(p2 - p1, 0.0)
    if protocol is RevisionProtocol.SMITH:
        return max(p1 - p2, 0.0), max(p2 - p1, 0.0)
    avg = x1 * p1 + (1.0 - x1) * p2
    return max(p1 - avg, 0.0), max(p2 - avg, 0.0)


def switch_rate(
    protocol: RevisionProtocol,
    m: GameMatrix,
    x: PopulationState,
    i: int,
    j: int,
) -> float:
    """Rate rho_ij at which a revising i-player switches to strategy j."""
    if i == j:
        raise DomainError("switch rate requires two distinct strategies")
    if {i, j} != {1, 2}:
        raise DomainError(f"strategies must be 1 and 2, got i={i}, j={j}")
    r21, r12 = _rates(protocol, m, x.x1)
    return r21 if (i, j) == (2, 1) else r12


def mean_field_rhs(protocol: RevisionProtocol, m: GameMatrix, x: PopulationState) -> float:
    """Right-hand side of the mean dynamics for the strategy-1 share."""
    return _rhs(protocol, m, x.x1)


def _rhs(protocol: RevisionProtocol, m: GameMatrix, x1: float) -> float:
    r21, r12 = _rates(protocol, m, x1)
    return (1.0 - x1) * r21 - x1 * r12


@dataclass(frozen=True)
class TrajectoryMeta:
    """Provenance of a trajectory: inputs plus run parameters."""

    protocol: RevisionProtocol
    matrix: GameMatrix
    x0: float
    dt: float
    n_agents: Optional[int] = None
    clock_rate: Optional[float] = None
    seed: Optional[int] = None
    physical_duration: Optional[float] = None

    @property
    def stochastic(self) -> bool:
        return self.n_agents is not None


@dataclass(frozen=True)
class Trajectory:
    """Sampled time series of population states with their payoffs."""

    times: np.ndarray
    x1: np.ndarray
    payoffs: np.ndarray
    meta: TrajectoryMeta

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        x1 = np.asarray(self.x1, dtype=float)
        payoffs = np.asarray(self.payoffs, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "payoffs", payoffs)
        if not (len(times) == len(x1) == len(payoffs)):
            raise DomainError("trajectory arrays must have equal length")
        if len(times) == 0:
            raise DomainError("trajectory must contain at least one sample")
        if np.any(np.diff(times) <= 0.0):
            raise DomainError("trajectory times must be strictly increasing")
        if np.any((x1 < 0.0) | (x1 > 1.0)):
            raise DomainError("trajectory states must stay in the simplex")
        if payoffs.shape != (len(times), 2):
            raise DomainError("payoffs must be an (n, 2) array")

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def final_state(self) -> PopulationState:
        return PopulationState(float(self.x1[-1]))

    def states(self) -> list[PopulationState]:
        return [PopulationState(float(v)) for v in self.x1]


def _payoff_series(m: GameMatrix, x1: np.ndarray) -> np.ndarray:
    p1 = (m.a - m.b) * x1 + m.b
    p2 = (m.c - m.d) * x1 + m.d
    return np.column_stack([p1, p2])


def integrate(
    protocol: RevisionProtocol,
    m: GameMatrix,
    x0: PopulationState | float,
    t_max: float,
    dt: float,
) -> Trajectory:
    """Integrate the mean dynamics with the classical 4th-order scheme.

    Fixed step: the right-hand side is scalar and piecewise smooth (the
    only kink sits where the payoffs tie), so adaptive machinery buys
    nothing at dt of order 0.01. States are clamped to [0, 1] after each
    step; a clamp beyond ``CLAMP_BUDGET`` aborts with the offending time
    since the exact flow cannot leave the simplex.
    """
    x0 = x0 if isinstance(x0, PopulationState) else PopulationState(float(x0))
    if not (t_max > 0.0) or not (dt > 0.0):
        raise DomainError("t_max and dt must be positive")
    if dt > t_max:
        raise DomainError(f"dt={dt} exceeds t_max={t_max}")

    n_full = int(math.floor(t_max / dt + 1e-9))
    times = [k * dt for k in range(n_full + 1)]
    if times[-1] < t_max - 1e-9 * max(1.0, t_max):
        times.append(t_max)
    times_arr = np.array(times)

    xs = np.empty(len(times))
    xs[0] = x0.x1
    x = x0.x1
    for k in range(1, len(times)):
        h = times[k] - times[k - 1]
        x_new = _rk4_step(protocol, m, x, h)
        excess = max(0.0 - x_new, x_new - 1.0, 0.0)
        if excess > CLAMP_BUDGET:
            raise IntegrationError(
                f"integration left the simplex by {excess:.3e} (> clamp budget {CLAMP_BUDGET}); "
                "reduce dt",
                time=times[k],
            )
        x = min(1.0, max(0.0, x_new))
        xs[k] = x

    meta = TrajectoryMeta(protocol=protocol, matrix=m, x0=x0.x1, dt=dt)
    return Trajectory(times_arr, xs, _payoff_series(m, xs), meta)


def _rk4_step(protocol: RevisionProtocol, m: GameMatrix, x: float, h: float) -> float:
    k1 = _rhs(protocol, m, x)
    k2 = _rhs(protocol, m, x + 0.5 * h * k1)
    k3 = _rhs(protocol, m, x + 0.5 * h * k2)
    k4 = _rhs(protocol, m, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _rhs_array(protocol: RevisionProtocol, abcd: np.ndarray, x: np.ndarray) -> np.ndarray:
    a, b, c, d = abcd[:, 0], abcd[:, 1], abcd[:, 2], abcd[:, 3]
    p1 = (a - b) * x + b
    p2 = (c - d) * x + d
    if protocol is RevisionProtocol.PPI:
        r21 = x * np.maximum(p1 - p2, 0.0)
        r12 = (1.0 - x) * np.maximum(p2 - p1, 0.0)
    elif protocol is RevisionProtocol.SMITH:
        r21 = np.maximum(p1 - p2, 0.0)
        r12 = np.maximum(p2 - p1, 0.0)
    else:
        avg = x * p1 + (1.0 - x) * p2
        r21 = np.maximum(p1 - avg, 0.0)
        r12 = np.maximum(p2 - avg, 0.0)
    return (1.0 - x) * r21 - x * r12


def integrate_batch(
    protocol: RevisionProtocol,
    matrices: np.ndarray,
    x0: np.ndarray,
    t_max: float,
    dt: float,
) -> np.ndarray:
    """Final states of many independent mean-dynamics runs at once.

    ``matrices`` is an (n, 4) array of rows (a, b, c, d) and ``x0`` the
    matching initial shares. Batch evaluation is the package's batch
    runner: the runs are independent, so stepping them in lockstep with
    array arithmetic changes nothing but speed. Only final states are
    returned; use :func:`integrate` to record a full trajectory.
    """
    abcd = np.asarray(matrices, dtype=float)
    if abcd.ndim != 2 or abcd.shape[1] != 4:
        raise DomainError("matrices must be an (n, 4) array of rows (a, b, c, d)")
    x = np.array(x0, dtype=float).copy()
    if x.shape != (abcd.shape[0],):
        raise DomainError("x0 must have one entry per matrix")
    if not (t_max > 0.0) or not (dt > 0.0) or dt > t_max:
        raise DomainError("need 0 < dt <= t_max")

    n_steps = int(math.floor(t_max / dt + 1e-9))
    remainder = t_max - n_steps * dt
    steps = [dt] * n_steps + ([remainder] if remainder > 1e-9 * max(1.0, t_max) else [])
    t = 0.0
    for h in steps:
        k1 = _rhs_array(protocol, abcd, x)
        k2 = _rhs_array(protocol, abcd, x + 0.5 * h * k1)
        k3 = _rhs_array(protocol, abcd, x + 0.5 * h * k2)
        k4 = _rhs_array(protocol, abcd, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        excess = max(float(np.max(-x, initial=0.0)), float(np.max(x - 1.0, initial=0.0)), 0.0)
        if excess > CLAMP_BUDGET:
            raise IntegrationError(
                f"batch integration left the simplex by {excess:.3e} "
                f"(> clamp budget {CLAMP_BUDGET}); reduce dt",
                time=t,
            )
        np.clip(x, 0.0, 1.0, out=x)
    return x


@dataclass(frozen=True)
class AgentPopulation:
    """A finite population of revising agents.

    ``n1`` of the ``n_agents`` agents currently play strategy 1; the
    induced population share is n1 / n_agents. The seed fully determines
    a simulation run.
    """

    n_agents: int
    n1: int
    seed: int

    def __post_init__(self):
        if not isinstance(self.n_agents, int) or self.n_agents < 1:
            raise DomainError(f"n_agents must be a positive integer, got {self.n_agents!r}")
        if not isinstance(self.n1, int) or not (0 <= self.n1 <= self.n_agents):
            raise DomainError(f"n1 must be an integer in [0, {self.n_agents}], got {self.n1!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise DomainError(f"seed must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def from_share(cls, n_agents: int, x1: float, seed: int) -> "AgentPopulation":
        """Population whose strategy-1 count best matches the share x1."""
        if not (0.0 <= x1 <= 1.0):
            raise DomainError(f"x1 must lie in [0, 1], got {x1!r}")
        return cls(n_agents=n_agents, n1=int(round(n_agents * x1)), seed=seed)

    @property
    def counts(self) -> tuple[int, int]:
        return (self.n1, self.n_agents - self.n1)

    @property
    def share(self) -> float:
        return self.n1 / self.n_agents


def uniformization_bound(m: GameMatrix) -> float:
    """Upper bound on every conditional switch rate for this matrix.

    All payoffs at simplex states are convex combinations of matrix
    entries, so payoff differences (and excesses over the average) never
    exceed the entry range; each protocol's rate is a positive part of
    such a difference times at most a probability.
    """
    lo = min(m.entries())
    hi = max(m.entries())
    return hi - lo


def simulate_finite_population(
    protocol: RevisionProtocol,
    m: GameMatrix,
    pop: AgentPopulation,
    t_max: float,
    clock_rate: float,
    sample_dt: float = 0.01,
) -> Trajectory:
    """Exact event-driven simulation of a finite revising population.

    Each agent carries an independent Poisson revision clock of rate
    ``clock_rate``; on a ring, a strategy-i player switches to j with
    probability rho_ij(x) / K, where K is the precomputed uniformization
    bound for the matrix. Ring times that produce no switch leave the
    state unchanged, so they are aggregated exactly: the waiting time to
    the next state change is exponential with the change rate, which is
    what this routine samples (same law, one draw per state change).

    The trajectory is sampled on a uniform grid in mean-dynamics time;
    the corresponding physical duration t_max * K / clock_rate is
    recorded in the metadata. Runs are reproducible bitwise from
    (inputs, seed).
    """
    if not (t_max > 0.0):
        raise DomainError("t_max must be positive")
    if not (clock_rate > 0.0):
        raise DomainError("clock_rate must be positive")
    if not (sample_dt > 0.0):
        raise DomainError("sample_dt must be positive")

    bound = uniformization_bound(m)
    rate_cap = bound * (1.0 + 1e-12)
    rng = np.random.default_rng(pop.seed)
    n = pop.n_agents
    n1 = pop.n1

    n_grid = int(math.floor(t_max / sample_dt + 1e-9))
    times = [k * sample_dt for k in range(n_grid + 1)]
    if times[-1] < t_max - 1e-9 * max(1.0, t_max):
        times.append(t_max)
    xs = np.empty(len(times))

    idx = 0  # next grid slot to fill
    t = 0.0
    while idx < len(times):
        x1 = n1 / n
        r21, r12 = _rates(protocol, m, x1)
        if r21 > rate_cap or r12 > rate_cap:
            raise NumericsError(
                f"conditional switch rate {max(r21, r12)!r} exceeds the uniformization "
                f"bound {bound!r}; bound miscomputed"
            )
        rate_up = (n - n1) * r21
        rate_dn = n1 * r12
        total = rate_up + rate_dn
        if total == 0.0:
            break  # no strategy switch can occur anymore; state is frozen
        t_next = t + rng.exponential(1.0 / total)
        while idx < len(times) and times[idx] < t_next:
            xs[idx] = x1
            idx += 1
        if t_next >= t_max:
            break
        if rng.random() * total < rate_up:
            n1 += 1
        else:
            n1 -= 1
        t = t_next
    xs[idx:] = n1 / n

    meta = TrajectoryMeta(
        protocol=protocol,
        matrix=m,
        x0=pop.share,
        dt=sample_dt,
        n_agents=n,
        clock_rate=clock_rate,
        seed=pop.seed,
        physical_duration=t_max * bound / clock_rate,
    )
    return Trajectory(np.array(times), xs, _payoff_series(m, xs), meta)


def converged_state(traj: Trajectory, tol: float, window: float) -> Optional[PopulationState]:
    """Final state if the trajectory has settled, else None.

    Settled means the share oscillates by at most ``tol`` over the
    trailing ``window`` time units.
    """
    if window > traj.span:
        raise DomainError(f"window {window} exceeds the trajectory span {traj.span}")
    cut = traj.times[-1] - window
    tail = traj.x1[traj.times >= cut]
    if float(tail.max() - tail.min()) <= tol:
        return traj.final_state
    return None
