"""CSV emission for trajectories and sweeps.

Numeric cells use Python's shortest round-trip float formatting (up to
17 significant digits), so re-parsing a cell recovers the in-memory
value exactly. Files are UTF-8 with LF line endings and a ``.`` decimal
point regardless of locale. Metadata travels in ``#``-prefixed comment
lines ahead of the header.
"""

from __future__ import annotations

import os
from typing import Union

from .dynamics import Trajectory
from .schumpeter import SweepResult

TRAJECTORY_HEADER = "t,x_I,x_R,payoff_I,payoff_R"
SWEEP_HEADER = "alpha,beta,xi,in_domain,x_I,dGamma_dalpha,dGamma_dbeta"


def _fmt(value: float) -> str:
    return repr(float(value))


def trajectory_csv(traj: Trajectory) -> str:
    """Render a trajectory as CSV text (metadata, header, one row per sample)."""
    m = traj.meta.matrix
    lines = [
        f"# protocol: {traj.meta.protocol.value}",
        f"# matrix: a={_fmt(m.a)} b={_fmt(m.b)} c={_fmt(m.c)} d={_fmt(m.d)}",
        f"# x0: {_fmt(traj.meta.x0)}",
        f"# dt: {_fmt(traj.meta.dt)}",
    ]
    if traj.meta.stochastic:
        lines.append(f"# N: {traj.meta.n_agents}")
        lines.append(f"# clock_rate: {_fmt(traj.meta.clock_rate)}")
        lines.append(f"# seed: {traj.meta.seed}")
    lines.append(TRAJECTORY_HEADER)
    for t, x1, (p1, p2) in zip(traj.times, traj.x1, traj.payoffs):
        lines.append(
            f"{_fmt(t)},{_fmt(x1)},{_fmt(1.0 - x1)},{_fmt(p1)},{_fmt(p2)}"
        )
    return "\n".join(lines) + "\n"


def write_trajectory_csv(traj: Trajectory, path: Union[str, os.PathLike]) -> None:
    """Write the trajectory CSV to ``path``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(trajectory_csv(traj))


def sweep_csv(result: SweepResult) -> str:
    """Render a sweep as CSV text; off-domain cells are left empty."""
    lines = [SWEEP_HEADER]
    for row in result.rows:
        if row.in_domain:
            tail = f"true,{_fmt(row.x_I)},{_fmt(row.dGamma_dalpha)},{_fmt(row.dGamma_dbeta)}"
        else:
            tail = "false,,,"
        lines.append(f"{_fmt(row.alpha)},{_fmt(row.beta)},{_fmt(row.xi)},{tail}")
    return "\n".join(lines) + "\n"


def write_sweep_csv(result: SweepResult, path: Union[str, os.PathLike]) -> None:
    """Write the sweep CSV to ``path``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(sweep_csv(result))
