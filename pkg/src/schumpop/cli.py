"""Command-line surface tying the library together.

Subcommands mirror the library's main artifacts: ``diversity`` prints
the diversity/dissimilarity tables of a catalog, ``classify`` the
stable-state structure of a matrix, ``state`` the closed-form
innovator-imitator mix, ``simulate`` runs the mean dynamics or the
finite-population simulator and writes a trajectory CSV, and ``sweep``
writes the comparative-statics grid.

Exit codes: 0 success, 2 scenario parse/validation error, 3 domain
error (e.g. parameters that are not Schumpeterian), 4 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .csvio import write_sweep_csv, write_trajectory_csv
from .diversity import diversity, dissimilarity, is_relevant_innovation, relevant_attributes
from .dynamics import (
    AgentPopulation,
    RevisionProtocol,
    integrate,
    simulate_finite_population,
)
from .errors import DomainError, NumericsError, ScenarioError
from .game import classify_ess
from .scenario import RunRecord, Scenario, parse_scenario, scenario_digest
from .schumpeter import is_schumpeterian, schumpeterian_state, sweep as run_sweep

EXIT_OK = 0
EXIT_SCENARIO = 2
EXIT_DOMAIN = 3
EXIT_NUMERICS = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schumpop",
        description="Schumpeterian population games: diversity, stability, dynamics, sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True, help="path to the scenario file")

    p = sub.add_parser("diversity", help="print diversity and dissimilarity tables")
    add_config(p)

    p = sub.add_parser("classify", help="print the stable-state classification of the matrix")
    add_config(p)

    p = sub.add_parser("state", help="print the Schumpeterian state and the stability check")
    add_config(p)

    p = sub.add_parser("simulate", help="integrate or simulate the population dynamics")
    add_config(p)
    p.add_argument("--out", required=True, help="path of the trajectory CSV to write")
    p.add_argument("--protocol", choices=[x.value for x in RevisionProtocol], help="revision protocol")
    p.add_argument("--x0", type=float, help="initial share of strategy 1 (innovators)")
    p.add_argument("--t-max", type=float, dest="t_max", help="time horizon (mean-dynamics units)")
    p.add_argument("--dt", type=float, help="integration / sampling step")
    p.add_argument("--stochastic", action="store_true", help="run the finite-population simulator")
    p.add_argument("--N", type=int, dest="n_agents", help="number of agents (stochastic runs)")
    p.add_argument("--clock-rate", type=float, dest="clock_rate", help="agent revision clock rate")
    p.add_argument("--seed", type=int, help="RNG seed (stochastic runs)")

    p = sub.add_parser("sweep", help="evaluate the innovator rate over an (alpha, beta) grid")
    add_config(p)
    p.add_argument("--out", required=True, help="path of the sweep CSV to write")

    return parser


def _load_scenario(path: str) -> tuple[Scenario, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ScenarioError(f"cannot read scenario file {path!r}: {err}") from err
    return parse_scenario(text), scenario_digest(text)


def _fmt(v: float) -> str:
    return repr(float(v))


def _cmd_diversity(scenario: Scenario) -> int:
    if scenario.diversity is None:
        raise ScenarioError("the diversity command needs a diversity section")
    model = scenario.diversity.build()
    ids = sorted(t.id for t in model.technologies)

    print("relevant attributes:", ", ".join(relevant_attributes(model)) or "(none)")
    print("diversity:")
    for tid in ids:
        print(f"  tau({{{tid}}}) = {_fmt(diversity(model, {tid}))}")
    print(f"  tau(catalog) = {_fmt(diversity(model, ids))}")
    print("dissimilarity delta(row, column):")
    for yp in ids:
        for y in ids:
            if yp != y:
                print(f"  delta({yp}, {y}) = {_fmt(dissimilarity(model, yp, y))}")
    print("relevant-innovation verdicts:")
    for yp in ids:
        for y in ids:
            if yp != y:
                verdict = "yes" if is_relevant_innovation(model, yp, y) else "no"
                print(f"  {yp} is a relevant innovation of {y}: {verdict}")
    return EXIT_OK


def _cmd_classify(scenario: Scenario) -> int:
    matrix, _ = scenario.matrix_source()
    result = classify_ess(matrix)
    print(f"matrix: a={_fmt(matrix.a)} b={_fmt(matrix.b)} c={_fmt(matrix.c)} d={_fmt(matrix.d)}")
    print(f"class: {result.kind.value}")
    states = ", ".join(f"({_fmt(s.x1)}, {_fmt(s.x2)})" for s in result.ess_states)
    print(f"stable states: {states}")
    if result.interior_eq is not None:
        print(f"interior rest point: p = {_fmt(result.interior_eq.x1)}")
    print(f"attracting: {result.attracting}")
    return EXIT_OK


def _cmd_state(scenario: Scenario) -> int:
    if scenario.schumpeter is None:
        raise ScenarioError("the state command needs a schumpeter section")
    model = scenario.diversity.build() if scenario.diversity is not None else None
    params = scenario.schumpeter.resolve(model)
    print(
        f"parameters: pi={_fmt(params.pi)} cost={_fmt(params.cost)} "
        f"alpha={_fmt(params.alpha)} beta={_fmt(params.beta)}"
    )
    print(f"schumpeterian: {'yes' if is_schumpeterian(params) else 'no'}")
    state = schumpeterian_state(params)  # raises DomainError when not Schumpeterian
    print(f"innovator rate x_I = {_fmt(state.x_I)}")
    print(f"imitator rate x_R = {_fmt(state.x_R)}")
    return EXIT_OK


def _cmd_simulate(scenario: Scenario, args, digest: str) -> int:
    matrix, _ = scenario.matrix_source()
    dyn = scenario.dynamics
    overrides = {}
    if args.protocol is not None:
        overrides["protocol"] = RevisionProtocol.parse(args.protocol)
    if args.x0 is not None:
        overrides["x0"] = args.x0
    if args.t_max is not None:
        overrides["t_max"] = args.t_max
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.n_agents is not None:
        overrides["n_agents"] = args.n_agents
    if args.clock_rate is not None:
        overrides["clock_rate"] = args.clock_rate
    if args.seed is not None:
        overrides["seed"] = args.seed
    dyn = replace(dyn, **overrides)

    stochastic = args.stochastic or dyn.n_agents is not None
    if dyn.protocol is RevisionProtocol.PPI and dyn.x0 in (0.0, 1.0):
        print(
            "warning: a monomorphic start is absorbing under imitation; convergence to "
            "the mixed state needs a polymorphic x0",
            file=sys.stderr,
        )

    if stochastic:
        n_agents = dyn.n_agents if dyn.n_agents is not None else 1000
        pop = AgentPopulation.from_share(n_agents, dyn.x0, dyn.seed)
        traj = simulate_finite_population(
            dyn.protocol, matrix, pop, t_max=dyn.t_max, clock_rate=dyn.clock_rate, sample_dt=dyn.dt
        )
        params = {
            "protocol": dyn.protocol.value,
            "mode": "stochastic",
            "x0": pop.share,
            "t_max": dyn.t_max,
            "dt": dyn.dt,
            "N": n_agents,
            "clock_rate": dyn.clock_rate,
            "seed": dyn.seed,
        }
    else:
        traj = integrate(dyn.protocol, matrix, dyn.x0, t_max=dyn.t_max, dt=dyn.dt)
        params = {
            "protocol": dyn.protocol.value,
            "mode": "ode",
            "x0": dyn.x0,
            "t_max": dyn.t_max,
            "dt": dyn.dt,
        }
    write_trajectory_csv(traj, args.out)
    record = RunRecord(
        command="simulate", parameters=params, input_digest=digest, outputs=(args.out,)
    )
    print(record.to_json())
    return EXIT_OK


def _cmd_sweep(scenario: Scenario, args, digest: str) -> int:
    if scenario.sweep is None:
        raise ScenarioError("the sweep command needs a sweep section")
    spec = scenario.sweep
    result = run_sweep(spec.alpha.points(), spec.beta.points(), spec.xi)
    write_sweep_csv(result, args.out)
    record = RunRecord(
        command="sweep",
        parameters={
            "alpha": {"min": spec.alpha.lo, "max": spec.alpha.hi, "n": spec.alpha.n},
            "beta": {"min": spec.beta.lo, "max": spec.beta.hi, "n": spec.beta.n},
            "xi": spec.xi,
        },
        input_digest=digest,
        outputs=(args.out,),
    )
    print(record.to_json())
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        scenario, digest = _load_scenario(args.config)
        if args.command == "diversity":
            return _cmd_diversity(scenario)
        if args.command == "classify":
            return _cmd_classify(scenario)
        if args.command == "state":
            return _cmd_state(scenario)
        if args.command == "simulate":
            return _cmd_simulate(scenario, args, digest)
        if args.command == "sweep":
            return _cmd_sweep(scenario, args, digest)
        raise AssertionError(f"unhandled command {args.command}")
    except ScenarioError as err:
        print(f"scenario error: {err}", file=sys.stderr)
        return EXIT_SCENARIO
    except DomainError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericsError as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERICS


def entry() -> None:
    sys.exit(main())
