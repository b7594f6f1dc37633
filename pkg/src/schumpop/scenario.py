"""Scenario files: strict JSON-shaped run configurations.

A scenario bundles the inputs of a run: an optional diversity section
(catalog, attributes, panel), at most one source of the payoff matrix
(a literal game section or a schumpeter section), dynamics parameters,
and an optional sweep grid. Parsing is strict: unknown keys are
rejected, every number must be finite, and semantic invariants are
checked with errors naming the violated rule. A canonical printer is
provided so that parse(print(scenario)) round-trips exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .diversity import Attribute, Consumer, ConsumerPanel, DiversityModel, Technology
from .dynamics import RevisionProtocol
from .errors import DomainError, ScenarioError
from .game import GameMatrix
from .schumpeter import MarketValueMap, SchumpeterParams, build_game, params_from_diversity


def _reject_constant(token: str) -> float:
    raise ScenarioError(f"non-finite number {token!r} is not allowed in scenarios")


def _require_keys(obj: Mapping[str, Any], allowed: set[str], context: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"unknown key(s) in {context}: {sorted(unknown)}")


def _require_object(value: Any, context: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise ScenarioError(f"{context} must be an object")
    return value


def _require_list(value: Any, context: str) -> list:
    if not isinstance(value, list):
        raise ScenarioError(f"{context} must be a list")
    return value


def _number(obj: Mapping[str, Any], key: str, context: str, default=None) -> float:
    if key not in obj:
        if default is not None:
            return default
        raise ScenarioError(f"missing required number {key!r} in {context}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{context}.{key} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ScenarioError(f"{context}.{key} must be finite, got {v!r}")
    return v


def _integer(obj: Mapping[str, Any], key: str, context: str, default=None) -> int:
    if key not in obj:
        if default is not None:
            return default
        raise ScenarioError(f"missing required integer {key!r} in {context}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(f"{context}.{key} must be an integer, got {v!r}")
    return v


def _string(obj: Mapping[str, Any], key: str, context: str) -> str:
    if key not in obj:
        raise ScenarioError(f"missing required string {key!r} in {context}")
    v = obj[key]
    if not isinstance(v, str):
        raise ScenarioError(f"{context}.{key} must be a string, got {v!r}")
    return v


@dataclass(frozen=True)
class DiversitySection:
    """Raw diversity inputs: catalog, attribute family, optional panel."""

    technologies: tuple[Technology, ...]
    attributes: tuple[Attribute, ...]
    weights: Mapping[str, float]
    panel: Optional[ConsumerPanel]

    def build(self) -> DiversityModel:
        """Materialize the diversity model; a panel wins over weights."""
        if self.panel is not None:
            if self.weights:
                warnings.warn(
                    "scenario gives both attribute weights and a consumer panel; "
                    "the panel wins and the direct weights are ignored",
                    stacklevel=2,
                )
            return DiversityModel.from_panel(self.technologies, self.attributes, self.panel)
        missing = [a.id for a in self.attributes if a.id not in self.weights]
        if missing:
            raise ScenarioError(
                f"attributes {missing} carry no weight and no panel is given"
            )
        return DiversityModel(self.technologies, self.attributes, self.weights)


@dataclass(frozen=True)
class FromDiversity:
    """Recipe turning two catalog technologies into game parameters."""

    old: str
    new: str
    f: MarketValueMap
    ft: MarketValueMap


@dataclass(frozen=True)
class SchumpeterSection:
    """Either literal (alpha, beta) or a from_diversity derivation."""

    pi: float
    cost: float
    alpha: Optional[float] = None
    beta: Optional[float] = None
    from_diversity: Optional[FromDiversity] = None

    def resolve(self, model: Optional[DiversityModel]) -> SchumpeterParams:
        if self.from_diversity is not None:
            assert model is not None  # guaranteed by scenario validation
            fd = self.from_diversity
            return params_from_diversity(
                model, fd.old, fd.new, fd.f, fd.ft, pi=self.pi, cost=self.cost
            )
        return SchumpeterParams(pi=self.pi, cost=self.cost, alpha=self.alpha, beta=self.beta)


@dataclass(frozen=True)
class DynamicsSection:
    """Simulation parameters with package-wide defaults applied."""

    protocol: RevisionProtocol = RevisionProtocol.PPI
    x0: float = 0.5
    t_max: float = 100.0
    dt: float = 0.01
    n_agents: Optional[int] = None
    clock_rate: float = 1.0
    seed: int = 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over [lo, hi] with n points (n = 1 needs lo = hi)."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ScenarioError(f"grid needs n >= 1, got {self.n}")
        if self.n == 1 and self.lo != self.hi:
            raise ScenarioError("a 1-point grid needs min = max")
        if self.n > 1 and not (self.lo < self.hi):
            raise ScenarioError(f"grid needs min < max, got [{self.lo}, {self.hi}]")

    def points(self) -> list[float]:
        if self.n == 1:
            return [self.lo]
        step = (self.hi - self.lo) / (self.n - 1)
        return [self.lo + i * step for i in range(self.n - 1)] + [self.hi]


@dataclass(frozen=True)
class SweepSection:
    alpha: GridSpec
    beta: GridSpec
    xi: float


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario with defaults applied."""

    diversity: Optional[DiversitySection] = None
    game: Optional[GameMatrix] = None
    schumpeter: Optional[SchumpeterSection] = None
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    sweep: Optional[SweepSection] = None

    def matrix_source(self) -> tuple[GameMatrix, Optional[SchumpeterParams]]:
        """The payoff matrix plus, if derived, its game parameters."""
        if self.game is not None:
            return self.game, None
        if self.schumpeter is None:
            raise ScenarioError(
                "this command needs a payoff matrix: provide a game or schumpeter section"
            )
        model = self.diversity.build() if self.diversity is not None else None
        params = self.schumpeter.resolve(model)
        return build_game(params), params


def _parse_diversity(obj: Mapping[str, Any]) -> DiversitySection:
    ctx = "diversity"
    _require_keys(obj, {"technologies", "attributes", "panel"}, ctx)
    techs = []
    for i, raw in enumerate(_require_list(obj.get("technologies"), f"{ctx}.technologies")):
        item = _require_object(raw, f"{ctx}.technologies[{i}]")
        _require_keys(item, {"id", "label"}, f"{ctx}.technologies[{i}]")
        label = item.get("label")
        if label is not None and not isinstance(label, str):
            raise ScenarioError(f"{ctx}.technologies[{i}].label must be a string")
        techs.append(Technology(id=_string(item, "id", f"{ctx}.technologies[{i}]"), label=label))

    attrs = []
    weights: dict[str, float] = {}
    for i, raw in enumerate(_require_list(obj.get("attributes"), f"{ctx}.attributes")):
        item = _require_object(raw, f"{ctx}.attributes[{i}]")
        ictx = f"{ctx}.attributes[{i}]"
        _require_keys(item, {"id", "members", "weight"}, ictx)
        attr_id = _string(item, "id", ictx)
        members = _require_list(item.get("members"), f"{ictx}.members")
        if not all(isinstance(mbr, str) for mbr in members):
            raise ScenarioError(f"{ictx}.members must be a list of technology ids")
        attrs.append(Attribute(id=attr_id, members=members))
        if "weight" in item:
            w = _number(item, "weight", ictx)
            if not (0.0 <= w <= 1.0):
                raise ScenarioError(f"{ictx}.weight must lie in [0, 1], got {w!r}")
            weights[attr_id] = w

    panel = None
    if "panel" in obj:
        consumers = []
        for i, raw in enumerate(_require_list(obj.get("panel"), f"{ctx}.panel")):
            item = _require_object(raw, f"{ctx}.panel[{i}]")
            ictx = f"{ctx}.panel[{i}]"
            _require_keys(item, {"mass", "valuations"}, ictx)
            mass = _number(item, "mass", ictx)
            if mass < 0.0:
                raise ScenarioError(f"{ictx}.mass must be nonnegative, got {mass!r}")
            vals_raw = _require_object(item.get("valuations", {}), f"{ictx}.valuations")
            vals = {}
            for key, value in vals_raw.items():
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ScenarioError(f"{ictx}.valuations[{key!r}] must be a number")
                value = float(value)
                if not math.isfinite(value) or not (0.0 <= value <= 1.0):
                    raise ScenarioError(
                        f"{ictx}.valuations[{key!r}] must lie in [0, 1], got {value!r}"
                    )
                vals[key] = value
            consumers.append(Consumer(mass=mass, valuations=vals))
        try:
            panel = ConsumerPanel(consumers)
        except DomainError as err:
            raise ScenarioError(f"invalid panel: {err}") from err

    section = DiversitySection(
        technologies=tuple(techs), attributes=tuple(attrs), weights=weights, panel=panel
    )
    # surface catalog/attribute inconsistencies (duplicate ids, stray members,
    # missing weights) at parse time rather than first use
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            section.build()
        except DomainError as err:
            raise ScenarioError(f"invalid diversity section: {err}") from err
    return section


def _parse_market_value_map(obj: Mapping[str, Any], context: str) -> MarketValueMap:
    _require_keys(obj, {"kind", "k", "exponent", "scale"}, context)
    kind = _string(obj, "kind", context)
    try:
        if kind == "linear":
            _require_keys(obj, {"kind", "k"}, context)
            return MarketValueMap.linear(_number(obj, "k", context))
        if kind == "power":
            _require_keys(obj, {"kind", "k", "exponent"}, context)
            return MarketValueMap.power(_number(obj, "k", context), _number(obj, "exponent", context))
        if kind == "saturating":
            _require_keys(obj, {"kind", "k", "scale"}, context)
            return MarketValueMap.saturating(_number(obj, "k", context), _number(obj, "scale", context))
    except DomainError as err:
        raise ScenarioError(f"invalid {context}: {err}") from err
    raise ScenarioError(f"{context}.kind must be one of linear, power, saturating; got {kind!r}")


def _parse_schumpeter(obj: Mapping[str, Any]) -> SchumpeterSection:
    ctx = "schumpeter"
    _require_keys(obj, {"pi", "cost", "alpha", "beta", "from_diversity"}, ctx)
    pi = _number(obj, "pi", ctx)
    cost = _number(obj, "cost", ctx)
    has_direct = "alpha" in obj or "beta" in obj
    has_derived = "from_diversity" in obj
    if has_direct and has_derived:
        raise ScenarioError(f"{ctx} must give either alpha/beta or from_diversity, not both")
    if has_derived:
        fd = _require_object(obj["from_diversity"], f"{ctx}.from_diversity")
        _require_keys(fd, {"old", "new", "f", "ft"}, f"{ctx}.from_diversity")
        return SchumpeterSection(
            pi=pi,
            cost=cost,
            from_diversity=FromDiversity(
                old=_string(fd, "old", f"{ctx}.from_diversity"),
                new=_string(fd, "new", f"{ctx}.from_diversity"),
                f=_parse_market_value_map(
                    _require_object(fd.get("f"), f"{ctx}.from_diversity.f"), f"{ctx}.from_diversity.f"
                ),
                ft=_parse_market_value_map(
                    _require_object(fd.get("ft"), f"{ctx}.from_diversity.ft"), f"{ctx}.from_diversity.ft"
                ),
            ),
        )
    if not ("alpha" in obj and "beta" in obj):
        raise ScenarioError(f"{ctx} needs both alpha and beta (or a from_diversity recipe)")
    alpha = _number(obj, "alpha", ctx)
    beta = _number(obj, "beta", ctx)
    try:
        SchumpeterParams(pi=pi, cost=cost, alpha=alpha, beta=beta)
    except DomainError as err:
        raise ScenarioError(f"invalid {ctx} section: {err}") from err
    return SchumpeterSection(pi=pi, cost=cost, alpha=alpha, beta=beta)


def _parse_dynamics(obj: Mapping[str, Any]) -> DynamicsSection:
    ctx = "dynamics"
    _require_keys(obj, {"protocol", "x0", "t_max", "dt", "N", "clock_rate", "seed"}, ctx)
    protocol = RevisionProtocol.PPI
    if "protocol" in obj:
        try:
            protocol = RevisionProtocol.parse(_string(obj, "protocol", ctx))
        except DomainError as err:
            raise ScenarioError(str(err)) from err
    defaults = DynamicsSection()
    x0 = _number(obj, "x0", ctx, default=defaults.x0)
    if not (0.0 <= x0 <= 1.0):
        raise ScenarioError(f"{ctx}.x0 must lie in [0, 1], got {x0!r}")
    t_max = _number(obj, "t_max", ctx, default=defaults.t_max)
    dt = _number(obj, "dt", ctx, default=defaults.dt)
    clock_rate = _number(obj, "clock_rate", ctx, default=defaults.clock_rate)
    if t_max <= 0.0 or dt <= 0.0 or clock_rate <= 0.0:
        raise ScenarioError(f"{ctx}: t_max, dt and clock_rate must be positive")
    n_agents = None
    if "N" in obj:
        n_agents = _integer(obj, "N", ctx)
        if n_agents < 1:
            raise ScenarioError(f"{ctx}.N must be a positive integer, got {n_agents}")
    seed = _integer(obj, "seed", ctx, default=defaults.seed)
    if seed < 0:
        raise ScenarioError(f"{ctx}.seed must be nonnegative, got {seed}")
    return DynamicsSection(
        protocol=protocol,
        x0=x0,
        t_max=t_max,
        dt=dt,
        n_agents=n_agents,
        clock_rate=clock_rate,
        seed=seed,
    )


def _parse_grid(obj: Mapping[str, Any], context: str) -> GridSpec:
    _require_keys(obj, {"min", "max", "n"}, context)
    return GridSpec(
        lo=_number(obj, "min", context),
        hi=_number(obj, "max", context),
        n=_integer(obj, "n", context),
    )


def _parse_sweep(obj: Mapping[str, Any]) -> SweepSection:
    ctx = "sweep"
    _require_keys(obj, {"alpha", "beta", "xi"}, ctx)
    return SweepSection(
        alpha=_parse_grid(_require_object(obj.get("alpha"), f"{ctx}.alpha"), f"{ctx}.alpha"),
        beta=_parse_grid(_require_object(obj.get("beta"), f"{ctx}.beta"), f"{ctx}.beta"),
        xi=_number(obj, "xi", ctx),
    )


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text, rejecting unknown keys and non-finite numbers."""
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"scenario is not valid JSON: {err.msg}", err.lineno, err.colno) from err
    data = _require_object(data, "scenario")
    _require_keys(data, {"diversity", "game", "schumpeter", "dynamics", "sweep"}, "scenario")

    diversity = _parse_diversity(_require_object(data["diversity"], "diversity")) if "diversity" in data else None

    matrix = None
    if "game" in data:
        obj = _require_object(data["game"], "game")
        _require_keys(obj, {"a", "b", "c", "d"}, "game")
        try:
            matrix = GameMatrix(
                a=_number(obj, "a", "game"),
                b=_number(obj, "b", "game"),
                c=_number(obj, "c", "game"),
                d=_number(obj, "d", "game"),
            )
        except DomainError as err:
            raise ScenarioError(f"invalid game section: {err}") from err

    schumpeter = _parse_schumpeter(_require_object(data["schumpeter"], "schumpeter")) if "schumpeter" in data else None
    if matrix is not None and schumpeter is not None:
        raise ScenarioError(
            "sections game and schumpeter are mutually exclusive: exactly one may "
            "provide the payoff matrix"
        )
    if schumpeter is not None and schumpeter.from_diversity is not None:
        if diversity is None:
            raise ScenarioError("schumpeter.from_diversity needs a diversity section")
        ids = {t.id for t in diversity.technologies}
        for role, tid in (("old", schumpeter.from_diversity.old), ("new", schumpeter.from_diversity.new)):
            if tid not in ids:
                raise ScenarioError(
                    f"schumpeter.from_diversity.{role} names unknown technology {tid!r}"
                )

    dynamics = _parse_dynamics(_require_object(data["dynamics"], "dynamics")) if "dynamics" in data else DynamicsSection()
    sweep = _parse_sweep(_require_object(data["sweep"], "sweep")) if "sweep" in data else None

    return Scenario(
        diversity=diversity, game=matrix, schumpeter=schumpeter, dynamics=dynamics, sweep=sweep
    )


def _map_to_json(m: MarketValueMap) -> dict:
    out: dict[str, Any] = {"kind": m.kind, "k": m.k}
    if m.kind == "power":
        out["exponent"] = m.exponent
    if m.kind == "saturating":
        out["scale"] = m.scale
    return out


def print_scenario(s: Scenario) -> str:
    """Canonical text form; parse(print(s)) == s for every valid scenario."""
    out: dict[str, Any] = {}
    if s.diversity is not None:
        div: dict[str, Any] = {
            "technologies": [
                {"id": t.id} if t.label is None else {"id": t.id, "label": t.label}
                for t in s.diversity.technologies
            ],
            "attributes": [
                {
                    "id": a.id,
                    "members": sorted(a.members),
                    **({"weight": s.diversity.weights[a.id]} if a.id in s.diversity.weights else {}),
                }
                for a in s.diversity.attributes
            ],
        }
        if s.diversity.panel is not None:
            div["panel"] = [
                {"mass": c.mass, "valuations": {k: c.valuations[k] for k in sorted(c.valuations)}}
                for c in s.diversity.panel.consumers
            ]
        out["diversity"] = div
    if s.game is not None:
        out["game"] = {"a": s.game.a, "b": s.game.b, "c": s.game.c, "d": s.game.d}
    if s.schumpeter is not None:
        sch: dict[str, Any] = {"pi": s.schumpeter.pi, "cost": s.schumpeter.cost}
        if s.schumpeter.from_diversity is not None:
            fd = s.schumpeter.from_diversity
            sch["from_diversity"] = {
                "old": fd.old,
                "new": fd.new,
                "f": _map_to_json(fd.f),
                "ft": _map_to_json(fd.ft),
            }
        else:
            sch["alpha"] = s.schumpeter.alpha
            sch["beta"] = s.schumpeter.beta
        out["schumpeter"] = sch
    dyn: dict[str, Any] = {
        "protocol": s.dynamics.protocol.value,
        "x0": s.dynamics.x0,
        "t_max": s.dynamics.t_max,
        "dt": s.dynamics.dt,
        "clock_rate": s.dynamics.clock_rate,
        "seed": s.dynamics.seed,
    }
    if s.dynamics.n_agents is not None:
        dyn["N"] = s.dynamics.n_agents
    out["dynamics"] = dyn
    if s.sweep is not None:
        out["sweep"] = {
            "alpha": {"min": s.sweep.alpha.lo, "max": s.sweep.alpha.hi, "n": s.sweep.alpha.n},
            "beta": {"min": s.sweep.beta.lo, "max": s.sweep.beta.hi, "n": s.sweep.beta.n},
            "xi": s.sweep.xi,
        }
    return json.dumps(out, indent=2) + "\n"


def scenario_digest(text: str | bytes) -> str:
    """Content hash of a scenario file (sha256 hex)."""
    raw = text.encode("utf-8") if isinstance(text, str) else text
    return hashlib.sha256(raw).hexdigest()


@dataclass(frozen=True)
class RunRecord:
    """What a CLI invocation did: command, inputs, and outputs.

    An identical scenario and seed yield an identical digest and
    byte-identical output files.
    """

    command: str
    parameters: Mapping[str, Any]
    input_digest: str
    outputs: tuple[str, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "parameters": dict(self.parameters),
                "input_digest": self.input_digest,
                "outputs": list(self.outputs),
            },
            indent=2,
            sort_keys=True,
        )
