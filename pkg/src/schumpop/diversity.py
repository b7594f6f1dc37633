"""Multi-attribute diversity of technology catalogs.

A technology catalog carries a finite family of attributes (subsets of
the catalog), each weighted by how much a consumer population values it.
The diversity of a set of technologies is the total weight of the
attributes realized by at least one of its members; the dissimilarity
delta(y', y) is the total weight of attributes that y' has and y lacks.
A technology y' is a relevant innovation of y when its singleton
diversity is strictly larger, equivalently delta(y', y) > delta(y, y').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import DomainError

#: Absolute tolerance used by model validation (panel masses).
MASS_TOL = 1e-12


@dataclass(frozen=True)
class Technology:
    """A technology (or product) identified by an opaque id."""

    id: str
    label: Optional[str] = None


@dataclass(frozen=True)
class Attribute:
    """A characteristic shared by the member technologies.

    An attribute is identified with the set of technologies possessing
    it; ``members`` holds their ids.
    """

    id: str
    members: frozenset[str]

    def __init__(self, id: str, members: Iterable[str]):
        object.__setattr__(self, "id", id)
        object.__setattr__(self, "members", frozenset(members))


@dataclass(frozen=True)
class Consumer:
    """One quadrature node of the consumer continuum.

    ``mass`` is the node's share of the unit consumer population and
    ``valuations`` maps attribute ids to values in [0, 1]; attributes
    not mentioned are valued 0.
    """

    mass: float
    valuations: Mapping[str, float]

    def __post_init__(self):
        if not (self.mass >= 0.0):
            raise DomainError(f"consumer mass must be nonnegative, got {self.mass}")
        for attr_id, value in self.valuations.items():
            if not (0.0 <= value <= 1.0):
                raise DomainError(
                    f"valuation of attribute {attr_id!r} must lie in [0, 1], got {value}"
                )

    def valuation(self, attr_id: str) -> float:
        return self.valuations.get(attr_id, 0.0)


@dataclass(frozen=True)
class ConsumerPanel:
    """A finite mass-weighted panel standing in for the consumer continuum.

    Masses must sum to 1 (within ``MASS_TOL``) so that attribute weights
    stay in [0, 1].
    """

    consumers: tuple[Consumer, ...]

    def __init__(self, consumers: Iterable[Consumer]):
        object.__setattr__(self, "consumers", tuple(consumers))
        total = math.fsum(c.mass for c in self.consumers)
        if abs(total - 1.0) > MASS_TOL:
            raise DomainError(
                f"panel masses must sum to 1 (within {MASS_TOL}), got {total!r}"
            )


def attribute_weight(panel: ConsumerPanel, attr: Attribute | str) -> float:
    """Mass-weighted mean valuation of an attribute over the panel.

    This is the finite-panel quadrature of the mean valuation over the
    consumer continuum; with masses summing to 1 and valuations in
    [0, 1] the result lies in [0, 1].
    """
    attr_id = attr.id if isinstance(attr, Attribute) else attr
    return math.fsum(c.mass * c.valuation(attr_id) for c in panel.consumers)


class DiversityModel:
    """A technology catalog with a weighted attribute family.

    Weights may be supplied directly or computed from a consumer panel
    (see :meth:`from_panel`). Only finitely many attributes exist, so
    the relevant family (attributes with positive weight) is finite.
    """

    def __init__(
        self,
        technologies: Iterable[Technology],
        attributes: Iterable[Attribute],
        weights: Mapping[str, float],
    ):
        self.technologies = tuple(technologies)
        self.attributes = tuple(attributes)

        tech_ids = [t.id for t in self.technologies]
        if len(set(tech_ids)) != len(tech_ids):
            raise DomainError("technology ids must be unique within a catalog")
        self._tech_ids = frozenset(tech_ids)

        attr_ids = [a.id for a in self.attributes]
        if len(set(attr_ids)) != len(attr_ids):
            raise DomainError("attribute ids must be unique")
        for a in self.attributes:
            stray = a.members - self._tech_ids
            if stray:
                raise DomainError(
                    f"attribute {a.id!r} references unknown technologies: {sorted(stray)}"
                )

        self.weights: dict[str, float] = {}
        for a in self.attributes:
            try:
                w = float(weights[a.id])
            except KeyError:
                raise DomainError(f"no weight given for attribute {a.id!r}") from None
            if not (0.0 <= w <= 1.0):
                raise DomainError(
                    f"weight of attribute {a.id!r} must lie in [0, 1], got {w}"
                )
            self.weights[a.id] = w
        unknown = set(weights) - set(self.weights)
        if unknown:
            raise DomainError(f"weights given for unknown attributes: {sorted(unknown)}")

    @classmethod
    def from_panel(
        cls,
        technologies: Iterable[Technology],
        attributes: Iterable[Attribute],
        panel: ConsumerPanel,
    ) -> "DiversityModel":
        """Build the model with weights quadratured from a consumer panel."""
        attributes = tuple(attributes)
        weights = {a.id: attribute_weight(panel, a) for a in attributes}
        return cls(technologies, attributes, weights)

    def technology_ids(self) -> frozenset[str]:
        return self._tech_ids

    def weight(self, attr_id: str) -> float:
        try:
            return self.weights[attr_id]
        except KeyError:
            raise DomainError(f"unknown attribute id: {attr_id!r}") from None

    def _check_tech(self, tech_id: str) -> str:
        if tech_id not in self._tech_ids:
            raise DomainError(f"unknown technology id: {tech_id!r}")
        return tech_id


def relevant_attributes(model: DiversityModel) -> list[str]:
    """Ids of attributes with strictly positive weight, id-sorted.

    Positivity is strict with no epsilon floor; weights of exactly 0
    are the way to drop an attribute from the relevant family.
    """
    return sorted(a.id for a in model.attributes if model.weights[a.id] > 0.0)


def diversity(model: DiversityModel, technologies: Iterable[str]) -> float:
    """Total weight of the attributes realized by the given set.

    An attribute is realized when at least one of its members belongs
    to the set; the empty set has diversity 0.
    """
    selected = frozenset(model._check_tech(t) for t in technologies)
    if not selected:
        return 0.0
    return math.fsum(
        model.weights[a.id] for a in model.attributes if a.members & selected
    )


def dissimilarity(model: DiversityModel, yp: str, y: str) -> float:
    """Total weight of attributes possessed by ``yp`` but not by ``y``."""
    model._check_tech(yp)
    model._check_tech(y)
    return math.fsum(
        model.weights[a.id]
        for a in model.attributes
        if yp in a.members and y not in a.members
    )


def is_relevant_innovation(model: DiversityModel, yp: str, y: str) -> bool:
    """Whether ``yp`` is strictly more diverse than ``y`` on its own.

    Equivalent to dissimilarity(yp, y) > dissimilarity(y, yp): the new
    technology must carry relevant attributes the old one lacks, beyond
    what it forgoes.
    """
    return diversity(model, {yp}) > diversity(model, {y})
