"""Python access to the dclust clustering schemes.

Instances are plain dicts in the ``dclust.instance/1`` layout; results are
dicts as well.
"""

import json

from . import _dclust
from ._dclust import (
    CapacityError,
    DomainError,
    InfeasibleError,
    ParameterError,
    ParseError,
    ValidationError,
)

__all__ = [
    "CapacityError",
    "DomainError",
    "InfeasibleError",
    "ParameterError",
    "ParseError",
    "ValidationError",
    "decompose",
    "evaluate",
    "exact",
    "parse_instance",
    "points_instance",
    "solve",
]


def _dump(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def points_instance(points, objective, k=0, z=0, opening_cost=1.0, doubling_dim=2):
    """Every point is a client and a candidate facility."""
    rows = [[float(x) for x in p] for p in points]
    return json.loads(_dclust.points_instance(rows, objective, k, z, opening_cost, doubling_dim))


def parse_instance(text, format="points-csv", objective="kmedian", k=0, z=0, opening_cost=1.0, doubling_dim=2):
    return json.loads(_dclust.parse_instance(text, format, objective, k, z, opening_cost, doubling_dim))


def solve(instance, epsilon=0.3, seed=0, rho=0.0):
    """Run the full scheme (guide, decomposition, DP, lift)."""
    return json.loads(_dclust.solve(_dump(instance), epsilon, seed, rho))


def exact(instance, max_subsets=1e6):
    return json.loads(_dclust.exact(_dump(instance), max_subsets))


def evaluate(instance, facilities):
    return json.loads(_dclust.evaluate(_dump(instance), list(facilities)))


def decompose(instance, rho, seed=0):
    return json.loads(_dclust.decompose(_dump(instance), rho, seed))
