import numpy as np
import pytest

from graphlaws import config
from graphlaws.dag import Dag
from graphlaws.subsets import SubsetVector, vset
from graphlaws.ugraph import UGraph

# redundant cross-checks on for the whole suite
config.set_debug(True)


def S(*vs) -> int:
    return vset(vs)


def vec(n, mapping) -> SubsetVector:
    """SubsetVector from ``{tuple_of_vertices: value}``."""
    return SubsetVector(n, {vset(k): v for k, v in mapping.items()})


def graph(n, *edges) -> UGraph:
    return UGraph.from_edges(n, edges)


def dag(n, *edges) -> Dag:
    return Dag.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
