"""Structural Markov graph laws over decomposable graphs and dagoids.

Vertex sets are integer bitmasks (bit ``v`` set means vertex ``v`` is in the
set); :func:`vset` and :func:`members` convert to and from vertex lists.
"""
from .cliques import clique_vector, completeness_vector, delta_t
from .dag import Dag, Dagoid, d_clique_vector, dagoid_members, dagoid_of, markov_equivalent
from .dagoid_law import (
    ExponentialDagoidLaw,
    OrderedLaw,
    TableDagoidLaw,
    check_dagoid_structural_markov,
    enumerate_dagoids,
    recover_dagoid_omega,
)
from .errors import GraphLawError
from .gaussian import GaussHyper, clique_marginal_table, map_dagoid, map_graph, posterior_omega
from .laws import (
    ExponentialLaw,
    GraphFamily,
    TableLaw,
    builtin_law,
    check_meta_markov,
    check_structural_markov,
    recover_omega,
    standardize_omega,
)
from .mcmc import exact_distribution, run_chain, tv_distance
from .subsets import SubsetVector, members, vset
from .ugraph import UGraph, enumerate_decomposable, is_decomposable, junction_tree

__version__ = "0.1.0"
