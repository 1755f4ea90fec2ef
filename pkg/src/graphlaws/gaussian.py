"""Zero-mean Gaussian data under inverse Wishart hyperparameters.

The clique marginal ``p_A(x_A)`` integrates the covariance of columns ``A``
against an inverse Wishart with degrees-of-freedom parameter ``δ`` and scale
``Φ_A``.  The density convention is ``∝ |Σ|^{-(δ+2q)/2} exp(-tr(Σ^{-1}Φ)/2)``
for ``q x q`` blocks, which makes ``p_A`` independent of the superset it is
marginalised from.  In the common ``ν`` parameterisation this is ``ν = δ+q-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log, pi

import numpy as np
from scipy.linalg import LinAlgError, cholesky
from scipy.special import multigammaln

from . import config
from .cliques import clique_vector
from .dag import Dag, Dagoid, d_clique_vector
from .dagoid_law import enumerate_dagoids
from .errors import CapExceeded, InvalidInput, NumericalFailure
from .subsets import SubsetVector, full, members, submasks
from .ugraph import UGraph, enumerate_decomposable


@dataclass(frozen=True, eq=False)
class GaussHyper:
    delta: float
    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        if not self.delta > 0:
            raise InvalidInput(f"delta must be positive, got {self.delta}")
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise InvalidInput("phi must be a square matrix")
        if not np.all(np.isfinite(phi)) or np.max(np.abs(phi - phi.T), initial=0.0) > 1e-12:
            raise InvalidInput("phi must be finite and symmetric")
        try:
            cholesky(phi, lower=True)
        except LinAlgError:
            raise InvalidInput("phi must be positive definite") from None
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @classmethod
    def identity(cls, n: int, delta: float = 3.0) -> "GaussHyper":
        return cls(delta, np.eye(n))


def check_data(x, n: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return np.zeros((0, x.shape[-1] if n is None else n))
    if x.ndim == 1:
        # a vector is a single column for one vertex, a single row otherwise
        x = x.reshape(-1, 1) if n == 1 else x.reshape(1, -1)
    if x.ndim != 2:
        raise InvalidInput("data must be a matrix with one column per vertex")
    if n is not None and x.shape[1] != n and x.shape[0] > 0:
        raise InvalidInput(f"data has {x.shape[1]} columns, expected {n}")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("data contains non-finite entries")
    return x


def _logdet(m: np.ndarray) -> float:
    try:
        c = cholesky(m, lower=True)
    except LinAlgError:
        raise NumericalFailure("matrix is not positive definite") from None
    return 2.0 * float(np.sum(np.log(np.diag(c))))


def _log_marginal_block(delta: float, phi_a: np.ndarray, s_a: np.ndarray, m: int) -> float:
    q = phi_a.shape[0]
    if q == 0 or m == 0:
        return 0.0
    a0 = (delta + q - 1) / 2
    a1 = (delta + m + q - 1) / 2
    return (
        -0.5 * m * q * log(pi)
        + multigammaln(a1, q)
        - multigammaln(a0, q)
        + a0 * _logdet(phi_a)
        - a1 * _logdet(phi_a + s_a)
    )


def clique_log_marginal(h: GaussHyper, x, a: int) -> float:
    """``log p_A(x_A)``; zero for the empty set or no observations."""
    x = check_data(x, h.n)
    idx = members(a)
    if not idx or x.shape[0] == 0:
        return 0.0
    xa = x[:, idx]
    return _log_marginal_block(h.delta, h.phi[np.ix_(idx, idx)], xa.T @ xa, x.shape[0])


def clique_marginal_table(h: GaussHyper, x) -> SubsetVector:
    """``log p_A(x_A)`` for every ``A ⊆ V`` (dense, at most 16 vertices)."""
    n = h.n
    if n > config.MAX_DENSE:
        raise CapExceeded(f"dense marginal table over {n} vertices exceeds cap {config.MAX_DENSE}")
    x = check_data(x, n)
    m = x.shape[0]
    if m == 0:
        return SubsetVector.zeros(n)
    scatter = x.T @ x
    entries = {}
    for a in submasks(full(n)):
        idx = members(a)
        if idx:
            ix = np.ix_(idx, idx)
            entries[a] = _log_marginal_block(h.delta, h.phi[ix], scatter[ix], m)
    return SubsetVector(n, entries)


def graph_log_marginal(h: GaussHyper, x, g: UGraph, table: SubsetVector | None = None) -> float:
    """``log π^(G)(x) = Σ_A t_A(G) log p_A(x_A)``."""
    table = clique_marginal_table(h, x) if table is None else table
    return float(table.dot(clique_vector(g)))


def dagoid_log_marginal(h: GaussHyper, x, dg: Dagoid | Dag, table: SubsetVector | None = None) -> float:
    table = clique_marginal_table(h, x) if table is None else table
    return float(table.dot(d_clique_vector(dg)))


def posterior_omega(omega: SubsetVector, h: GaussHyper, x) -> SubsetVector:
    """Conjugate update ``ω'_A = ω_A + log p_A(x_A)``."""
    return omega + clique_marginal_table(h, x)


def update_hyper(h: GaussHyper, x) -> GaussHyper:
    """Posterior hyperparameters ``(δ + m, Φ + XᵀX)``."""
    x = check_data(x, h.n)
    return GaussHyper(h.delta + x.shape[0], h.phi + x.T @ x)


def _tie_tol(best: float) -> float:
    return 1e-12 * max(1.0, abs(best))


def map_graph(omega: SubsetVector, n: int | None = None, cap: int | None = None) -> UGraph:
    """Maximiser of ``ω · t(G)``; ties go to the smallest sorted edge list."""
    n = omega.n if n is None else n
    cap = config.MAX_ENUMERATE if cap is None else cap
    if n > cap:
        raise CapExceeded(f"exhaustive MAP search over {n} vertices exceeds cap {cap}")
    scored = [(float(omega.dot(clique_vector(g))), g) for g in enumerate_decomposable(n)]
    best = max(s for s, _ in scored)
    return min((g for s, g in scored if s >= best - _tie_tol(best)), key=lambda g: g.canonical())


def map_dagoid(omega: SubsetVector, n: int | None = None) -> Dagoid:
    n = omega.n if n is None else n
    scored = [(float(omega.dot(d_clique_vector(dg))), dg) for dg, _ in enumerate_dagoids(n)]
    best = max(s for s, _ in scored)
    return min((dg for s, dg in scored if s >= best - _tie_tol(best)), key=lambda dg: dg.canonical())


def simulate_path_gaussian(n: int, n_obs: int, rng: np.random.Generator, coef: float = 0.6) -> np.ndarray:
    """Autoregressive chain ``X_{k+1} = coef·X_k + noise``: Markov to the path 0-1-...-(n-1)."""
    x = np.empty((n_obs, n))
    x[:, 0] = rng.standard_normal(n_obs)
    for k in range(1, n):
        x[:, k] = coef * x[:, k - 1] + rng.standard_normal(n_obs)
    return x
