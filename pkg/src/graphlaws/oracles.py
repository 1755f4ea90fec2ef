"""Brute-force oracles.

Deliberately naive reference computations used to check the fast paths.  None
of these call the routines they are meant to verify: chordality here is
simplicial-vertex elimination (not MCS), cliques are found by scanning every
subset, DAGs come from filtering all directed graphs, and d-separation is
decided by walking every simple path.
"""
from __future__ import annotations

from itertools import combinations
from math import lgamma, log, pi

import numpy as np
from scipy import integrate

from .subsets import full, members, submasks


def is_chordal_by_elimination(n: int, edges) -> bool:
    """Repeatedly delete a simplicial vertex; chordal iff everything goes."""
    nbrs = {v: set() for v in range(n)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    alive = set(range(n))
    while alive:
        for v in sorted(alive):
            around = nbrs[v] & alive
            if all(b in nbrs[a] for a, b in combinations(sorted(around), 2)):
                alive.remove(v)
                break
        else:
            return False
    return True


def count_chordal(n: int) -> int:
    pairs = list(combinations(range(n), 2))
    total = 0
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        total += is_chordal_by_elimination(n, edges)
    return total


def complete_sets_by_scan(n: int, edges, vertices: int | None = None) -> list[int]:
    vertices = full(n) if vertices is None else vertices
    es = {frozenset(e) for e in edges}
    out = []
    for a in submasks(vertices):
        vs = members(a)
        if all(frozenset(p) in es for p in combinations(vs, 2)):
            out.append(a)
    return out


def maximal_cliques_by_scan(n: int, edges, vertices: int | None = None) -> set[int]:
    comp = complete_sets_by_scan(n, edges, vertices)
    return {a for a in comp if not any(b != a and a & ~b == 0 for b in comp)}


def mobius_by_definition(values: dict[int, int], n: int, universe: int | None = None) -> dict[int, int]:
    """``t_B = sum_{A ⊇ B} (-1)^{|A \\ B|} c_A`` by the double loop."""
    universe = full(n) if universe is None else universe
    out = {}
    for b in submasks(universe):
        acc = 0
        for a in submasks(universe):
            if a & b == b:
                acc += (-1) ** (a & ~b).bit_count() * values.get(a, 0)
        if acc:
            out[b] = acc
    return out


def has_directed_cycle(n: int, arcs) -> bool:
    """Repeated removal of sinks."""
    arcs = set(arcs)
    alive = set(range(n))
    while alive:
        sinks = [v for v in alive if not any(u == v and w in alive for u, w in arcs)]
        if not sinks:
            return True
        alive -= set(sinks)
    return False


def all_dags_by_filter(n: int) -> list[frozenset]:
    """Every acyclic subset of the ``n(n-1)`` ordered pairs."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    for mask in range(1 << len(arcs)):
        chosen = [a for i, a in enumerate(arcs) if mask >> i & 1]
        if any((v, u) in chosen for u, v in chosen):
            continue
        if not has_directed_cycle(n, chosen):
            out.append(frozenset(chosen))
    return out


def _simple_paths(n: int, adj: dict[int, set[int]], src: int, dst: int):
    stack = [(src, [src])]
    while stack:
        v, path = stack.pop()
        if v == dst:
            yield path
            continue
        for w in adj[v]:
            if w not in path:
                stack.append((w, path + [w]))


def d_separated_by_paths(n: int, arcs, a: set, b: set, c: set) -> bool:
    """Path criterion: every path between ``a`` and ``b`` is blocked by ``c``.

    A path is blocked at a non-collider in ``c`` or at a collider with no
    descendant (itself included) in ``c``.  Overlapping sets follow the
    moral-graph convention: a shared vertex outside ``c`` is never separated.
    """
    arcs = set(arcs)
    start, end = set(a) - set(c), set(b) - set(c)
    if start & end:
        return False
    adj = {v: set() for v in range(n)}
    for u, v in arcs:
        adj[u].add(v)
        adj[v].add(u)
    desc = {v: {v} for v in range(n)}
    changed = True
    while changed:
        changed = False
        for u, v in arcs:
            new = desc[v] - desc[u]
            if new:
                desc[u] |= new
                changed = True
    for s in start:
        for t in end:
            for path in _simple_paths(n, adj, s, t):
                blocked = False
                for i in range(1, len(path) - 1):
                    x, m, y = path[i - 1], path[i], path[i + 1]
                    collider = (x, m) in arcs and (y, m) in arcs
                    if collider:
                        if not desc[m] & set(c):
                            blocked = True
                    elif m in c:
                        blocked = True
                    if blocked:
                        break
                if not blocked:
                    return False
    return True


def dsep_signature(n: int, arcs) -> frozenset:
    """All ``(A, B, C)`` with disjoint ``A, B`` nonempty and ``C`` disjoint
    from both, for which ``A`` and ``B`` are d-separated given ``C``."""
    out = set()
    for labels in np.ndindex(*(4,) * n):
        a = {v for v in range(n) if labels[v] == 1}
        b = {v for v in range(n) if labels[v] == 2}
        c = {v for v in range(n) if labels[v] == 3}
        if a and b and d_separated_by_paths(n, arcs, a, b, c):
            out.add((frozenset(a), frozenset(b), frozenset(c)))
    return frozenset(out)


def partition_dags(n: int, key) -> dict:
    classes: dict = {}
    for dag in all_dags_by_filter(n):
        classes.setdefault(key(dag), []).append(dag)
    return classes


# -- Gaussian oracles --------------------------------------------------------

def iw_univariate_marginal_by_quadrature(x: np.ndarray, delta: float, phi: float) -> float:
    """Density of zero-mean scalar observations ``x`` with variance drawn from
    the scalar inverse Wishart ``IW(δ; φ)``, i.e. an inverse gamma with shape
    ``δ/2`` and scale ``φ/2``, integrated numerically over the variance."""
    x = np.asarray(x, dtype=float)
    m = x.size
    ss = float(np.sum(x * x))
    shape, scale = delta / 2.0, phi / 2.0
    log_norm = shape * log(scale) - lgamma(shape)

    def integrand(s2):
        if s2 <= 0:
            return 0.0
        loglik = -0.5 * m * log(2 * pi * s2) - ss / (2 * s2)
        logprior = log_norm - (shape + 1) * log(s2) - scale / s2
        return np.exp(loglik + logprior)

    # split at the posterior mode for accuracy
    mode = (scale + ss / 2) / (shape + m / 2 + 1)
    parts = [0.0, mode / 10, mode, mode * 10, mode * 1000, np.inf]
    total = 0.0
    for lo, hi in zip(parts[:-1], parts[1:]):
        val, _ = integrate.quad(integrand, lo, hi, epsabs=0, epsrel=1e-13, limit=500)
        total += val
    return log(total)


def _logdet(m: np.ndarray) -> float:
    sign, val = np.linalg.slogdet(m)
    assert sign > 0
    return float(val)


def _multigammaln(a: float, d: int) -> float:
    return d * (d - 1) / 4 * log(pi) + sum(lgamma(a - j / 2) for j in range(d))


def iw_regression_log_marginal(y: np.ndarray, xa: np.ndarray, delta: float, phi: np.ndarray, a_idx, c_idx) -> float:
    """Log density of columns ``c`` given columns ``a`` under ``IW(δ; Φ)``.

    Uses the decomposition of the inverse Wishart into the marginal block,
    the conditional covariance ``IW(δ+|a|; Φ_{c|a})`` and the matrix-normal
    regression coefficients centred at ``Φ_ca Φ_aa^{-1}``; the predictive is
    the standard conjugate multivariate-regression marginal likelihood.
    """
    a_idx, c_idx = list(a_idx), list(c_idx)
    m, r = y.shape
    k = len(a_idx)
    paa = phi[np.ix_(a_idx, a_idx)]
    pac = phi[np.ix_(a_idx, c_idx)]
    pcc = phi[np.ix_(c_idx, c_idx)]
    if k:
        mean = np.linalg.solve(paa, pac)
        psi = pcc - pac.T @ mean
        lam_n = paa + xa.T @ xa
        mean_n = np.linalg.solve(lam_n, xa.T @ y + paa @ mean)
        psi_n = psi + y.T @ y + mean.T @ paa @ mean - mean_n.T @ lam_n @ mean_n
        coef_term = 0.5 * r * (_logdet(paa) - _logdet(lam_n))
    else:
        psi = pcc
        psi_n = psi + y.T @ y
        coef_term = 0.0
    nu0 = delta + k + r - 1
    nun = nu0 + m
    return (
        -0.5 * m * r * log(pi)
        + coef_term
        + 0.5 * nu0 * _logdet(psi)
        - 0.5 * nun * _logdet(psi_n)
        + _multigammaln(nun / 2, r)
        - _multigammaln(nu0 / 2, r)
    )


def log_marginal_by_regressions(x: np.ndarray, delta: float, phi: np.ndarray, families) -> float:
    """Data likelihood as a chain of regressions, one per ``(v, parents)``
    pair of a perfect ordering or a DAG."""
    total = 0.0
    for v, pa in families:
        pa = list(pa)
        total += iw_regression_log_marginal(x[:, [v]], x[:, pa], delta, phi, pa, [v])
    return total
