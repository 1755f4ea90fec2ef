"""Vertex sets as bit masks, and sparse vectors indexed by them.

A vertex set is a plain ``int``: bit ``v`` is set iff vertex ``v`` belongs to
the set.  :class:`SubsetVector` is a sparse map from such masks to numbers and
carries every subset-lattice object in the package (completeness and clique
vectors, d-clique vectors, point masses, standard imsets, natural parameters
and log-marginal tables).
"""
from __future__ import annotations

from math import comb, isclose
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import config
from .errors import CapExceeded, InvalidInput


def vset(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def full(n: int) -> int:
    return (1 << n) - 1


def members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def size(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    """Index of the lowest set bit (mask must be nonzero)."""
    return (mask & -mask).bit_length() - 1


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` in ascending numeric order."""
    bits = members(mask)
    for i in range(1 << len(bits)):
        sub = 0
        for j, b in enumerate(bits):
            if i >> j & 1:
                sub |= 1 << b
        yield sub


def supersets(mask: int, universe: int) -> Iterator[int]:
    rest = universe & ~mask
    for extra in submasks(rest):
        yield mask | extra


def fmt(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


def check_width(n: int) -> None:
    if n < 0 or n > config.MAX_VERTICES:
        raise CapExceeded(f"vertex count {n} outside 0..{config.MAX_VERTICES}", n=n)


class SubsetVector:
    """Sparse vector over the subsets of ``{0, ..., n-1}``.

    Values are ints or floats; zero entries are never stored.  Instances are
    immutable and hashable, so they can be cached and used as dictionary keys.
    """

    __slots__ = ("n", "_entries", "_hash")

    def __init__(self, n: int, entries: Mapping[int, float] | None = None):
        check_width(n)
        self.n = n
        top = 1 << n
        clean = {}
        for key, value in (entries or {}).items():
            key = int(key)
            if key < 0 or key >= top:
                raise InvalidInput(f"subset key {key} outside the lattice of {n} vertices")
            if value != 0:
                clean[key] = value
        self._entries = clean
        self._hash = None

    @classmethod
    def delta(cls, n: int, subset: int, value=1) -> "SubsetVector":
        """Point mass ``value`` at ``subset``."""
        return cls(n, {subset: value})

    @classmethod
    def zeros(cls, n: int) -> "SubsetVector":
        return cls(n)

    @classmethod
    def from_dense(cls, values, n: int | None = None) -> "SubsetVector":
        values = np.asarray(values)
        if n is None:
            n = int(values.size).bit_length() - 1
        if values.size != 1 << n:
            raise InvalidInput(f"dense vector of length {values.size} is not 2^{n}")
        if np.issubdtype(values.dtype, np.integer):
            items = {i: int(x) for i, x in enumerate(values.tolist()) if x}
        else:
            items = {i: float(x) for i, x in enumerate(values.tolist()) if x}
        return cls(n, items)

    @classmethod
    def from_function(cls, n: int, fn, universe: int | None = None) -> "SubsetVector":
        """Dense construction: ``fn(A)`` for every subset ``A`` of ``universe``."""
        if universe is None:
            universe = full(n)
        return cls(n, {a: fn(a) for a in submasks(universe)})

    # -- mapping protocol -------------------------------------------------
    def __getitem__(self, subset: int):
        return self._entries.get(subset, 0)

    def __contains__(self, subset: int) -> bool:
        return subset in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(sorted(self._entries))

    def items(self):
        return sorted(self._entries.items())

    def keys(self):
        return sorted(self._entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._entries)

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other: "SubsetVector") -> None:
        if not isinstance(other, SubsetVector):
            raise TypeError(f"expected SubsetVector, got {type(other).__name__}")
        if other.n != self.n:
            raise InvalidInput(f"lattice mismatch: {self.n} vs {other.n} vertices")

    def __add__(self, other: "SubsetVector") -> "SubsetVector":
        self._check_same(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return SubsetVector(self.n, out)

    def __sub__(self, other: "SubsetVector") -> "SubsetVector":
        self._check_same(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) - v
        return SubsetVector(self.n, out)

    def __neg__(self) -> "SubsetVector":
        return SubsetVector(self.n, {k: -v for k, v in self._entries.items()})

    def __mul__(self, scalar) -> "SubsetVector":
        return SubsetVector(self.n, {k: v * scalar for k, v in self._entries.items()})

    __rmul__ = __mul__

    def dot(self, other) -> float:
        """Inner product with another vector or any mapping ``subset -> value``."""
        if isinstance(other, SubsetVector):
            a, b = (self._entries, other._entries)
            if len(a) > len(b):
                a, b = b, a
            return sum(v * b.get(k, 0) for k, v in a.items())
        if isinstance(other, np.ndarray):
            return sum(v * other[k] for k, v in self._entries.items())
        return sum(v * other.get(k, 0) for k, v in self._entries.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubsetVector):
            return NotImplemented
        return self.n == other.n and self._entries == other._entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{fmt(k)}: {v}" for k, v in self.items())
        return f"SubsetVector(n={self.n}, {{{body}}})"

    # -- utilities --------------------------------------------------------
    def max_abs_diff(self, other: "SubsetVector") -> float:
        self._check_same(other)
        keys = set(self._entries) | set(other._entries)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def allclose(self, other: "SubsetVector", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    def is_integral(self) -> bool:
        return all(float(v).is_integer() for v in self._entries.values())

    def restrict(self, universe: int) -> "SubsetVector":
        """Entries whose keys are subsets of ``universe``."""
        return SubsetVector(self.n, {k: v for k, v in self._entries.items() if k & ~universe == 0})

    def to_dense(self, dtype=None) -> np.ndarray:
        if self.n > config.MAX_DENSE:
            raise CapExceeded(f"dense vector over 2^{self.n} entries", n=self.n)
        if dtype is None:
            dtype = np.int64 if all(isinstance(v, (int, np.integer)) for v in self._entries.values()) else float
        out = np.zeros(1 << self.n, dtype=dtype)
        for k, v in self._entries.items():
            out[k] = v
        return out

    def total(self):
        return sum(self._entries.values())

    def weighted_sum(self, weight) -> float:
        """``sum_A weight(|A|) * v_A``, e.g. for the cardinality identities."""
        return sum(weight(size(k)) * v for k, v in self._entries.items())


def delta(n: int, subset: int, value=1) -> SubsetVector:
    return SubsetVector.delta(n, subset, value)


def _lattice_axes(n: int):
    # axis k of the (2,)*n view addresses bit n-1-k
    return [(n - 1 - bit) for bit in range(n)]


def _dense_pass(values: np.ndarray, n: int, sign: int) -> np.ndarray:
    cube = values.reshape((2,) * n) if n else values.reshape(())
    for axis in _lattice_axes(n):
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[axis] = 0
        hi[axis] = 1
        cube[tuple(lo)] += sign * cube[tuple(hi)]
    return cube.reshape(-1)


def superset_sum(v: SubsetVector, n: int | None = None) -> SubsetVector:
    """Forward transform ``c_A = sum_{B >= A} v_B``."""
    n = v.n if n is None else n
    if n > config.MAX_DENSE:
        raise CapExceeded(f"superset transform over 2^{n} subsets (cap 2^{config.MAX_DENSE})", n=n)
    dense = _dense_pass(v.to_dense().copy(), n, +1)
    return SubsetVector.from_dense(dense, n)


def mobius_superset_inverse(v: SubsetVector, n: int | None = None) -> SubsetVector:
    """Inverse transform ``t_B = sum_{A >= B} (-1)^{|A \\ B|} v_A``.

    Computed as one subtraction pass per vertex over the dense ``2^n`` array,
    which factorises the alternating sum coordinate by coordinate.
    """
    n = v.n if n is None else n
    if n > config.MAX_DENSE:
        raise CapExceeded(f"Moebius transform over 2^{n} subsets (cap 2^{config.MAX_DENSE})", n=n)
    dense = _dense_pass(v.to_dense().copy(), n, -1)
    return SubsetVector.from_dense(dense, n)


def binom2(k: int) -> int:
    return comb(k, 2)


def close(a: float, b: float, rel: float = 1e-9) -> bool:
    """Log-space comparison used by all ratio identities (both -inf counts as equal)."""
    if a == b:
        return True
    return isclose(a, b, rel_tol=rel, abs_tol=rel)
