"""Finite partially ordered sets, order intervals, directed sets and suprema.

Elements of a poset on ``n`` points are the integers ``0..n-1``. The order
relation is stored as its full reflexive-transitive closure, so every
``leq`` query is a table lookup.

Only two interval shapes exist here: the up-set ``[a, ->)`` and the closed
interval ``[a, b] = [a, ->) ∩ (<-, b]``. The down-set ``(<-, b]`` appears only
as the upper filter inside :class:`Closed`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvariantError, PosetError

MAX_ENUMERATION_SIZE = 5


class FinitePoset:
    """Immutable finite poset on ``range(n)``.

    Parameters
    ----------
    leq : array_like of bool, shape (n, n)
        ``leq[i, j]`` is true iff ``i ⪯ j``. Must already be a partial order
        (reflexive, antisymmetric, transitive); use :meth:`from_covers` to
        build one from generating pairs.
    labels : sequence of str, optional
    """

    __slots__ = ("n", "labels", "_matrix", "_rel")

    def __init__(self, leq, labels: Sequence[str] | None = None):
        m = np.array(leq, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PosetError(f"relation must be a square matrix, got shape {m.shape}")
        n = m.shape[0]
        if labels is not None and len(labels) != n:
            raise PosetError(f"expected {n} labels, got {len(labels)}")
        if not m.diagonal().all():
            x = int(np.flatnonzero(~m.diagonal())[0])
            raise PosetError(f"relation is not reflexive at {x}")
        both = m & m.T
        np.fill_diagonal(both, False)
        if both.any():
            x, y = map(int, np.argwhere(both)[0])
            raise PosetError(f"relation is not antisymmetric: {x} ⪯ {y} and {y} ⪯ {x}")
        # boolean matrix product: (m @ m)[i, k] iff some j with i ⪯ j ⪯ k
        composed = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if (composed & ~m).any():
            x, z = map(int, np.argwhere(composed & ~m)[0])
            raise PosetError(f"relation is not transitive: {x} ⪯ ... ⪯ {z} but not {x} ⪯ {z}")
        m.flags.writeable = False
        self.n = n
        self.labels = tuple(labels) if labels is not None else None
        self._matrix = m
        self._rel = tuple(tuple(bool(v) for v in row) for row in m)

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[Sequence[int]], labels=None) -> "FinitePoset":
        """Build the poset generated by pairs ``(i, j)`` meaning ``i ⪯ j``.

        Raises :class:`PosetError` naming one cycle if the pairs are cyclic.
        """
        if n < 0:
            raise PosetError(f"n must be nonnegative, got {n}")
        succ = [[] for _ in range(n)]
        for pair in covers:
            if len(pair) != 2:
                raise PosetError(f"cover entry must be a pair, got {pair!r}")
            i, j = (int(v) for v in pair)
            for v in (i, j):
                if not 0 <= v < n:
                    raise PosetError(f"cover index {v} out of range for n={n}")
            succ[i].append(j)
        cycle = _find_cycle(succ)
        if cycle is not None:
            raise PosetError("cover relation has a cycle: " + " -> ".join(map(str, cycle)))
        m = np.eye(n, dtype=bool)
        for i in range(n):
            m[i, succ[i]] = True
        for k in range(n):  # Warshall
            m |= np.outer(m[:, k], m[k, :])
        return cls(m, labels)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def antichain(cls, n: int) -> "FinitePoset":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def boolean_lattice(cls, k: int) -> "FinitePoset":
        """Subsets of a k-set ordered by inclusion; element ``i`` is the bitmask ``i``."""
        n = 1 << k
        m = np.array([[(i & j) == i for j in range(n)] for i in range(n)], dtype=bool)
        return cls(m)

    @property
    def matrix(self) -> np.ndarray:
        """Read-only boolean closure matrix."""
        return self._matrix

    @property
    def elements(self) -> range:
        return range(self.n)

    def check_index(self, x) -> int:
        if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
            raise PosetError(f"element must be an integer index, got {x!r}")
        if not 0 <= x < self.n:
            raise PosetError(f"element {x} out of range for poset of size {self.n}")
        return int(x)

    def leq(self, x: int, y: int) -> bool:
        return self._rel[self.check_index(x)][self.check_index(y)]

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def subset(self, members: Iterable[int]) -> frozenset:
        """Validate ``members`` as indices and return them as a frozenset."""
        return frozenset(self.check_index(x) for x in members)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(i, j)`` with ``j`` covering ``i``."""
        rel = self._rel
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i != j and rel[i][j] and not any(
                    k != i and k != j and rel[i][k] and rel[k][j] for k in range(self.n)
                ):
                    out.append((i, j))
        return out

    def to_dict(self) -> dict:
        d = {"n": self.n}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        d["covers"] = [list(c) for c in self.covers()]
        return d

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self._rel == other._rel

    def __hash__(self):
        return hash(self._rel)

    def __repr__(self):
        return f"FinitePoset(n={self.n}, covers={self.covers()})"


def _find_cycle(succ: list[list[int]]) -> list[int] | None:
    color = [0] * len(succ)  # 0 new, 1 on stack, 2 done
    for root in range(len(succ)):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                color[node] = 2
            elif color[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif color[nxt] == 0:
                color[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(succ[nxt])))
    return None


@dataclass(frozen=True)
class UpSet:
    """The interval ``[a, ->)``."""

    a: int


@dataclass(frozen=True)
class Closed:
    """The interval ``[a, b]``; empty unless ``a ⪯ b``."""

    a: int
    b: int


OrderInterval = UpSet | Closed


def interval_members(p: FinitePoset, interval: OrderInterval) -> frozenset:
    if isinstance(interval, UpSet):
        a = p.check_index(interval.a)
        return frozenset(x for x in p.elements if p._rel[a][x])
    if isinstance(interval, Closed):
        a, b = p.check_index(interval.a), p.check_index(interval.b)
        return frozenset(x for x in p.elements if p._rel[a][x] and p._rel[x][b])
    raise TypeError(f"not an order interval: {interval!r}")


def intersect_family(p: FinitePoset, family: Iterable[OrderInterval]) -> frozenset:
    """Intersection of the member sets; the empty family gives the ground set."""
    out = frozenset(p.elements)
    for interval in family:
        out &= interval_members(p, interval)
    return out


def has_fip(p: FinitePoset, family: Sequence[OrderInterval]) -> bool:
    """Finite intersection property of a finite family of intervals.

    For a finite family the whole family is one of its finite subfamilies, so
    the property is equivalent to the total intersection being nonempty.
    """
    return bool(intersect_family(p, family))


def is_directed(p: FinitePoset, j: Iterable[int]) -> bool:
    """True iff every pair of ``j`` has an upper bound inside ``j``.

    In a finite poset the pairwise condition is equivalent to every finite
    nonempty subset having an upper bound in ``j``. The empty set counts as
    directed.
    """
    members = sorted(p.subset(j))
    rel = p._rel
    for x, y in combinations(members, 2):
        if not any(rel[x][u] and rel[y][u] for u in members):
            return False
    return True


def upper_bounds(p: FinitePoset, j: Iterable[int]) -> frozenset:
    members = p.subset(j)
    rel = p._rel
    return frozenset(u for u in p.elements if all(rel[x][u] for x in members))


def least_element(p: FinitePoset, s: Iterable[int]) -> int | None:
    members = p.subset(s)
    rel = p._rel
    for x in members:
        if all(rel[x][y] for y in members):
            return x
    return None


def greatest_element(p: FinitePoset, s: Iterable[int]) -> int | None:
    members = p.subset(s)
    rel = p._rel
    for x in members:
        if all(rel[y][x] for y in members):
            return x
    return None


def supremum(p: FinitePoset, j: Iterable[int]) -> int | None:
    """Least upper bound of ``j``, or ``None`` when it does not exist."""
    return least_element(p, upper_bounds(p, j))


def supremum_via_lemma1(p: FinitePoset, j: Iterable[int]) -> int:
    """Supremum of a nonempty directed set by intersecting order intervals.

    First ``K``, the intersection of ``[x, ->)`` over ``x`` in ``j`` (the upper
    bounds), then ``K0``, the intersection of ``[x, z]`` over ``x`` in ``j`` and
    ``z`` in ``K``. ``K0`` consists of upper bounds of ``j`` lying below every
    upper bound, so it must be exactly the supremum.
    """
    members = p.subset(j)
    if not members:
        raise PosetError("supremum_via_lemma1 needs a nonempty set")
    if not is_directed(p, members):
        raise PosetError(f"set {sorted(members)} is not directed")
    k = intersect_family(p, [UpSet(x) for x in sorted(members)])
    if not k:
        raise InvariantError(f"K is empty for directed set {sorted(members)}")
    k0 = intersect_family(p, [Closed(x, z) for x in sorted(members) for z in sorted(k)])
    if len(k0) != 1:
        raise InvariantError(f"K0 = {sorted(k0)} is not a singleton")
    return next(iter(k0))


def maximal_elements(p: FinitePoset, j: Iterable[int]) -> frozenset:
    members = p.subset(j)
    rel = p._rel
    return frozenset(m for m in members if not any(x != m and rel[m][x] for x in members))


def enumerate_posets(n: int, cap: int = MAX_ENUMERATION_SIZE) -> Iterator[FinitePoset]:
    """Yield every labeled poset on ``range(n)`` exactly once.

    Posets on ``k + 1`` points are grown from posets on ``k`` points by
    choosing a down-closed set below and an up-closed set above the new
    point, every member below being ⪯ every member above. The order of the
    stream is deterministic.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    for rel in _grow(n):
        yield FinitePoset(rel)


def _grow(n: int) -> Iterator[np.ndarray]:
    if n == 0:
        yield np.zeros((0, 0), dtype=bool)
        return
    for base in _grow(n - 1):
        k = n - 1
        subsets = [frozenset(c) for r in range(k + 1) for c in combinations(range(k), r)]
        downs = [d for d in subsets if all(base[y, x] <= (y in d) for x in d for y in range(k))]
        ups = [u for u in subsets if all(base[x, y] <= (y in u) for x in u for y in range(k))]
        for d in downs:
            for u in ups:
                if d & u or not all(base[x, y] for x in d for y in u):
                    continue
                rel = np.zeros((n, n), dtype=bool)
                rel[:k, :k] = base
                rel[k, k] = True
                rel[list(d), k] = True
                rel[k, list(u)] = True
                yield rel


def poset_from_dict(data: dict) -> FinitePoset:
    """Load the ``{"n", "labels"?, "covers"}`` JSON schema."""
    if not isinstance(data, dict) or "n" not in data:
        raise PosetError("poset document must be an object with key 'n'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise PosetError(f"'n' must be an integer, got {n!r}")
    covers = data.get("covers", [])
    if not isinstance(covers, list):
        raise PosetError("'covers' must be a list of pairs")
    return FinitePoset.from_covers(n, covers, data.get("labels"))


def load_poset(path: str | Path) -> FinitePoset:
    with open(path) as fh:
        return poset_from_dict(json.load(fh))
