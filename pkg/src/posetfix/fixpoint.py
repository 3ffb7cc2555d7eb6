"""Fixed points of monotone self-maps of finite posets.

A single monotone map ``T`` with a witness ``c ⪯ T(c)`` is handled by orbit
iteration: ``c, T(c), T(T(c)), ...`` climbs a chain and must stop after at most
``n - 1`` strict steps, landing on the least fixed point above ``c``.

For a commuting family the witness is closed under all maps. That closure
``J0`` is directed, so on a finite poset it has a maximum, and the maximum is
fixed by every map in the family. The transfinite enlargement of ``J0`` to a
maximal directed set, needed for infinite posets, is vacuous here and is not
computed.
"""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

from .errors import DomainError, InvariantError, PosetError
from .poset import (
    FinitePoset,
    enumerate_posets,
    greatest_element,
    is_directed,
    least_element,
    maximal_elements,
    load_poset,
    poset_from_dict,
)

MAP_BUDGET = 100_000


def check_monotone(p: FinitePoset, images: Sequence[int]) -> bool:
    images = _validate_images(p, images)
    rel = p._rel
    return all(
        rel[images[x]][images[y]] for x in range(p.n) for y in range(p.n) if rel[x][y]
    )


def _validate_images(p: FinitePoset, images) -> tuple[int, ...]:
    images = tuple(images)
    if len(images) != p.n:
        raise PosetError(f"map has {len(images)} images, poset has {p.n} elements")
    return tuple(p.check_index(v) for v in images)


class MonotoneMap:
    """A self-map of a finite poset given by its table of images.

    Monotonicity is checked on construction unless ``check=False``; the
    unchecked form exists so the in-loop assertions of the algorithms can be
    exercised.
    """

    __slots__ = ("poset", "images")

    def __init__(self, poset: FinitePoset, images: Sequence[int], check: bool = True):
        self.poset = poset
        self.images = _validate_images(poset, images)
        if check and not check_monotone(poset, self.images):
            raise DomainError("monotone", f"images {list(self.images)}")

    @classmethod
    def identity(cls, poset: FinitePoset) -> "MonotoneMap":
        return cls(poset, range(poset.n))

    @classmethod
    def constant(cls, poset: FinitePoset, value: int) -> "MonotoneMap":
        return cls(poset, [value] * poset.n)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ other``."""
        return MonotoneMap(self.poset, [self.images[v] for v in other.images], check=False)

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return self.poset == other.poset and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"MonotoneMap({list(self.images)})"


class MapFamily:
    """Nonempty list of monotone maps on one poset.

    Commutativity is not enforced on construction; call :func:`check_commuting`
    (the family algorithms do so themselves).
    """

    def __init__(self, maps: Sequence[MonotoneMap]):
        maps = list(maps)
        if not maps:
            raise PosetError("a map family must be nonempty")
        poset = maps[0].poset
        for i, t in enumerate(maps):
            if t.poset != poset:
                raise PosetError(f"map {i} is defined on a different poset")
        self.maps = maps
        self.poset = poset

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def check_commuting(family: MapFamily) -> bool:
    maps = family.maps
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            a, b = maps[i].images, maps[j].images
            if any(a[b[x]] != b[a[x]] for x in range(family.poset.n)):
                return False
    return True


@dataclass
class FixedPointReport:
    witness: int
    trace: list[int]
    result: int
    fixed_point_set: frozenset
    maximal_fixed_points: frozenset
    steps: int = 0

    def to_dict(self) -> dict:
        return {
            "witness": self.witness,
            "trace": list(self.trace),
            "result": self.result,
            "steps": self.steps,
            "fixed_point_set": sorted(self.fixed_point_set),
            "maximal_fixed_points": sorted(self.maximal_fixed_points),
        }


def fixed_point_set(p: FinitePoset, t: MonotoneMap) -> frozenset:
    return frozenset(x for x in p.elements if t.images[x] == x)


def orbit_fixed_point(p: FinitePoset, t: MonotoneMap, c: int) -> FixedPointReport:
    """Iterate ``t`` from a witness ``c ⪯ t(c)`` until it stabilizes."""
    c = p.check_index(c)
    rel = p._rel
    if not rel[c][t.images[c]]:
        raise DomainError("witness", f"c={c}, T(c)={t.images[c]}")
    trace = [c]
    x = c
    for _ in range(p.n + 1):
        y = t.images[x]
        trace.append(y)
        if y == x:
            fix = fixed_point_set(p, t)
            return FixedPointReport(c, trace, x, fix, maximal_elements(p, fix), len(trace) - 2)
        if not rel[x][y]:
            raise InvariantError(f"orbit decreased: T({x}) = {y} is not above {x}")
        x = y
    raise InvariantError(f"orbit from {c} did not stabilize within {p.n + 1} steps")


def family_closure(family: MapFamily, c: int) -> frozenset:
    """Smallest set containing ``c`` and closed under every map of the family."""
    return frozenset(_closure_order(family, c))


def _closure_order(family: MapFamily, c: int) -> list[int]:
    p = family.poset
    c = p.check_index(c)
    rel = p._rel
    for i, t in enumerate(family.maps):
        if not rel[c][t.images[c]]:
            raise DomainError("witness", f"map {i}: c={c}, T(c)={t.images[c]}")
    seen = {c}
    order = [c]
    queue = deque([c])
    while queue:
        x = queue.popleft()
        for t in family.maps:
            y = t.images[x]
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    for x in order:
        for i, t in enumerate(family.maps):
            if not rel[x][t.images[x]]:
                raise InvariantError(f"closure element {x} not below its image under map {i}")
    if not is_directed(p, seen):
        raise InvariantError(f"closure {sorted(seen)} is not directed")
    return order


def common_fixed_point(family: MapFamily, c: int) -> FixedPointReport:
    """Common fixed point of a commuting family as the maximum of ``J0``."""
    if not check_commuting(family):
        raise DomainError("commuting")
    p = family.poset
    order = _closure_order(family, c)
    s = greatest_element(p, order)
    if s is None:
        raise InvariantError(f"closure {sorted(order)} has no maximum")
    for i, t in enumerate(family.maps):
        if t.images[s] != s:
            raise InvariantError(f"closure maximum {s} is moved by map {i}")
    common = common_fixed_point_set(family)
    return FixedPointReport(p.check_index(c), order, s, common, maximal_elements(p, common))


def common_fixed_point_set(family: MapFamily) -> frozenset:
    out = frozenset(family.poset.elements)
    for t in family.maps:
        out &= fixed_point_set(family.poset, t)
    return out


def enumerate_monotone_maps(p: FinitePoset, budget: int = MAP_BUDGET) -> Iterator[MonotoneMap]:
    """Yield every monotone self-map of ``p`` in lexicographic order of images."""
    n = p.n
    if n ** n > budget:
        raise ValueError(f"{n}^{n} candidate maps exceed the budget {budget}")
    rel = p._rel
    images = [0] * n

    def extend(x):
        if x == n:
            yield MonotoneMap(p, images, check=False)
            return
        for v in range(n):
            if all(
                (not rel[y][x] or rel[images[y]][v]) and (not rel[x][y] or rel[v][images[y]])
                for y in range(x)
            ):
                images[x] = v
                yield from extend(x + 1)

    yield from extend(0)


@dataclass
class VerificationReport:
    n: int
    posets: int = 0
    cases: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"n": self.n, "posets": self.posets, "cases": self.cases, "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_orbit_case(p, t, c) -> str | None:
    fix = fixed_point_set(p, t)
    try:
        rep = orbit_fixed_point(p, t, c)
    except (DomainError, InvariantError) as exc:
        return f"orbit raised {exc}"
    if rep.steps > p.n:
        return f"orbit took {rep.steps} steps"
    above = [q for q in fix if p._rel[c][q]]
    if rep.result != least_element(p, above):
        return f"orbit result {rep.result} is not the least fixed point above c"
    if not maximal_elements(p, above) or not maximal_elements(p, fix):
        return "fixed point set has no maximal element"
    return None


def _check_family_case(p, family, c) -> str | None:
    try:
        rep = common_fixed_point(family, c)
    except (DomainError, InvariantError) as exc:
        return f"common_fixed_point raised {exc}"
    brute = frozenset(x for x in p.elements if all(t.images[x] == x for t in family.maps))
    if rep.result not in brute:
        return f"result {rep.result} is not a common fixed point"
    if not maximal_elements(p, brute):
        return "common fixed point set has no maximal element"
    return None


def _common_witnesses(p, maps):
    return [c for c in p.elements if all(p._rel[c][t.images[c]] for t in maps)]


def verify_theorems(
    n_max: int,
    exhaustive_pairs_up_to: int = 3,
    pair_samples: int = 0,
    seed: int = 0,
    posets: Sequence[FinitePoset] | None = None,
) -> VerificationReport:
    """Exhaustively check orbit iteration and the family construction.

    For every poset of size ``<= n_max``, every monotone map and every
    witness, the orbit result is compared against the brute-force least fixed
    point above the witness. Commuting pairs with a common witness are
    checked exhaustively up to ``exhaustive_pairs_up_to`` elements; for larger
    posets ``pair_samples`` random commuting pairs are drawn per size. Failures
    are collected, never raised.
    """
    if n_max > 4:
        raise ValueError("full map enumeration is limited to n_max <= 4")
    report = VerificationReport(n=n_max)
    rng = random.Random(seed)
    sizes = range(1, n_max + 1)
    for n in sizes:
        pool = list(enumerate_posets(n)) if posets is None else [q for q in posets if q.n == n]
        if not pool:
            continue
        maps_of = {}
        for p in pool:
            report.posets += 1
            maps = list(enumerate_monotone_maps(p))
            maps_of[p] = maps
            for t in maps:
                for c in _common_witnesses(p, [t]):
                    report.cases += 1
                    err = _check_orbit_case(p, t, c)
                    if err:
                        report.failures.append(
                            {"kind": "orbit", "covers": p.covers(), "map": list(t.images), "c": c, "error": err}
                        )
            if n <= exhaustive_pairs_up_to:
                for t1, t2 in product(maps, repeat=2):
                    if check_commuting(MapFamily([t1, t2])):
                        _record_pair(report, p, t1, t2, _common_witnesses(p, [t1, t2]))
        if n > exhaustive_pairs_up_to and pair_samples:
            partners = {}

            def draw():
                while True:
                    p = rng.choice(pool)
                    i = rng.randrange(len(maps_of[p]))
                    if (p, i) not in partners:
                        t1 = maps_of[p][i]
                        partners[p, i] = [
                            t2
                            for t2 in maps_of[p]
                            if check_commuting(MapFamily([t1, t2])) and _common_witnesses(p, [t1, t2])
                        ]
                    if partners[p, i]:
                        return p, maps_of[p][i], rng.choice(partners[p, i])

            for _ in range(pair_samples):
                p, t1, t2 = draw()
                c = rng.choice(_common_witnesses(p, [t1, t2]))
                _record_pair(report, p, t1, t2, witnesses=[c], kind="family-sampled")
    return report


def _record_pair(report, p, t1, t2, witnesses, kind="family"):
    family = MapFamily([t1, t2])
    for c in witnesses:
        report.cases += 1
        err = _check_family_case(p, family, c)
        if err:
            report.failures.append(
                {"kind": kind, "covers": p.covers(), "maps": [list(t1.images), list(t2.images)], "c": c, "error": err}
            )


def map_from_dict(data: dict, poset: FinitePoset | None = None, base_dir=".") -> MonotoneMap:
    """Load ``{"images": [...], "poset": ...}``.

    ``poset`` may be an inline poset document or a path to one, resolved
    against ``base_dir``. An explicit ``poset`` argument is used when the
    document has none.
    """
    if not isinstance(data, dict) or "images" not in data:
        raise PosetError("map document must be an object with key 'images'")
    ref = data.get("poset")
    if isinstance(ref, dict):
        poset = poset_from_dict(ref)
    elif isinstance(ref, str):
        poset = load_poset(Path(base_dir) / ref)
    if poset is None:
        raise PosetError("map document has no poset and none was supplied")
    images = data["images"]
    if not isinstance(images, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in images):
        raise PosetError("'images' must be a list of integers")
    return MonotoneMap(poset, images)
