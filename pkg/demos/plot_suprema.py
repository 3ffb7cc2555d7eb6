"""
Suprema of directed sets by interval intersection
=================================================

Build the four-element diamond, intersect order intervals, and recover
suprema two ways: directly as the least upper bound, and by the two-stage
interval intersection.
"""

from posetfix import (
    Closed, FinitePoset, UpSet, enumerate_posets, has_fip, intersect_family,
    is_directed, supremum, supremum_via_lemma1,
)

# subsets of {a, b} under inclusion: 0 = {}, 1 = {a}, 2 = {b}, 3 = {a, b}
d = FinitePoset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)],
                            labels=["{}", "{a}", "{b}", "{a,b}"])
print(d)

# the up-sets of {a} and {b} meet only in the top
print(intersect_family(d, [UpSet(1), UpSet(2)]))
print(has_fip(d, [UpSet(1), UpSet(2)]))
print(intersect_family(d, [Closed(1, 2)]))   # {a} is not below {b}: empty

# {a}, {b} alone is not directed, adding the top fixes that
for j in [{1, 2}, {1, 2, 3}]:
    print(sorted(j), is_directed(d, j), supremum(d, j))
print(supremum_via_lemma1(d, {1, 2, 3}))

# every nonempty directed subset of every poset on 4 points
count = 0
for p in enumerate_posets(4):
    for mask in range(1, 16):
        j = {x for x in range(4) if mask >> x & 1}
        if is_directed(p, j):
            assert supremum_via_lemma1(p, j) == supremum(p, j)
            count += 1
print(count, "directed sets checked")
