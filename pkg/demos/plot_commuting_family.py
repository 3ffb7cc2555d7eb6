"""
Common fixed points of a commuting family
=========================================

Close the witness under every map, take the maximum of the closure, and
compare with the brute-force set of common fixed points.
"""

from posetfix import (
    FinitePoset, MapFamily, MonotoneMap, check_commuting, common_fixed_point,
    family_closure, verify_theorems,
)

d = FinitePoset.boolean_lattice(2)
fam = MapFamily([MonotoneMap(d, [1, 1, 3, 3]), MonotoneMap(d, [2, 3, 2, 3])])
print("commuting:", check_commuting(fam))
print("closure of 0:", sorted(family_closure(fam, 0)))

rep = common_fixed_point(fam, 0)
print("maximum of closure:", rep.result)
print("common fixed points:", sorted(rep.fixed_point_set))

# exhaustive check on all posets with at most 3 points, plus 500 random
# commuting pairs on 4 points
report = verify_theorems(4, pair_samples=500, seed=1)
print(report.to_dict())
