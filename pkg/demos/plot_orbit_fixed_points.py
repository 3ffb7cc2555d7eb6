"""
Fixed points of a monotone map by orbit iteration
=================================================

Starting from a point below its image, repeated application climbs a chain
and stops at the least fixed point above the start.
"""

from posetfix import FinitePoset, MonotoneMap, enumerate_monotone_maps, orbit_fixed_point

d = FinitePoset.boolean_lattice(2)

# S -> S ∪ {a}
union_a = MonotoneMap(d, [1, 1, 3, 3])
rep = orbit_fixed_point(d, union_a, 0)
print("orbit:", rep.trace)
print("fixed points:", sorted(rep.fixed_point_set), "maximal:", sorted(rep.maximal_fixed_points))

# a longer climb on a chain
c5 = FinitePoset.chain(5)
shift = MonotoneMap(c5, [1, 2, 3, 4, 4])
print(orbit_fixed_point(c5, shift, 0).trace)

# how many monotone self-maps does the diamond have, out of 4**4 = 256?
print(sum(1 for _ in enumerate_monotone_maps(d)))
