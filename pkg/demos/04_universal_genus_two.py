# Stable graphs of genus 2 and the assignments compatible with every contraction.
import math

from jacstab.graphs import spanning_trees
from jacstab.universal import (canonical_universal, enumerate_stable_graphs, first_vertex,
                               gcd_obstruction, has_separating_edge, universal_search,
                               vine_subsets)

cat = enumerate_stable_graphs(2, 0)
for i, obj in enumerate(cat.objects):
    print(i, obj, "separating edge" if has_separating_edge(obj) else "")

t, t_prime, c = vine_subsets(cat)
print("two-vertex loopless:", t, " without vertex swap:", t_prime, " one edge:", c)

for d in range(4):
    found = universal_search(2, 0, d, 6, cat=cat)
    print(f"d={d}: gcd(d-1, 2) = {math.gcd(d - 1, 2)}, obstructed = {gcd_obstruction(2, d)},",
          f"{len(found)} universal assignment(s)")
    if found:
        can = canonical_universal(cat, d)
        same = all(found[0].assignments[i].key() == can[i].key() for i in range(len(cat.objects)))
        print("   equals the canonical family:", same)

# the symmetric vine forces equal degrees on both sides, hence the parity condition
theta_idx = next(i for i, o in enumerate(cat.objects) if len(o.edges) == 3 and len(o.vertices) == 2)
obj = cat.objects[theta_idx]
tree = spanning_trees(obj)[0]
print("theta tree value at d=0:", canonical_universal(cat, 0)[theta_idx].fiber(tree))

# genus 3 for scale
cat3 = enumerate_stable_graphs(3, 0)
print("genus 3:", len(cat3.objects), "stable graphs,", sum(1 for _ in cat3.morphism_pairs()), "hom-sets")
