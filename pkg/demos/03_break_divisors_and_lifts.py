# Break divisors give one assignment in degree g on every graph. Subdividing
# edges and lifting it gives a full set of orbit representatives upstairs.
import itertools

from jacstab import chipfiring as cf
from jacstab.assignments import expected_lift_size, lift_assignment, verify_lift_theorem
from jacstab.families import complete, dumbbell
from jacstab.graphs import graph_genus, subdivide
from jacstab.polarizations import break_divisors, ibd_assignment, ibd_polarization

g = dumbbell()
print("dumbbell genus", graph_genus(g))
print("break divisors on the full graph:", break_divisors(g, g.edge_ids))
phi = ibd_polarization(g)
print("phi_IBD =", [str(x) for x in phi.values])

k4 = complete(4)
sigma = ibd_assignment(k4)
print("K4: sigma has", len(sigma), "entries")

for m in [(1,) * 6, (2, 0, 1, 0, 2, 1), (0,) * 6]:
    sub = subdivide(k4, dict(zip(k4.edge_ids, m)))
    lifted = lift_assignment(sigma, sub)
    print(f"m={m}: {len(sub.result.vertices)} vertices, {len(lifted)} lifts,",
          f"c = {cf.complexity(sub.result)}, ok = {verify_lift_theorem(sigma, sub).passed}")

# the count formula holds for every m in {0,1,2}^E
bad = [m for m in itertools.product(range(3), repeat=6)
       if expected_lift_size(sigma, subdivide(k4, dict(zip(k4.edge_ids, m)))) !=
       cf.complexity(subdivide(k4, dict(zip(k4.edge_ids, m))).result)]
print("mismatches over 729 maps:", len(bad))
