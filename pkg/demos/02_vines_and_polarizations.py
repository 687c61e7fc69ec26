# Two vertices joined by t edges: every stability assignment is a translate
# of one pattern, and each one comes from a polarization.
from jacstab.assignments import enumerate_assignments, is_stability_assignment
from jacstab.families import banana
from jacstab.polarizations import (Polarization, assignment_from_polarization, classify,
                                   is_nondegenerate, semistable_set, vine_polarization)

g = banana(3)
found = enumerate_assignments(g, 0, 3)
print(len(found), "degree-0 assignments with tree values in [-3, 3]")
for a in found[:3]:
    full = a.fiber(g.edge_ids)
    tree = a.fiber({"e1"})
    print("  top fiber", full, " tree fiber", tree)

# lam picks the first-vertex degree on each tree
lam = 1
phi = vine_polarization(3, 0, lam)
print("phi =", [str(x) for x in phi.values], "nondegenerate:", bool(is_nondegenerate(g, phi)))
a = assignment_from_polarization(g, phi)
print("semistable on the full graph:", semistable_set(g, phi, g.edge_ids))
print("valid assignment:", is_stability_assignment(a))
print("matches enumeration:", a.key() in {b.key() for b in found})

# walls: phi = (0, 0) on two edges is degenerate
g2 = banana(2)
print(classify(g2, Polarization(g2, (0, 0)), g2.edge_ids, (1, -1)))
print(is_nondegenerate(g2, Polarization(g2, (0, 0))))
