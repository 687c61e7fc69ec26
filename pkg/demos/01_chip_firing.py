# Chip-firing on small multigraphs: Laplacians, Jacobians, reduced divisors.
from jacstab import chipfiring as cf
from jacstab.families import complete, cycle, theta

k4 = complete(4)
print("K4 Laplacian:")
for row in cf.laplacian(k4):
    print("  ", row)

# Smith form of the reduced Laplacian gives the group structure
jac = cf.jacobian_group(k4)
print("J(K4) invariant factors:", jac.invariant_factors, "order", jac.order)
print("spanning trees of K4:", cf.complexity(k4, method="both"))

# firing v3 on a triangle moves two chips out of v3
c3 = cycle(3)
print("(1,1,-2) ~ 0 on the triangle?", cf.equivalent(c3, (1, 1, -2), (0, 0, 0)))
print("(1,-1,0) ~ 0 on the triangle?", cf.equivalent(c3, (1, -1, 0), (0, 0, 0)))

# every class has one v1-reduced representative
for d in [(3, 0, 0), (0, 3, 0), (1, 1, 1), (-2, 4, 1)]:
    print(d, "->", cf.reduce(c3, d))

# theta has 3 classes in each degree, one per spanning tree
print("theta classes of degree 0 in a box:", cf.class_count_in_box(theta(), 0, 3))
