"""
Deforming a conic in the plane
==============================

First-order deformations of V(X0 X1 + X2^2) computed as gluing data,
as sections of the normal sheaf, and through the Thom-Whitney DGLA of the
inclusion of logarithmic fields. Then every class is lifted to second order.
"""

from dgdef import (chi_bisemicosimplicial, equation_level_lift, first_order_datum, functor_crosscheck,
                   hilb_tangent, lift_gluing, normal_directions, normal_sheaf_h0, parse_subscheme,
                   tangent_classes, tw_orders_coincide)

Z = parse_subscheme("X0*X1 + X2**2", 2)
print(Z.degree, Z.coordinate_change)

print(hilb_tangent(Z, 0), normal_sheaf_h0(Z, 0))

# the four routes
print(functor_crosscheck(Z, 0).values)

# rows first, columns first, triangle
B = chi_bisemicosimplicial(Z, 0)
rep = tw_orders_coincide(B, 1)
print(rep.ok, rep.dims, rep.pairs_checked)

classes = tangent_classes(Z, 0)
for fields in classes:
    lift = lift_gluing(first_order_datum(Z, fields), 3, 0)
    print(lift.ok, lift.window)

# the same, starting from equations F + t G
for G in normal_directions(Z):
    eq = equation_level_lift(Z, G)
    print(G, eq.window, lift_gluing(eq.first, 3, eq.window).ok)
