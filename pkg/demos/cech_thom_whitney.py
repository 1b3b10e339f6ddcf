"""
Čech and Thom-Whitney models for tangent fields
===============================================

Vector fields on the standard cover of P1 and P2, totalized two ways.
The plain total complex and the Thom-Whitney DGLA have the same
cohomology; only the second one carries a bracket.
"""

from dgdef import LineBundleSheaf, ThetaSheaf, cech_lie, check_dgla_axioms, check_semicosimplicial, tot, tot_tw

S = cech_lie(ThetaSheaf(1), 1)
print(check_semicosimplicial(S))
print([V.dims() for V in S.levels])

# global fields on P1 are sl2, no H^1
print(tot(S).cohomology_dims())

for cap in (1, 2, 3):
    T = tot_tw(S, cap)
    print(cap, T.dims(), T.cohomology_dims())

print(check_dgla_axioms(tot_tw(S, 1)))

# an abelian example with H^1: O(-2) on P1
O = cech_lie(LineBundleSheaf(1, -2), 3)
print(tot(O).cohomology_dims(), tot_tw(O, 2).cohomology_dims())

# P2, window 0
S2 = cech_lie(ThetaSheaf(2), 0)
print(tot(S2).cohomology_dims(), tot_tw(S2, 1).cohomology_dims())
