"""
Maurer-Cartan elements and the gauge action
===========================================

A small DGLA, sl2 tensored with forms on the interval truncated at t dt,
and what happens to its Maurer-Cartan elements over Q[s]/(s^3).
"""

from fractions import Fraction

from dgdef import (bch, check_dgla_axioms, finite_dgla, gauge_action, is_maurer_cartan,
                   make_truncated_poly, nilpotent, zero_element)

# structure constants; x1 means x⊗1, xt means x⊗t, xd means x⊗dt
names = "efh"
table = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
full = dict(table)
full.update({(b, a): {k: -c for k, c in v.items()} for (a, b), v in table.items()})
prod = {("1", "1"): "1", ("1", "t"): "t", ("t", "1"): "t", ("1", "d"): "d", ("d", "1"): "d"}
degrees = {x + s: int(s == "d") for x in names for s in "1td"}
brackets = {}
for (x, y), v in full.items():
    for (s, r), q in prod.items():
        brackets[x + s, y + r] = {k + q: c for k, c in v.items()}
L = finite_dgla(degrees, brackets, {x + "t": {x + "d": 1} for x in names}, name="sl2⊗B")

print(L.dims())
print(check_dgla_axioms(L))

A = make_truncated_poly(3)
a = nilpotent(L, A, {(1,): {"et": 1}, (2,): {"f1": 1}}, 0)
b = nilpotent(L, A, {(1,): {"ht": Fraction(1, 2)}}, 0)

# e^a * 0 is always Maurer-Cartan
x = gauge_action(a, zero_element(L, A, 1))
print(x)
print(is_maurer_cartan(x))

# composing gauge transformations is the BCH product
lhs = gauge_action(b, gauge_action(a, x))
rhs = gauge_action(bch(b, a), x)
print(lhs == rhs)
print(bch(a, b))
