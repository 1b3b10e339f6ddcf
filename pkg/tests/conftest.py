import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from dgdef.dgla import finite_dgla  # noqa: E402

settings.register_profile("dgdef", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dgdef")


def sl2():
    return finite_dgla({"e": 0, "f": 0, "h": 0},
                       {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}, name="sl2")


def heisenberg():
    return finite_dgla({"e": 0, "f": 0, "z": 0}, {("e", "f"): {"z": 1}}, name="heis")


def upper_triangular(n):
    """Strictly upper triangular n x n matrices under the commutator."""
    names = [(i, j) for i in range(n) for j in range(i + 1, n)]
    brackets = {}
    for a in names:
        for b in names:
            out = {}
            if a[1] == b[0]:
                out[(a[0], b[1])] = out.get((a[0], b[1]), 0) + 1
            if b[1] == a[0]:
                out[(b[0], a[1])] = out.get((b[0], a[1]), 0) - 1
            if out:
                brackets[a, b] = out
    return finite_dgla({a: 0 for a in names}, brackets, name=f"n{n}")


def uv():
    """u in degree 1, v in degree 2, du = 0, [u,u] = v."""
    return finite_dgla({"u": 1, "v": 2}, {("u", "u"): {"v": 1}}, name="uv")


def sl2_forms(names="efh"):
    """sl2 ⊗ Q[t, dt]/(t², t dt): degree 0 is sl2⊗{1,t}, degree 1 is sl2⊗dt, d(x⊗t) = x⊗dt.

    ``names`` picks a subalgebra (``"eh"`` is the Borel).
    """
    base = {x: 0 for x in names}
    table = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
    full = dict(table)
    for (a, b), v in table.items():
        full[b, a] = {k: -c for k, c in v.items()}
    prod = {("1", "1"): "1", ("1", "t"): "t", ("t", "1"): "t", ("1", "dt"): "dt", ("dt", "1"): "dt"}
    deg = {"1": 0, "t": 0, "dt": 1}
    degrees = {(x, s): deg[s] for x in base for s in deg}
    brackets = {}
    for (x, s), _ in degrees.items():
        for (y, r), _ in degrees.items():
            if (s, r) in prod and (x, y) in full:
                if any(k not in base for k in full[x, y]):
                    raise ValueError("not a subalgebra")
                brackets[(x, s), (y, r)] = {(k, prod[s, r]): c for k, c in full[x, y].items()}
    differential = {(x, "t"): {(x, "dt"): 1} for x in base}
    return finite_dgla(degrees, brackets, differential, name=f"{names}⊗B")


@pytest.fixture
def frac():
    return Fraction
