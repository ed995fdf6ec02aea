"""A walk through the module S/(x1) with one base and one fibre variable.

Prints its dimension table, the dual module Ext^1(G, omega_S), the local
cohomology along t = 0, and the weight at which G is self-dual.

    python demos/hypersurface_walkthrough.py
"""
from localduality import BiDegree, Ring, cm_check, cm_dual, cyclic, hilbert_table, local_cohomology_table, selfdual_scan
from localduality.cech import slice_dims
from localduality.report import render_table

xs, ts = range(-2, 3), range(-3, 4)


def show(title, table):
    grid = {(d.x, d.t): v for d, v in table.items()}
    print(render_table(grid, xs, ts, title))
    print()


G = cyclic(Ring(1, 1), "x1")
show("dim G", hilbert_table(G, xs, ts))

# the only nonzero Ext sits in degree d = 1, so G is Cohen-Macaulay
res = cm_check(G)
print("Ext nonzero in degrees", res.nonzero)
Ghat = cm_dual(G)
print("dual generated at", Ghat.shifts)
show("dim Ghat", hilbert_table(Ghat, xs, ts))

for i in (0, 1):
    tab = local_cohomology_table(G, i, xs, ts)
    show(f"H^{i} along t = 0", tab.entries)

# the four-term sequence 0 -> H^0 -> G -> Gamma_* -> H^1 -> 0, slice by slice
print(" k   H0  G  Gamma  H1")
for k in ts:
    sd = slice_dims(G, BiDegree(0, k))
    print(f"{k:2d}  {sd.h[0]:3d} {sd.g:2d} {sd.gamma[0]:5d} {sd.h[1]:3d}")
print()

scan = selfdual_scan(G, range(-3, 6), xs, ts)
print("self-dual at w =", scan.matches)
