"""The graded de Rham complex of a few small modules.

For free S the complex resolves the top forms, so the only cohomology is
in degree 0 at t-degree -d.  For S/(x1) and S/(t1) we check the vanishing
bound, the Euler identity against the dual, and exactness of the slices
past m_bound - n.

    python demos/de_rham_tour.py
"""
from localduality import BiDegree, Ring, cyclic, free
from localduality.derham import DRComplex, compute_m_bound, e1_table, verify_der3, verify_der4_euler, verify_final_prop

for d in (1, 2, 3):
    dr = DRComplex(free(Ring(0, d)))
    row = {k: [dr.cohomology(j, BiDegree(0, k)) for j in dr.degrees()] for k in range(-d - 1, 1)}
    print(f"DR(S), d={d}:", row)
print()

R = Ring(1, 1)
for name, G, w in [("S/(x1)", cyclic(R, "x1"), 2), ("S/(t1)", cyclic(R, "t1"), 1)]:
    xs, ts = range(0, 3), range(-3, 4)
    der3 = verify_der3(G, xs, ts)
    der4 = verify_der4_euler(G, xs, ts)
    m_bound, n = compute_m_bound(G), w - G.ring.d
    final = verify_final_prop(G, m_bound, n, xs, ts)
    table, e1 = e1_table(G, w, xs, ts)
    print(name)
    print("  vanishing bounds B0 per x-degree:", der3.tables["der3.B0"])
    print("  Euler identity against the dual:", "pass" if der4.passed else "FAIL")
    print(f"  slices exact for k >= {m_bound - n}:", "pass" if final.passed else "FAIL")
    print(f"  E1 terms at w={w} (x-offset {table.x_offset}):", "pass" if e1.passed else "FAIL",
          f"{len(table.entries)} nonzero entries")
