"""S/(x1, t1) + S is not Cohen-Macaulay: Ext lives in degrees 0 and 2.

There is no single dual module, but the alternating sums still agree: the
graded duals of all Ext groups on one side, local cohomology on the other.

    python demos/non_cm_euler.py
"""
from localduality import Ring, cm_check, cyclic, direct_sum, free
from localduality.verify import cmd_verify_duality, default_window

R = Ring(1, 1)
G = direct_sum(cyclic(R, "x1", "t1"), free(R))
print("Ext nonzero in degrees", cm_check(G).nonzero)

window = default_window(G)
rep = cmd_verify_duality(G, window)
print(rep.summary())
print()
print(" bidegree   Ext side  Cech side")
for r in sorted(rep.records, key=lambda r: (r.bidegree[0], r.bidegree[1]))[:12]:
    print(f" {str(r.bidegree):9s} {r.lhs:9d} {r.rhs:10d}")
