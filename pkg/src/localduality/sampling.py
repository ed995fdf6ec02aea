"""Seeded random bihomogeneous presentations for property tests."""
from __future__ import annotations

import random
from typing import Dict, List

from .linalg import QQ
from .modules import BigradedPresentation, Vector, cyclic, direct_sum, free, make_presentation
from .rings import BiDegree, Ring


def random_presentation(rng: random.Random, m: int, d: int, max_gens: int = 3, max_rels: int = 3,
                        max_deg: int = 3, max_terms: int = 3, coeff: int = 3) -> BigradedPresentation:
    """A presentation with at most ``max_gens`` generators and ``max_rels`` relations.

    Generator shifts lie in ``[0, 1] x [0, 1]``; every relation entry has
    x- and t-degree at most ``max_deg``.  Coefficients are nonzero integers in
    ``[-coeff, coeff]``.
    """
    ring = Ring(m, d)
    ngens = rng.randint(1, max_gens)
    shifts = [BiDegree(rng.randint(0, 1) if m else 0, rng.randint(0, 1)) for _ in range(ngens)]
    rels: List[Vector] = []
    for _ in range(rng.randint(1, max_rels)):
        for _attempt in range(20):
            base = rng.choice(shifts)
            deg = BiDegree(base.x + (rng.randint(0, max_deg) if m else 0), base.t + rng.randint(0, max_deg))
            vec: Vector = {}
            for i, s in enumerate(shifts):
                gap = deg - s
                if gap.x < 0 or gap.t < 0 or gap.x > max_deg or gap.t > max_deg:
                    continue
                monos = ring.monomials(gap)
                if not monos or rng.random() < 0.3:
                    continue
                for mono in rng.sample(monos, min(len(monos), rng.randint(1, max_terms))):
                    c = rng.choice([v for v in range(-coeff, coeff + 1) if v])
                    vec[(i, mono)] = QQ(c)
            if vec:
                rels.append(vec)
                break
    return make_presentation(ring, shifts, rels, "random")


def standard_modules(m: int, d: int) -> Dict[str, BigradedPresentation]:
    """``S``, ``S/(t1)``, ``S/(x1)`` and ``S/(x1, t1) + S`` over ``Ring(m, d)`` (m, d >= 1)."""
    ring = Ring(m, d)
    return {
        "S": free(ring, name="S"),
        "S/(t1)": cyclic(ring, "t1", name="S/(t1)"),
        "S/(x1)": cyclic(ring, "x1", name="S/(x1)"),
        "S/(x1,t1)+S": direct_sum(cyclic(ring, "x1", "t1", name="S/(x1,t1)"), free(ring, name="S")),
    }


def conormal_example() -> BigradedPresentation:
    """``S/(x1, t2)`` with ``m = d = 2``: Cohen-Macaulay, Ext concentrated in degree 2."""
    return cyclic(Ring(2, 2), "x1", "t2", name="S/(x1,t2)")
