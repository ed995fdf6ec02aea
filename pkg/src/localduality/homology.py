"""Ext into the canonical module, Cohen-Macaulay tests, graded duals, self-duality.

Conventions: ``omega_S`` is the rank-one free module with generator in
bidegree ``(x_shift, d)``, i.e. ``S(-d)`` with an optional x-twist.
``Hom(S(gen at s), omega)`` is free on one generator in degree
``omega - s``.  Over ``A`` the same rule with ``omega = (0, 0)`` turns a
generator in x-degree ``e`` into a dual generator in x-degree ``-e``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .groebner import FreeResolution, free_resolution, minimalize, prune_presentation, syzygy_module
from .linalg import ONE, Echelon
from .modules import (
    BigradedPresentation,
    FreeBigradedModule,
    ModuleMap,
    Term,
    Vector,
    make_presentation,
    reverse,
    shift,
    t_slice,
)
from .rings import BiDegree, Ring, mono_mul


class ResolutionTooShortError(ValueError):
    """The resolution stops before the stage an Ext computation needs."""


class NotCohenMacaulayError(ValueError):
    def __init__(self, witness: "CMWitness"):
        self.witness = witness
        super().__init__(f"module is not Cohen-Macaulay: Ext^{witness.q} is nonzero at {witness.bidegree}")


@dataclass(frozen=True)
class OmegaS:
    """``omega_S = S(-d)`` with an x-shift for the (trivialised) canonical sheaf of the base."""

    d: int
    x_shift: int = 0

    @property
    def degree(self) -> BiDegree:
        return BiDegree(self.x_shift, self.d)


# -- Hom complexes -------------------------------------------------------


def dual_module(F: FreeBigradedModule, omega: BiDegree) -> FreeBigradedModule:
    return FreeBigradedModule(tuple(omega - s for s in F.shifts))


def transpose(phi: ModuleMap, omega: BiDegree) -> ModuleMap:
    """``Hom(phi, omega)``: the dual of ``phi: F -> G`` as a map ``G* -> F*``."""
    cols: List[Vector] = [dict() for _ in range(phi.target.rank)]
    for i, col in enumerate(phi.columns):
        for (j, mu), c in col.items():
            cols[j][(i, mu)] = c
    return ModuleMap(phi.ring, dual_module(phi.target, omega), dual_module(phi.source, omega), tuple(cols))


@dataclass
class HomComplex:
    """``Hom(F_., omega)``: terms ``H^q = F_q*`` and differentials ``delta_q: H^q -> H^{q+1}``."""

    ring: Ring
    terms: List[FreeBigradedModule]
    deltas: List[ModuleMap]
    complete: bool

    @classmethod
    def of(cls, R: FreeResolution, omega: BiDegree) -> "HomComplex":
        terms = [dual_module(F, omega) for F in R.modules]
        deltas = [transpose(phi, omega) for phi in R.maps]
        return cls(R.ring, terms, deltas, R.complete)

    def check_stage(self, q: int) -> None:
        if not self.complete and q + 1 > len(self.deltas):
            raise ResolutionTooShortError(f"Ext^{q} needs a resolution of length >= {q + 1}, have {len(self.deltas)}")

    def dim(self, q: int, deg: BiDegree) -> int:
        """Dimension of ``H^q(Hom(F_., omega))`` in bidegree ``deg``."""
        self.check_stage(q)
        if q < 0 or q >= len(self.terms):
            return 0
        basis = free_piece_basis(self.ring, self.terms[q], deg)
        if not basis:
            return 0
        out_rank = map_rank(self.deltas[q], deg) if q < len(self.deltas) else 0
        in_rank = map_rank(self.deltas[q - 1], deg) if q >= 1 else 0
        return len(basis) - out_rank - in_rank


def free_piece_basis(ring: Ring, F: FreeBigradedModule, deg: BiDegree) -> List[Term]:
    out = []
    for j, s in enumerate(F.shifts):
        for mono in ring.monomials(deg - s):
            out.append((j, mono))
    return out


def map_rank(phi: ModuleMap, deg: BiDegree) -> int:
    """Rank of the linear map ``phi`` restricted to the bidegree ``deg`` piece."""
    ring = phi.ring
    ech = Echelon()
    index: Dict[Term, int] = {}
    for j, mono in free_piece_basis(ring, phi.source, deg):
        img = {}
        for (pos, mu), c in phi.columns[j].items():
            t = (pos, mono_mul(mono, mu))
            img[index.setdefault(t, len(index))] = c
        ech.add(img)
    return ech.rank


# -- Ext over S ----------------------------------------------------------


@dataclass
class ExtResult:
    q: int
    module: BigradedPresentation

    def dim(self, deg: BiDegree) -> int:
        return self.module.dim(deg)

    def is_zero(self) -> bool:
        return self.module.generators.rank == 0


def minimal_resolution(G: BigradedPresentation) -> FreeResolution:
    """Minimal free resolution of ``G`` (cached on the presentation)."""
    cache = G._cache
    if "resolution" not in cache:
        cache["resolution"] = minimalize(free_resolution(G))
    return cache["resolution"]


def _resolve(G: BigradedPresentation, resolution: FreeResolution | None) -> FreeResolution:
    return resolution if resolution is not None else minimal_resolution(G)


def ext_dim(G: BigradedPresentation, q: int, deg: BiDegree, omega: OmegaS | None = None,
            resolution: FreeResolution | None = None) -> int:
    """``dim Ext^q_S(G, omega_S)`` in bidegree ``deg`` (piecewise linear algebra)."""
    omega = omega or OmegaS(G.ring.d)
    R = _resolve(G, resolution)
    return HomComplex.of(R, omega.degree).dim(q, deg)


def cohomology_presentation(ring: Ring, term: FreeBigradedModule, outgoing: ModuleMap | None,
                            incoming: ModuleMap | None, name: str = "") -> BigradedPresentation:
    """Present ``ker(outgoing) / im(incoming)`` where both maps touch the free module ``term``."""
    if outgoing is None or outgoing.target.rank == 0:
        kernel = [{(j, ring.one): ONE} for j in range(term.rank)]
    else:
        kernel = syzygy_module(ring, outgoing.target, outgoing.columns, term.shifts)
    if not kernel:
        return make_presentation(ring, [], [], name)
    kdegs = [term.vector_degree(ring, v) for v in kernel]
    image = [c for c in (incoming.columns if incoming is not None else ()) if c]
    idegs = [term.vector_degree(ring, v) for v in image]
    cols = list(kernel) + image
    syz = syzygy_module(ring, term, cols, kdegs + idegs, minimal=False)
    nk = len(kernel)
    rels = []
    for v in syz:
        r = {(j, mu): c for (j, mu), c in v.items() if j < nk}
        if r:
            rels.append(r)
    return prune_presentation(make_presentation(ring, kdegs, rels, name, canonical=False))


def ext_S(G: BigradedPresentation, q: int, omega: OmegaS | None = None,
          resolution: FreeResolution | None = None) -> ExtResult:
    """Presentation of ``Ext^q_S(G, omega_S)`` as a subquotient of the dual resolution."""
    if q < 0:
        raise ValueError("q must be non-negative")
    ring = G.ring
    omega = omega or OmegaS(ring.d)
    R = _resolve(G, resolution)
    H = HomComplex.of(R, omega.degree)
    H.check_stage(q)
    name = f"Ext^{q}({G.name})" if G.name else ""
    if q >= len(H.terms):
        return ExtResult(q, make_presentation(ring, [], [], name))
    out = H.deltas[q] if q < len(H.deltas) else None
    inc = H.deltas[q - 1] if q >= 1 else None
    return ExtResult(q, cohomology_presentation(ring, H.terms[q], out, inc, name))


@dataclass(frozen=True)
class CMWitness:
    q: int
    bidegree: BiDegree


@dataclass
class CMResult:
    is_cm: bool
    witness: Optional[CMWitness]
    nonzero: List[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.is_cm


def cm_check(G: BigradedPresentation, omega: OmegaS | None = None) -> CMResult:
    """Exact test that ``Ext^q_S(G, omega)`` vanishes for every ``q != d``.

    The zero module counts as Cohen-Macaulay (all Ext vanish).  The witness
    is the degree of the first surviving generator of the first nonzero Ext.
    """
    ring = G.ring
    R = _resolve(G, None)
    top = max(ring.nvars, R.length)
    nonzero = []
    witness = None
    for q in range(top + 1):
        E = ext_S(G, q, omega, R)
        if E.is_zero():
            continue
        nonzero.append(q)
        if q != ring.d and witness is None:
            witness = CMWitness(q, E.module.shifts[0])
    return CMResult(witness is None, witness, nonzero)


def cm_dual(G: BigradedPresentation, omega: OmegaS | None = None) -> BigradedPresentation:
    """``Ext^d_S(G, omega_S)``; refuses modules that are not Cohen-Macaulay."""
    cache = G._cache.setdefault("cm_dual", {})
    key = omega
    if key in cache:
        return cache[key]
    res = cm_check(G, omega)
    if not res.is_cm:
        raise NotCohenMacaulayError(res.witness)
    dual = ext_S(G, G.ring.d, omega).module
    cache[key] = dual
    return dual


# -- graded dual over A --------------------------------------------------


@dataclass
class DualTable:
    """``(i, (a, k)) -> dim Ext^i_A(G_{-k}, A)_a``."""

    entries: Dict[Tuple[int, BiDegree], int]

    def get(self, i: int, deg: BiDegree) -> int:
        return self.entries.get((i, deg), 0)

    def to_records(self) -> List[dict]:
        return [{"i": i, "x": d.x, "t": d.t, "dim": v}
                for (i, d), v in sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].t, kv[0][1].x))]


def _slice_hom(G: BigradedPresentation, k: int) -> HomComplex:
    """Hom complex computing ``Ext^._A(G_k, A)``, cached per t-degree."""
    cache = G._cache.setdefault("slice_hom", {})
    H = cache.get(k)
    if H is None:
        sl = t_slice(G, k)
        R = minimalize(free_resolution(sl, length=G.ring.m + 1))
        H = HomComplex.of(R, BiDegree(0, 0))
        cache[k] = H
    return H


def graded_dual_dim(G: BigradedPresentation, i: int, deg: BiDegree) -> int:
    """``dim D^i(G)_(a,k) = dim Ext^i_A(G_{-k}, A)_a``."""
    if i < 0 or i > G.ring.m:
        return 0
    return _slice_hom(G, -deg.t).dim(i, BiDegree(deg.x, 0))


def graded_dual(G: BigradedPresentation, i: int, xs: Iterable[int], ks: Iterable[int]) -> DualTable:
    ks = list(ks)
    return DualTable({(i, BiDegree(a, k)): graded_dual_dim(G, i, BiDegree(a, k)) for a in xs for k in ks})


# -- self-duality --------------------------------------------------------


@dataclass
class WeightFit:
    w: int
    x_offsets: List[int]
    mismatches: int  # best over x-offsets; 0 iff x_offsets is non-empty


@dataclass
class SelfDualReport:
    fits: List[WeightFit]
    matches: List[int]
    best: List[int]
    components: List["SelfDualReport"] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "matches": self.matches,
            "best": self.best,
            "fits": [{"w": f.w, "x_offsets": f.x_offsets, "mismatches": f.mismatches} for f in self.fits],
        }
        if self.components:
            out["components"] = [c.to_dict() for c in self.components]
        return out


def components(G: BigradedPresentation) -> List[BigradedPresentation]:
    """Split a presentation into block-diagonal summands (generators linked by relations)."""
    n = G.generators.rank
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for col in G.relations.columns:
        pos = sorted({p for p, _ in col})
        for p in pos[1:]:
            parent[find(p)] = find(pos[0])
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        remap = {g: n for n, g in enumerate(members)}
        cols = [{(remap[p], mu): c for (p, mu), c in col.items()} for col in G.relations.columns
                if col and next(iter(col))[0] in remap]
        out.append(make_presentation(G.ring, [G.shifts[g] for g in members], cols, canonical=False))
    return out


def _cover(xs: Sequence[int], ts: Sequence[int], shifts) -> Tuple[range, range]:
    xlo = min([min(xs)] + [s.x for s in shifts])
    tlo = min([min(ts)] + [s.t - 1 for s in shifts])
    thi = max([max(ts)] + [s.t + 1 for s in shifts])
    return range(xlo, max(xs) + 1), range(tlo, thi + 1)


def selfdual_scan(G: BigradedPresentation, w_range: Iterable[int], xs: Sequence[int], ts: Sequence[int],
                  x_offsets: Iterable[int] | None = None, split: bool = True) -> SelfDualReport:
    """Compare dimension tables of ``cm_dual(G)`` and ``shift(reverse(G), d - w)``.

    A weight ``w`` fits with x-offset ``c`` when ``dim Ghat_(a+c, b)`` equals
    ``dim G^r(d-w)_(a, b)`` over the window, and also with the roles swapped
    (so both supports are tested).  Direct sums are additionally scanned
    summand by summand.
    """
    d = G.ring.d
    dual = cm_dual(G)
    if x_offsets is None:
        span = 2 * (G.ring.m + 1) + max((abs(s.x) for s in G.shifts), default=0) + \
            max((abs(s.x) for s in G.relation_degrees), default=0)
        x_offsets = range(-span, span + 1)
    x_offsets = list(x_offsets)
    # each side is tested over a window that also covers its own generators
    xs_g, ts_g = _cover(xs, ts, G.shifts)
    xs_h, ts_h = _cover(xs, ts, dual.shifts)
    fits = []
    for w in w_range:
        H = shift(reverse(G), d - w)
        good = []
        best = None
        for c in x_offsets:
            bad = 0
            for a in xs_g:
                for b in ts_g:
                    if dual.dim(BiDegree(a + c, b)) != H.dim(BiDegree(a, b)):
                        bad += 1
            for a in xs_h:
                for b in ts_h:
                    if dual.dim(BiDegree(a, b)) != H.dim(BiDegree(a - c, b)):
                        bad += 1
            if bad == 0:
                good.append(c)
            best = bad if best is None else min(best, bad)
        fits.append(WeightFit(w, good, best or 0))
    matches = [f.w for f in fits if f.x_offsets]
    low = min((f.mismatches for f in fits), default=0)
    best_ws = matches or [f.w for f in fits if f.mismatches == low]
    report = SelfDualReport(fits, matches, best_ws)
    if split:
        parts = components(G)
        if len(parts) > 1:
            report.components = [selfdual_scan(P, [f.w for f in fits], xs, ts, x_offsets, split=False)
                                 for P in parts]
    return report
