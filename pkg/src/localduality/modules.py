"""Free bigraded modules, bihomogeneous maps, presentations and degree pieces.

A module element ("vector") is a dict ``{(position, monomial): coefficient}``.
Generator shifts are the bidegrees *of the generators*: the free module
``S(m)`` with ``S(m)_k = S_{m+k}`` has its generator in t-degree ``-m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from operator import add
from typing import Dict, Iterable, List, Sequence, Tuple

from .linalg import ONE, QQ, ZERO, Echelon, SparseVec, to_qq
from .rings import (
    BiDegree,
    Monomial,
    NotBihomogeneousError,
    Polynomial,
    Ring,
    RingMismatchError,
    mono_mul,
)

Term = Tuple[int, Monomial]
Vector = Dict[Term, QQ]


class SliceCutoffError(ValueError):
    """An induced relation of a t-slice lies above the requested x cutoff."""


# -- vectors -------------------------------------------------------------


def vec_axpy(acc: Vector, vec: Vector, coeff=ONE, mono: Monomial | None = None) -> Vector:
    """In place ``acc += coeff * mono * vec``; returns ``acc``."""
    if not coeff:
        return acc
    get = acc.get
    if mono is not None and not any(mono):
        mono = None
    for (pos, mu), c in vec.items():
        key = (pos, mu) if mono is None else (pos, tuple(map(add, mono, mu)))
        nc = get(key)
        nc = coeff * c if nc is None else nc + coeff * c
        if nc:
            acc[key] = nc
        else:
            del acc[key]
    return acc


def vec_scale(vec: Vector, coeff, mono: Monomial | None = None) -> Vector:
    coeff = to_qq(coeff)
    if not coeff:
        return {}
    if mono is None:
        return {k: c * coeff for k, c in vec.items()}
    return {(pos, mono_mul(mono, mu)): c * coeff for (pos, mu), c in vec.items()}


def vec_key(vec: Vector) -> tuple:
    return tuple(sorted(vec.items()))


@dataclass(frozen=True)
class FreeBigradedModule:
    shifts: Tuple[BiDegree, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(self.shifts))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def __len__(self) -> int:
        return len(self.shifts)

    def __add__(self, other: "FreeBigradedModule") -> "FreeBigradedModule":
        return FreeBigradedModule(self.shifts + other.shifts)

    def term_degree(self, ring: Ring, term: Term) -> BiDegree:
        pos, mono = term
        return self.shifts[pos] + ring.bidegree(mono)

    def vector_degree(self, ring: Ring, vec: Vector) -> BiDegree | None:
        degs = {self.term_degree(ring, t) for t in vec}
        if not degs:
            return None
        if len(degs) > 1:
            raise NotBihomogeneousError(f"vector mixes bidegrees {sorted(degs)}")
        return degs.pop()


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Bihomogeneous map ``source -> target`` stored column by column.

    Column ``j`` is the image of the ``j``-th source generator, a vector in the
    target, and has bidegree ``source.shifts[j]``.
    """

    ring: Ring
    source: FreeBigradedModule
    target: FreeBigradedModule
    columns: Tuple[Vector, ...]
    _key: tuple = field(default=None, repr=False)

    def __post_init__(self):
        cols = tuple(dict(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) != self.source.rank:
            raise ValueError(f"{len(cols)} columns for a source of rank {self.source.rank}")
        nv = self.ring.nvars
        for j, col in enumerate(cols):
            want = self.source.shifts[j]
            for (pos, mono), c in col.items():
                if not 0 <= pos < self.target.rank or len(mono) != nv:
                    raise RingMismatchError(f"column {j} has a term outside the target: {(pos, mono)}")
                got = self.target.shifts[pos] + self.ring.bidegree(mono)
                if got != want:
                    raise NotBihomogeneousError(
                        f"entry ({pos},{j}) term {mono} has bidegree {got - self.target.shifts[pos]},"
                        f" expected {want - self.target.shifts[pos]}"
                    )
        object.__setattr__(self, "_key", (self.ring, self.source, self.target, tuple(vec_key(c) for c in cols)))

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleMap) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @classmethod
    def from_rows(cls, ring: Ring, source: FreeBigradedModule, target: FreeBigradedModule,
                  rows: Sequence[Sequence[Polynomial]]) -> "ModuleMap":
        cols: List[Vector] = [dict() for _ in range(source.rank)]
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                for mono, c in entry.terms.items():
                    cols[j][(i, mono)] = c
        return cls(ring, source, target, tuple(cols))

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.ring, {mono: c for (pos, mono), c in self.columns[j].items() if pos == i})

    def rows(self) -> List[List[Polynomial]]:
        return [[self.entry(i, j) for j in range(self.source.rank)] for i in range(self.target.rank)]

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for (j, mu), c in vec.items():
            vec_axpy(out, self.columns[j], c, mu)
        return out

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        return ModuleMap(self.ring, other.source, self.target, tuple(self.apply(c) for c in other.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)


def zero_map(ring: Ring, source: FreeBigradedModule, target: FreeBigradedModule) -> ModuleMap:
    return ModuleMap(ring, source, target, tuple({} for _ in source.shifts))


@dataclass(frozen=True)
class DegreePiece:
    """The finite-dimensional space ``G_(a,b)`` as ``span(basis) / span(relations)``."""

    bidegree: BiDegree
    basis: Tuple[Term, ...]
    relations: Tuple[SparseVec, ...]
    echelon: Echelon = field(repr=False, compare=False)

    @property
    def index(self) -> Dict[Term, int]:
        idx = self.__dict__.get("_index")
        if idx is None:
            idx = {b: i for i, b in enumerate(self.basis)}
            object.__setattr__(self, "_index", idx)
        return idx

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def dim(self) -> int:
        return len(self.basis) - self.echelon.rank

    @property
    def quotient_matrix(self) -> List[SparseVec]:
        return list(self.relations)

    def coords(self, vec: Vector) -> SparseVec:
        idx = self.index
        return {idx[t]: c for t, c in vec.items()}


@dataclass(frozen=True, eq=False)
class BigradedPresentation:
    """``coker(relations: F1 -> F0)`` over ``ring``."""

    ring: Ring
    generators: FreeBigradedModule
    relations: ModuleMap
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.relations.target != self.generators:
            raise ValueError("relation map must land in the generator module")
        if self.relations.ring != self.ring:
            raise RingMismatchError("relation map over a different ring")

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedPresentation) and (self.ring, self.relations) == (other.ring, other.relations)

    def __hash__(self) -> int:
        return hash((self.ring, self.relations))

    @property
    def shifts(self) -> Tuple[BiDegree, ...]:
        return self.generators.shifts

    @property
    def relation_degrees(self) -> Tuple[BiDegree, ...]:
        return self.relations.source.shifts

    def piece(self, deg: BiDegree) -> DegreePiece:
        cache = self._cache.setdefault("piece", {})
        p = cache.get(deg)
        if p is None:
            p = _build_piece(self, deg)
            cache[deg] = p
        return p

    def dim(self, deg: BiDegree) -> int:
        return self.piece(deg).dim

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return (f"<BigradedPresentation{label} m={self.ring.m} d={self.ring.d} "
                f"gens={list(self.shifts)} rels={self.relations.source.rank}>")


def _build_piece(G: BigradedPresentation, deg: BiDegree) -> DegreePiece:
    ring = G.ring
    basis: List[Term] = []
    for i, s in enumerate(G.shifts):
        for mono in ring.monomials(deg - s):
            basis.append((i, mono))
    index = {b: n for n, b in enumerate(basis)}
    rels: List[SparseVec] = []
    for col, rdeg in zip(G.relations.columns, G.relation_degrees):
        if not col:
            continue
        for nu in ring.monomials(deg - rdeg):
            rels.append({index[(pos, mono_mul(nu, mu))]: c for (pos, mu), c in col.items()})
    return DegreePiece(deg, tuple(basis), tuple(rels), Echelon(rels))


def piece(G: BigradedPresentation, deg: BiDegree) -> DegreePiece:
    return G.piece(deg)


# -- constructors --------------------------------------------------------


def make_presentation(ring: Ring, shifts: Iterable, relations: Iterable[Vector], name: str = "",
                      canonical: bool = True) -> BigradedPresentation:
    """Build a presentation from generator shifts and relation vectors.

    Zero relations are dropped.  With ``canonical`` the generators and relations
    are sorted by (t, x)-degree, ties kept in input order.
    """
    shifts = [s if isinstance(s, BiDegree) else BiDegree(*s) for s in shifts]
    F0 = FreeBigradedModule(tuple(shifts))
    cols = [dict(v) for v in relations if v]
    degs = [F0.vector_degree(ring, v) for v in cols]
    if canonical:
        order = sorted(range(len(shifts)), key=lambda i: (shifts[i].t, shifts[i].x, i))
        perm = {old: new for new, old in enumerate(order)}
        shifts = [shifts[i] for i in order]
        F0 = FreeBigradedModule(tuple(shifts))
        cols = [{(perm[p], mu): c for (p, mu), c in v.items()} for v in cols]
        rorder = sorted(range(len(cols)), key=lambda j: (degs[j].t, degs[j].x, j))
        cols = [cols[j] for j in rorder]
        degs = [degs[j] for j in rorder]
    F1 = FreeBigradedModule(tuple(degs))
    return BigradedPresentation(ring, F0, ModuleMap(ring, F1, F0, tuple(cols)), name)


def from_polynomials(ring: Ring, shifts: Iterable, relations: Iterable[Sequence], name: str = "",
                     canonical: bool = True) -> BigradedPresentation:
    """Relations given as lists of polynomials (or strings), one entry per generator."""
    shifts = [s if isinstance(s, BiDegree) else BiDegree(*s) for s in shifts]
    vecs = []
    for rel in relations:
        if len(rel) != len(shifts):
            raise ValueError(f"relation has {len(rel)} entries for {len(shifts)} generators")
        vec: Vector = {}
        for i, entry in enumerate(rel):
            p = entry if isinstance(entry, Polynomial) else Polynomial.parse(ring, str(entry))
            for mono, c in p.terms.items():
                vec[(i, mono)] = c
        vecs.append(vec)
    return make_presentation(ring, shifts, vecs, name, canonical)


def free(ring: Ring, shifts: Iterable = ((0, 0),), name: str = "") -> BigradedPresentation:
    return make_presentation(ring, shifts, [], name or "free")


def cyclic(ring: Ring, *polys, shift=(0, 0), name: str = "") -> BigradedPresentation:
    """``S/(f1, ..., fr)`` with generator in bidegree ``shift``."""
    return from_polynomials(ring, [shift], [[p] for p in polys], name=name)


def zero_module(ring: Ring) -> BigradedPresentation:
    return make_presentation(ring, [], [], "0")


def direct_sum(*modules: BigradedPresentation, name: str = "") -> BigradedPresentation:
    ring = modules[0].ring
    shifts: List[BiDegree] = []
    rels: List[Vector] = []
    for G in modules:
        if G.ring != ring:
            raise RingMismatchError("direct sum over different rings")
        off = len(shifts)
        shifts.extend(G.shifts)
        rels.extend({(p + off, mu): c for (p, mu), c in col.items()} for col in G.relations.columns)
    return make_presentation(ring, shifts, rels, name or " + ".join(G.name or "?" for G in modules),
                             canonical=False)


# -- functors ------------------------------------------------------------


def shift(G: BigradedPresentation, m: int, x: int = 0) -> BigradedPresentation:
    """``G(m)``: ``G(m)_k = G_{m+k}``; every t-shift drops by ``m`` (x-shift by ``x``)."""
    delta = BiDegree(-x, -m)
    ring = G.ring
    F0 = FreeBigradedModule(tuple(s + delta for s in G.shifts))
    F1 = FreeBigradedModule(tuple(s + delta for s in G.relation_degrees))
    return BigradedPresentation(ring, F0, ModuleMap(ring, F1, F0, G.relations.columns),
                                G.name and f"{G.name}({m})")


def reverse(G: BigradedPresentation) -> BigradedPresentation:
    """``G^r``: substitute ``t_i -> -t_i`` in every relation entry."""
    m = G.ring.m
    cols = tuple({(p, mu): (-c if sum(mu[m:]) % 2 else c) for (p, mu), c in col.items()}
                 for col in G.relations.columns)
    R = G.relations
    return BigradedPresentation(G.ring, G.generators, ModuleMap(G.ring, R.source, R.target, cols),
                                G.name and f"{G.name}^r")


def t_slice(G: BigradedPresentation, k: int, x_cutoff: int | None = None) -> BigradedPresentation:
    """``G_k`` as a graded module over ``A = Q[x1..xm]``.

    Generators are pairs (generator of G, t-monomial of complementary degree);
    relations are the t-monomial multiples of the relations of G landing in
    t-degree ``k``.  The result is exact; ``x_cutoff``, when given, only guards
    against induced relations of x-degree above it.
    """
    ring = G.ring
    base = ring.base()
    m = ring.m
    gens: List[Tuple[int, Monomial]] = []
    shifts: List[BiDegree] = []
    for i, s in enumerate(G.shifts):
        for tau in ring.t_monomials(k - s.t):
            gens.append((i, tau[m:]))
            shifts.append(BiDegree(s.x, 0))
    index = {g: n for n, g in enumerate(gens)}
    rels: List[Vector] = []
    for col, rdeg in zip(G.relations.columns, G.relation_degrees):
        if not col:
            continue
        for sigma in ring.t_monomials(k - rdeg.t):
            if x_cutoff is not None and rdeg.x > x_cutoff:
                raise SliceCutoffError(f"relation of x-degree {rdeg.x} exceeds cutoff {x_cutoff} in slice {k}")
            vec: Vector = {}
            for (pos, mu), c in col.items():
                full = mono_mul(sigma, mu)
                key = (index[(pos, full[m:])], full[:m])
                vec[key] = vec.get(key, ZERO) + c
            rels.append({key: c for key, c in vec.items() if c})
    label = f"{G.name}_{k}" if G.name else ""
    return make_presentation(base, shifts, rels, label, canonical=False)


def hilbert_table(G: BigradedPresentation, xs: Iterable[int], ts: Iterable[int]) -> Dict[BiDegree, int]:
    ts = list(ts)
    return {BiDegree(a, b): G.dim(BiDegree(a, b)) for a in xs for b in ts}
