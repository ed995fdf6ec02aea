"""Local cohomology along the zero section via truncated Cech complexes.

For the cover ``{t_i != 0}`` the localisation ``G_{t_I}`` in bidegree
``(a, b)`` is the union over caps ``N`` of ``G_(a, b + N|I|) * t_I^{-N}``.
At a fixed cap the augmented complex is the Koszul cochain complex of
``t_1^N, ..., t_d^N`` on ``G``:

    K^p = sum over |I| = p of G_(a, b + N p),
    e_I (x) g  ->  sum over j not in I of (-1)^{#{i in I, i < j}} e_{I+j} (x) t_j^N g.

``H^i_X(G)`` is ``H^i(K)``, ``Gamma_*`` is ``ker(K^1 -> K^2)`` and
``R^q Gamma_* = H^{q+1}(K)`` for ``q >= 1``.  Dimensions are accepted only
once they agree at caps ``N`` and ``N + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .linalg import Echelon, induced_rank, to_qq
from .modules import BigradedPresentation, DegreePiece, Term
from .report import VerificationReport
from .rings import BiDegree, Monomial, mono_mul, subsets


class NonStabilizedError(RuntimeError):
    def __init__(self, what: str, deg: BiDegree, cap: int, dims: Tuple[int, ...]):
        self.deg, self.cap, self.dims = deg, cap, dims
        if len(dims) == 2:
            msg = f"{what} at {deg} did not stabilise up to cap {cap} (dims {dims[0]} vs {dims[1]})"
        else:
            msg = f"{what} at {deg} needs a cap of at least {cap + 1}, above the maximum"
        super().__init__(msg)


@dataclass(frozen=True)
class LocalizedPiece:
    """``G_(a, b + N|I|) * t_I^{-N}``: the cap-``N`` part of ``(G_{t_I})_(a, b)``."""

    inverted: Tuple[int, ...]
    bidegree: BiDegree
    cap: int
    piece: DegreePiece
    d: int

    def labels(self) -> List[Tuple[int, Tuple[int, ...]]]:
        """Basis labels as (generator, Laurent exponent tuple)."""
        out = []
        for gen, mono in self.piece.basis:
            e = list(mono)
            off = len(e) - self.d
            for i in self.inverted:
                e[off + i] -= self.cap
            out.append((gen, tuple(e)))
        return out

    @property
    def dim(self) -> int:
        return self.piece.dim


class CechComplexSlice:
    """The cap-``N`` augmented Cech complex of ``G`` in one bidegree."""

    def __init__(self, G: BigradedPresentation, deg: BiDegree, cap: int):
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.G = G
        self.deg = deg
        self.cap = cap
        self.d = G.ring.d
        self.sets = [subsets(self.d, p) for p in range(self.d + 1)]
        self.pieces = [G.piece(BiDegree(deg.x, deg.t + cap * p)) for p in range(self.d + 1)]
        self._ranks: Dict[int, int] = {}

    def term_dim(self, p: int) -> int:
        if p < 0 or p > self.d:
            return 0
        return len(self.sets[p]) * self.pieces[p].dim

    def localized(self, inverted: Sequence[int]) -> LocalizedPiece:
        inverted = tuple(sorted(inverted))
        return LocalizedPiece(inverted, self.deg, self.cap, self.pieces[len(inverted)], self.d)

    def _t_power(self, j: int) -> Monomial:
        ring = self.G.ring
        e = [0] * ring.nvars
        e[ring.m + j] = self.cap
        return tuple(e)

    def _target_echelon(self, p: int) -> Echelon:
        """Relations of ``K^p`` (block diagonal copies of the piece relations)."""
        P = self.pieces[p]
        n = len(P.basis)
        ech = Echelon()
        for b in range(len(self.sets[p])):
            off = b * n
            for piv, row in P.echelon.rows.items():
                ech.rows[piv + off] = {j + off: c for j, c in row.items()}
        return ech

    def differential_images(self, p: int, vectors: Iterable[Tuple[int, Term, object]] | None = None):
        """Images under ``d_p`` of basis elements ``(block, term)`` of ``K^p``, in ``K^{p+1}`` coordinates."""
        src, tgt = self.pieces[p], self.pieces[p + 1]
        n_tgt = len(tgt.basis)
        tidx = tgt.index
        block_of = {J: b for b, J in enumerate(self.sets[p + 1])}
        if vectors is None:
            free = [k for k in range(len(src.basis)) if k not in src.echelon.rows]
            vectors = [(b, src.basis[k]) for b in range(len(self.sets[p])) for k in free]
        out = []
        for b, (gen, mono) in vectors:
            I = self.sets[p][b]
            img = {}
            for j in range(self.d):
                if j in I:
                    continue
                sign = -1 if sum(1 for i in I if i < j) % 2 else 1
                J = tuple(sorted(I + (j,)))
                key = block_of[J] * n_tgt + tidx[(gen, mono_mul(mono, self._t_power(j)))]
                img[key] = img.get(key, 0) + sign
            out.append({k: v for k, v in img.items() if v})
        return out

    def rank(self, p: int) -> int:
        """Rank of ``d_p: K^p -> K^{p+1}`` on the quotient pieces."""
        if p < 0 or p >= self.d:
            return 0
        r = self._ranks.get(p)
        if r is None:
            if self.term_dim(p) == 0 or self.term_dim(p + 1) == 0:
                r = 0
            else:
                imgs = [{k: to_qq(v) for k, v in img.items()} for img in self.differential_images(p)]
                r = induced_rank(self._target_echelon(p + 1), imgs)
            self._ranks[p] = r
        return r

    def cohomology(self, p: int) -> int:
        """``dim H^p`` of the augmented complex (``p = 0`` is the torsion part)."""
        return self.term_dim(p) - self.rank(p) - self.rank(p - 1)

    def gamma(self, q: int) -> int:
        """``dim H^q`` of the complex ``K^1 -> K^2 -> ...`` (``R^q Gamma_*``)."""
        p = q + 1
        out = self.term_dim(p) - self.rank(p)
        if q >= 1:
            out -= self.rank(p - 1)
        return out

    def localization_map_kernel(self) -> int:
        """Kernel dimension of ``G_(a,b) -> K^1`` computed directly on the quotient."""
        if self.d == 0:
            return self.pieces[0].dim
        return self.pieces[0].dim - self.rank(0)

    def dd_is_zero(self) -> bool:
        for p in range(self.d - 1):
            if self.term_dim(p) == 0:
                continue
            src = self.pieces[p]
            vecs = [(b, src.basis[k]) for b in range(len(self.sets[p])) for k in range(len(src.basis))]
            first = self.differential_images(p, vecs)
            mid = self.pieces[p + 1]
            n_mid = len(mid.basis)
            tgt_ech = self._target_echelon(p + 2)
            for img in first:
                comp = {}
                for key, c in img.items():
                    b, k = divmod(key, n_mid)
                    for key2, c2 in self.differential_images(p + 1, [(b, mid.basis[k])])[0].items():
                        comp[key2] = comp.get(key2, 0) + c * c2
                comp = {k: to_qq(v) for k, v in comp.items() if v}
                if tgt_ech.reduce(comp):
                    return False
        return True


# -- stabilised dimensions -----------------------------------------------


def default_cap(G: BigradedPresentation, ts: Sequence[int] = ()) -> int:
    """``2 + max relation t-degree + t-extent of the window``."""
    rel_t = max((s.t for s in G.relation_degrees), default=0)
    extent = (max(ts) - min(ts)) if ts else 0
    return 2 + max(rel_t, 0) + extent


def _start_cap(G: BigradedPresentation, deg: BiDegree, cap: int | None) -> int:
    base = cap if cap is not None else default_cap(G)
    top_t = max([s.t for s in G.shifts] + [s.t for s in G.relation_degrees] + [0])
    # the first cap must already reach past every generator and relation
    return max(base, top_t - deg.t + 1, 1)


def _slice(G: BigradedPresentation, deg: BiDegree, cap: int) -> CechComplexSlice:
    cache = G._cache.setdefault("cech", {})
    key = (deg, cap)
    s = cache.get(key)
    if s is None:
        s = CechComplexSlice(G, deg, cap)
        cache[key] = s
    return s


@dataclass(frozen=True)
class StableDim:
    dim: int
    cap: int
    stabilized: bool


def _stable(G: BigradedPresentation, deg: BiDegree, what: str, fn, cap: int | None,
            max_cap: int | None) -> StableDim:
    N = _start_cap(G, deg, cap)
    limit = max_cap if max_cap is not None else max(4 * N, 16)
    if N + 1 > limit:
        # certification compares caps N and N + 1
        raise NonStabilizedError(what, deg, N, ())
    while True:
        a = fn(_slice(G, deg, N))
        b = fn(_slice(G, deg, N + 1))
        if a == b:
            return StableDim(a, N, True)
        if 2 * N + 1 > limit:
            raise NonStabilizedError(what, deg, N, (a, b))
        N *= 2


def local_cohomology(G: BigradedPresentation, i: int, deg: BiDegree, cap: int | None = None,
                     max_cap: int | None = None) -> StableDim:
    """``dim H^i_X(G)`` at ``deg``, certified by equality at caps ``N`` and ``N + 1``."""
    if i < 0 or i > G.ring.d:
        return StableDim(0, 0, True)
    return _stable(G, deg, f"H^{i}", lambda s: s.cohomology(i), cap, max_cap)


def gamma_star(G: BigradedPresentation, q: int, deg: BiDegree, cap: int | None = None,
               max_cap: int | None = None) -> StableDim:
    """``dim R^q Gamma_*(G)`` at ``deg`` (``q = 0`` gives ``Gamma_*``)."""
    if q < 0 or q >= G.ring.d:
        return StableDim(0, 0, True)
    return _stable(G, deg, f"R^{q}Gamma", lambda s: s.gamma(q), cap, max_cap)


@dataclass
class LocalCohomologyTable:
    i: int
    entries: Dict[BiDegree, int]
    caps: Dict[BiDegree, int]

    def to_records(self) -> List[list]:
        return [[d.x, d.t, v, self.caps[d]] for d, v in sorted(self.entries.items(), key=lambda kv: (kv[0].t, kv[0].x))]


def local_cohomology_table(G: BigradedPresentation, i: int, xs: Iterable[int], ts: Iterable[int],
                           cap: int | None = None, max_cap: int | None = None) -> LocalCohomologyTable:
    ts = list(ts)
    cap = cap if cap is not None else default_cap(G, ts)
    entries, caps = {}, {}
    for a in xs:
        for b in ts:
            deg = BiDegree(a, b)
            r = local_cohomology(G, i, deg, cap, max_cap)
            entries[deg], caps[deg] = r.dim, r.cap
    return LocalCohomologyTable(i, entries, caps)


@dataclass(frozen=True)
class SliceDims:
    """Stabilised numbers of one Cech slice."""

    g: int
    kernel: int  # kernel of the localisation map G -> K^1
    image: int  # its rank
    h: Tuple[int, ...]  # H^0 .. H^d
    gamma: Tuple[int, ...]  # R^0 Gamma_* .. R^{d-1} Gamma_*
    cap: int


def slice_dims(G: BigradedPresentation, deg: BiDegree, cap: int | None = None,
               max_cap: int | None = None) -> SliceDims:
    """Every Cech number at ``deg``; all of them must agree at caps ``N`` and ``N + 1``."""
    d = G.ring.d

    def everything(s: CechComplexSlice) -> tuple:
        h = tuple(s.cohomology(i) for i in range(d + 1))
        g = tuple(s.gamma(q) for q in range(d))
        return (s.pieces[0].dim, s.localization_map_kernel(), s.rank(0) if d else 0, h, g)

    st = _stable(G, deg, "Cech slice", everything, cap, max_cap)
    g, ker, img, h, gam = st.dim
    return SliceDims(g, ker, img, h, gam, st.cap)


def verify_prop1(G: BigradedPresentation, xs: Iterable[int], ts: Iterable[int], cap: int | None = None,
                 max_cap: int | None = None) -> VerificationReport:
    """Check ``0 -> H^0 -> G -> Gamma_* -> H^1 -> 0`` and ``H^i = R^{i-1} Gamma_*`` per bidegree.

    The map ``G -> Gamma_*`` is the localisation ``g -> (t_i^N g)_i``; its
    kernel and cokernel are computed from that map and compared with the
    local cohomology of the augmented complex.
    """
    ts = list(ts)
    xs = list(xs)
    d = G.ring.d
    cap = cap if cap is not None else default_cap(G, ts)
    rep = VerificationReport("verify_prop1", cap=cap)
    rep.window = {"x": [min(xs), max(xs)], "t": [min(ts), max(ts)]}
    used = 0
    rows = []
    for a in xs:
        for b in ts:
            deg = BiDegree(a, b)
            sd = slice_dims(G, deg, cap, max_cap)
            used = max(used, sd.cap)
            h = sd.h
            gamma0 = sd.gamma[0] if d else 0
            rep.add("four_term.kernel=H0", deg, sd.kernel, h[0])
            rep.add("four_term.coker=H1", deg, gamma0 - sd.image if d else 0, h[1] if d else 0)
            for i in range(2, d + 1):
                rep.add(f"four_term.H{i}=R{i - 1}Gamma", deg, h[i], sd.gamma[i - 1])
            rep.add("four_term.euler", deg, sd.g - gamma0, h[0] - (h[1] if d else 0))
            rows.append([a, b, sd.g, gamma0, *h])
    rep.tables["dims[x,t,G,Gamma,H0..Hd]"] = rows
    rep.cap = used
    return rep
