"""Module Gröbner bases, Schreyer syzygies and free resolutions.

Orders are position-over-term on free modules, with a block order on
monomials: t-part graded reverse lex first, then x-part graded reverse lex.
Schreyer orders on syzygy modules compare images in the previous module and
break ties by index (smaller index is larger).
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .linalg import ONE, QQ, ZERO, Echelon
from .modules import (
    BigradedPresentation,
    FreeBigradedModule,
    ModuleMap,
    Term,
    Vector,
    make_presentation,
    vec_axpy,
)
from .rings import BiDegree, Monomial, Ring, mono_div, mono_divides, mono_lcm, mono_mul

TermKey = Callable[[Term], tuple]


class NotAGroebnerBasisError(ArithmeticError):
    pass


def _grevlex(exps: Tuple[int, ...]) -> tuple:
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """Block order (t grevlex over x grevlex), position over term.

    ``priority`` lists generator indices from most to least significant; the
    default is ``0, 1, 2, ...``.
    """

    priority: Optional[Tuple[int, ...]] = None

    def term_key(self, ring: Ring, rank: int) -> TermKey:
        prio = list(self.priority) if self.priority is not None else list(range(rank))
        missing = [i for i in range(rank) if i not in prio]
        prio = prio + missing
        weight = {pos: rank - n for n, pos in enumerate(prio)}
        m = ring.m

        @lru_cache(maxsize=None)
        def key(term: Term) -> tuple:
            pos, mono = term
            return (weight[pos], _grevlex(mono[m:]), _grevlex(mono[:m]))

        return key


def leading_term(vec: Vector, key: TermKey) -> Term:
    return max(vec, key=key)


def divide(vec: Vector, elements: Sequence[Vector], leads: Sequence[Term], key: TermKey,
           full: bool = True) -> Tuple[Vector, Dict[Term, QQ]]:
    """Division with remainder.  Returns ``(remainder, quotients)``.

    Quotients are keyed by ``(element index, monomial)``.  With ``full=False``
    only the leading term is reduced (top reduction) and the first
    irreducible leading term stops the loop.
    """
    by_pos: Dict[int, List[int]] = {}
    for k, (pos, _) in enumerate(leads):
        by_pos.setdefault(pos, []).append(k)
    lcs = [el[ld] for el, ld in zip(elements, leads)]
    f = dict(vec)
    rem: Vector = {}
    quot: Dict[Term, QQ] = {}
    while f:
        lt = max(f, key=key)
        c = f[lt]
        pos, mu = lt
        for k in by_pos.get(pos, ()):
            lm = leads[k][1]
            if mono_divides(lm, mu):
                q = mono_div(mu, lm)
                coef = c / lcs[k]
                vec_axpy(f, elements[k], -coef, q)
                quot[(k, q)] = quot.get((k, q), ZERO) + coef
                break
        else:
            if not full:
                rem.update(f)
                return rem, quot
            rem[lt] = c
            del f[lt]
    return rem, quot


@dataclass
class GroebnerBasis:
    ring: Ring
    target: FreeBigradedModule
    order: MonomialOrder
    elements: List[Vector]
    leads: List[Term]
    reps: Optional[List[Vector]] = None  # element k as a combination of the input columns

    @property
    def key(self) -> TermKey:
        return self.order.term_key(self.ring, self.target.rank)

    def degrees(self) -> List[BiDegree]:
        return [self.target.vector_degree(self.ring, g) for g in self.elements]

    def normal_form(self, vec: Vector) -> Vector:
        return divide(vec, self.elements, self.leads, self.key)[0]

    def contains(self, vec: Vector) -> bool:
        return not self.normal_form(vec)

    def __len__(self) -> int:
        return len(self.elements)


def _degree_key(ring: Ring, target: FreeBigradedModule, term: Term) -> tuple:
    deg = target.term_degree(ring, term)
    return (deg.x + deg.t, deg.t, deg.x)


def buchberger(ring: Ring, target: FreeBigradedModule, columns: Sequence[Vector],
               order: MonomialOrder | None = None, track: bool = False) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule spanned by ``columns``.

    Pairs are processed by the normal strategy (smallest lcm bidegree first),
    input columns are merged in by degree, and Buchberger's product and chain
    criteria discard useless pairs (the product criterion only for ideals).
    With ``track`` every basis element also
    records its expression in the input columns.
    """
    order = order or MonomialOrder()
    key = order.term_key(ring, target.rank)
    basis: List[Vector] = []
    leads: List[Term] = []
    reps: List[Vector] = []
    one = ring.one
    queue: list = []
    counter = 0
    for j, col in enumerate(columns):
        if col:
            lt = max(col, key=key)
            heapq.heappush(queue, (_degree_key(ring, target, lt), 0, counter, ("in", j)))
            counter += 1
    live_pairs: set = set()

    def add_pairs(new: int) -> None:
        nonlocal counter
        pos, mu = leads[new]
        for i in range(new):
            if leads[i][0] != pos or basis[i] is None:
                continue
            lcm = mono_lcm(leads[i][1], mu)
            heapq.heappush(queue, (_degree_key(ring, target, (pos, lcm)), 1, counter, ("pair", i, new)))
            live_pairs.add((i, new))
            counter += 1

    while queue:
        _, _, _, item = heapq.heappop(queue)
        if item[0] == "in":
            j = item[1]
            vec = dict(columns[j])
            rep = {(j, one): ONE} if track else None
        else:
            _, i, k = item
            live_pairs.discard((i, k))
            if basis[i] is None or basis[k] is None:
                continue
            (pos, mi), (_, mk) = leads[i], leads[k]
            lcm = mono_lcm(mi, mk)
            if target.rank == 1 and all(a == 0 or b == 0 for a, b in zip(mi, mk)):
                continue  # product criterion (ideals only)
            if _chain_skip(i, k, pos, lcm, leads, basis, live_pairs):
                continue
            qi, qk = mono_div(lcm, mi), mono_div(lcm, mk)
            ci, ck = basis[i][leads[i]], basis[k][leads[k]]
            vec = vec_axpy({}, basis[i], ONE / ci, qi)
            vec_axpy(vec, basis[k], -ONE / ck, qk)
            if track:
                rep = vec_axpy({}, reps[i], ONE / ci, qi)
                vec_axpy(rep, reps[k], -ONE / ck, qk)
            else:
                rep = None
        vec, rep = _top_reduce(vec, rep, basis, leads, reps, key)
        if not vec:
            continue
        lt = max(vec, key=key)
        inv = ONE / vec[lt]
        vec = {t: c * inv for t, c in vec.items()}
        if track:
            rep = {t: c * inv for t, c in rep.items()}
        basis.append(vec)
        leads.append(lt)
        reps.append(rep)
        add_pairs(len(basis) - 1)

    return _interreduce(ring, target, order, key, basis, leads, reps if track else None)


def _chain_skip(i, k, pos, lcm, leads, basis, live_pairs) -> bool:
    for j, (p, mj) in enumerate(leads):
        if j in (i, k) or p != pos or basis[j] is None:
            continue
        if not mono_divides(mj, lcm):
            continue
        if (min(i, j), max(i, j)) in live_pairs or (min(k, j), max(k, j)) in live_pairs:
            continue
        if mono_lcm(mj, leads[i][1]) == lcm or mono_lcm(mj, leads[k][1]) == lcm:
            continue
        return True
    return False


def _top_reduce(vec, rep, basis, leads, reps, key):
    while vec:
        lt = max(vec, key=key)
        pos, mu = lt
        c = vec[lt]
        for k, (p, lm) in enumerate(leads):
            if basis[k] is not None and p == pos and mono_divides(lm, mu):
                q = mono_div(mu, lm)
                vec_axpy(vec, basis[k], -c, q)
                if rep is not None:
                    vec_axpy(rep, reps[k], -c, q)
                break
        else:
            return vec, rep
    return vec, rep


def _interreduce(ring, target, order, key, basis, leads, reps) -> GroebnerBasis:
    keep = []
    for k, (pos, mu) in enumerate(leads):
        redundant = False
        for j, (p, lm) in enumerate(leads):
            if j == k or p != pos or not mono_divides(lm, mu):
                continue
            if lm != mu or j < k:
                redundant = True
                break
        if not redundant:
            keep.append(k)
    elems = [basis[k] for k in keep]
    lds = [leads[k] for k in keep]
    rps = [reps[k] for k in keep] if reps is not None else None
    # tail reduction
    for n in range(len(elems)):
        others = [e for j, e in enumerate(elems) if j != n]
        other_leads = [ld for j, ld in enumerate(lds) if j != n]
        vec = elems[n]
        lt = lds[n]
        tail = {t: c for t, c in vec.items() if t != lt}
        rem, quot = divide(tail, others, other_leads, key)
        new = dict(rem)
        new[lt] = vec[lt]
        elems[n] = new
        if rps is not None:
            rep = dict(rps[n])
            other_reps = [r for j, r in enumerate(rps) if j != n]
            for (j, q), c in quot.items():
                vec_axpy(rep, other_reps[j], -c, q)
            rps[n] = rep
    # deterministic output: ascending leading terms
    perm = sorted(range(len(elems)), key=lambda n: key(lds[n]))
    return GroebnerBasis(ring, target, order, [elems[n] for n in perm], [lds[n] for n in perm],
                         [rps[n] for n in perm] if rps is not None else None)


# -- Schreyer syzygies ---------------------------------------------------


def _lex_desc(mono: Monomial) -> tuple:
    return tuple(-e for e in mono)


@dataclass
class _Stage:
    """Generators of a submodule of ``F_prev`` forming a Gröbner basis for ``key``."""

    elements: List[Vector]
    leads: List[Term]
    key: TermKey
    degrees: List[BiDegree]


def _sorted_stage(elements, leads, key, degrees) -> _Stage:
    # within each lead position, lex-descending lead monomials (length bound)
    perm = sorted(range(len(elements)), key=lambda n: (leads[n][0], _lex_desc(leads[n][1]), n))
    return _Stage([elements[n] for n in perm], [leads[n] for n in perm], key, [degrees[n] for n in perm])


def _schreyer_key(stage: _Stage) -> TermKey:
    prev = stage.key
    leads = stage.leads

    @lru_cache(maxsize=None)
    def key(term: Term) -> tuple:
        i, nu = term
        p, mu = leads[i]
        return prev((p, mono_mul(nu, mu))) + (-i,)

    return key


def _schreyer_step(ring: Ring, stage: _Stage) -> _Stage:
    """Syzygies of a Gröbner basis; they form a Gröbner basis for the Schreyer order."""
    els, leads = stage.elements, stage.leads
    lcs = [e[l] for e, l in zip(els, leads)]
    key = _schreyer_key(stage)
    out: List[Vector] = []
    out_leads: List[Term] = []
    out_degs: List[BiDegree] = []
    n = len(els)
    for i in range(n):
        pos, mi = leads[i]
        cands: List[Tuple[Monomial, int]] = []
        for j in range(i + 1, n):
            if leads[j][0] != pos:
                continue
            cands.append((mono_div(mono_lcm(mi, leads[j][1]), mi), j))
        minimal = []
        for q, j in cands:
            if any((mono_divides(q2, q) and q2 != q) or (q2 == q and j2 < j) for q2, j2 in cands):
                continue
            minimal.append((q, j))
        for qi, j in minimal:
            lcm = mono_mul(qi, mi)
            qj = mono_div(lcm, leads[j][1])
            svec = vec_axpy({}, els[i], ONE / lcs[i], qi)
            vec_axpy(svec, els[j], -ONE / lcs[j], qj)
            rem, quot = divide(svec, els, leads, stage.key)
            if rem:
                raise NotAGroebnerBasisError("S-vector did not reduce to zero")
            syz: Vector = {(i, qi): ONE / lcs[i]}
            syz[(j, qj)] = syz.get((j, qj), ZERO) - ONE / lcs[j]
            for t, c in quot.items():
                nc = syz.get(t, ZERO) - c
                if nc:
                    syz[t] = nc
                else:
                    syz.pop(t, None)
            out.append(syz)
            out_leads.append((i, qi))
            out_degs.append(stage.degrees[i] + ring.bidegree(qi))
    return _sorted_stage(out, out_leads, key, out_degs)


def syzygies(gb: GroebnerBasis) -> ModuleMap:
    """Generators of the syzygy module of ``gb.elements`` (Schreyer's construction).

    The returned map goes from a free module on the syzygies to the free
    module on the basis elements (in the order of ``gb.elements``).
    """
    ring = gb.ring
    degs = gb.degrees()
    stage = _Stage(list(gb.elements), list(gb.leads), gb.key, degs)
    # Schreyer needs the sorted order; translate back afterwards
    perm = sorted(range(len(degs)), key=lambda n: (stage.leads[n][0], _lex_desc(stage.leads[n][1]), n))
    sorted_stage = _Stage([stage.elements[n] for n in perm], [stage.leads[n] for n in perm], stage.key,
                          [degs[n] for n in perm])
    nxt = _schreyer_step(ring, sorted_stage)
    cols = [{(perm[i], mu): c for (i, mu), c in v.items()} for v in nxt.elements]
    return ModuleMap(ring, FreeBigradedModule(tuple(nxt.degrees)), FreeBigradedModule(tuple(degs)), tuple(cols))


def minimal_generators(ring: Ring, module: FreeBigradedModule, vectors: Sequence[Vector]) -> List[int]:
    """Indices of a minimal homogeneous generating subset of ``vectors``.

    Processes vectors by increasing degree and drops every vector lying in the
    span of monomial multiples of those already kept (graded Nakayama).
    """
    degs = [module.vector_degree(ring, v) for v in vectors]
    order = sorted((n for n in range(len(vectors)) if vectors[n]),
                   key=lambda n: (degs[n].x + degs[n].t, degs[n].t, degs[n].x, n))
    kept: List[int] = []
    by_degree: Dict[BiDegree, List[int]] = {}
    for n in order:
        by_degree.setdefault(degs[n], []).append(n)
    for deg in sorted(by_degree, key=lambda dg: (dg.x + dg.t, dg.t, dg.x)):
        index: Dict[Term, int] = {}

        def coords(vec: Vector) -> Dict[int, QQ]:
            out = {}
            for t, c in vec.items():
                idx = index.setdefault(t, len(index))
                out[idx] = c
            return out

        ech = Echelon()
        for k in kept:
            gap = deg - degs[k]
            if gap.x < 0 or gap.t < 0:
                continue
            for nu in ring.monomials(gap):
                ech.add(coords({(p, mono_mul(nu, mu)): c for (p, mu), c in vectors[k].items()}))
        for n in by_degree[deg]:
            if ech.add(coords(vectors[n])):
                kept.append(n)
    return sorted(kept)


def syzygy_module(ring: Ring, target: FreeBigradedModule, columns: Sequence[Vector],
                  column_degrees: Sequence[BiDegree], order: MonomialOrder | None = None,
                  minimal: bool = True) -> List[Vector]:
    """Generators of ``{c : sum_j c_j columns[j] = 0}`` for arbitrary columns.

    Works in ``target + source``: the Gröbner basis of the columns
    ``(columns[j], e_j)`` under an order where target positions dominate
    contains a basis of the kernel, namely its elements with leading term in
    the source block.
    """
    r = target.rank
    prio = tuple(order.priority) if order is not None and order.priority is not None else tuple(range(r))
    prio = prio + tuple(i for i in range(r) if i not in prio) + tuple(r + j for j in range(len(columns)))
    big = FreeBigradedModule(tuple(target.shifts) + tuple(column_degrees))
    one = ring.one
    aug = []
    for j, col in enumerate(columns):
        vec = dict(col)
        vec[(r + j, one)] = ONE
        aug.append(vec)
    gb = buchberger(ring, big, aug, MonomialOrder(prio))
    found = [{(pos - r, mu): c for (pos, mu), c in e.items()}
             for e, (lp, _) in zip(gb.elements, gb.leads) if lp >= r]
    src = FreeBigradedModule(tuple(column_degrees))
    if minimal and found:
        found = [found[n] for n in minimal_generators(ring, src, found)]
    return found


# -- resolutions ---------------------------------------------------------


@dataclass
class FreeResolution:
    """``maps[i]: F_{i+1} -> F_i``; ``F_0`` carries the generators of the module."""

    ring: Ring
    F0: FreeBigradedModule
    maps: List[ModuleMap] = field(default_factory=list)
    complete: bool = True

    @property
    def modules(self) -> List[FreeBigradedModule]:
        return [self.F0] + [phi.source for phi in self.maps]

    @property
    def length(self) -> int:
        return len(self.maps)

    def ranks(self) -> List[int]:
        return [F.rank for F in self.modules]

    def betti(self) -> "BettiTable":
        table: Dict[Tuple[int, BiDegree], int] = {}
        for i, F in enumerate(self.modules):
            for s in F.shifts:
                table[(i, s)] = table.get((i, s), 0) + 1
        return BettiTable(table)

    def presentation(self) -> BigradedPresentation:
        """The module resolved, as ``coker(F_1 -> F_0)``."""
        if not self.maps:
            return make_presentation(self.ring, self.F0.shifts, [], canonical=False)
        return BigradedPresentation(self.ring, self.F0, self.maps[0])


@dataclass(frozen=True)
class BettiTable:
    entries: Dict[Tuple[int, BiDegree], int]

    def to_records(self) -> List[dict]:
        return [
            {"stage": i, "x_shift": s.x, "t_shift": s.t, "rank": r}
            for (i, s), r in sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1].t, kv[0][1].x))
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records(), sort_keys=True)

    def totals(self) -> List[int]:
        n = 1 + max((i for i, _ in self.entries), default=-1)
        out = [0] * n
        for (i, _), r in self.entries.items():
            out[i] += r
        return out


def free_resolution(G: BigradedPresentation, length: int | None = None,
                    order: MonomialOrder | None = None) -> FreeResolution:
    """Schreyer resolution of ``G`` with at most ``length`` maps.

    The first map is the reduced Gröbner basis of the relations; subsequent
    maps are Schreyer syzygies, each a Gröbner basis for the induced order.
    ``complete`` is False when ``length`` cut the resolution short.
    """
    ring = G.ring
    if length is None:
        length = ring.nvars + 1
    if length < 1:
        raise ValueError("length must be at least 1")
    order = order or MonomialOrder()
    gb = buchberger(ring, G.generators, G.relations.columns, order)
    res = FreeResolution(ring, G.generators)
    if not gb.elements:
        return res
    degs = gb.degrees()
    stage = _sorted_stage(gb.elements, gb.leads, gb.key, degs)
    res.maps.append(ModuleMap(ring, FreeBigradedModule(tuple(stage.degrees)), G.generators, tuple(stage.elements)))
    while True:
        nxt = _schreyer_step(ring, stage)
        if not nxt.elements:
            break
        if len(res.maps) >= length:
            res.complete = False
            break
        src = FreeBigradedModule(tuple(nxt.degrees))
        res.maps.append(ModuleMap(ring, src, res.maps[-1].source, tuple(nxt.elements)))
        stage = nxt
    return res


def minimalize(R: FreeResolution) -> FreeResolution:
    """Cancel unit entries until no differential has a nonzero constant entry."""
    ring = R.ring
    one = ring.one
    mods = [list(F.shifts) for F in R.modules]
    # maps as lists of column dicts keyed (row, mono)
    maps = [[dict(c) for c in phi.columns] for phi in R.maps]
    changed = True
    while changed:
        changed = False
        for i, cols in enumerate(maps):
            unit = None
            for s, col in enumerate(cols):
                for (r, mu), c in col.items():
                    if mu == one:
                        unit = (r, s, c)
                        break
                if unit:
                    break
            if unit is None:
                continue
            r, s, c = unit
            pivot = cols[s]
            new_cols = []
            for s2, col in enumerate(cols):
                if s2 == s:
                    continue
                # clear the whole row r: subtract (p/c) * column s for the entry p at (r, s2)
                row = [(mu, a) for (rr, mu), a in col.items() if rr == r]
                col = dict(col)
                for mu, a in row:
                    vec_axpy(col, pivot, -a / c, mu)
                new_cols.append({(rr if rr < r else rr - 1, mu): v for (rr, mu), v in col.items() if rr != r})
            maps[i] = new_cols
            del mods[i + 1][s]
            del mods[i][r]
            if i + 1 < len(maps):
                maps[i + 1] = [{(rr if rr < s else rr - 1, mu): v for (rr, mu), v in col.items() if rr != s}
                               for col in maps[i + 1]]
            if i > 0:
                del maps[i - 1][r]
            changed = True
            break
    modules = [FreeBigradedModule(tuple(sh)) for sh in mods]
    out = FreeResolution(ring, modules[0], [], R.complete)
    for i, cols in enumerate(maps):
        if not modules[i + 1].rank and all(not mm.rank for mm in modules[i + 1:]):
            break
        out.maps.append(ModuleMap(ring, modules[i + 1], modules[i], tuple(cols)))
    return out


def composite_is_zero(R: FreeResolution) -> bool:
    for a, b in zip(R.maps, R.maps[1:]):
        if not a.compose(b).is_zero():
            return False
    return True


def prune_presentation(P: BigradedPresentation, name: str | None = None) -> BigradedPresentation:
    """An isomorphic presentation with no constant entries and minimal relations.

    Each relation with a constant entry expresses one generator through the
    others; that generator and relation are eliminated.  Afterwards the
    generators are minimal, so the module is zero iff none remain.
    """
    ring = P.ring
    one = ring.one
    shifts = list(P.shifts)
    cols = [dict(c) for c in P.relations.columns if c]
    while True:
        found = None
        for s, col in enumerate(cols):
            for (r, mu), c in col.items():
                if mu == one:
                    found = (s, r, c)
                    break
            if found:
                break
        if found is None:
            break
        s, r, c = found
        pivot = cols.pop(s)
        new = []
        for col in cols:
            hits = [(mu, a) for (p, mu), a in col.items() if p == r]
            col = dict(col)
            for mu, a in hits:
                vec_axpy(col, pivot, -a / c, mu)
            col = {(p if p < r else p - 1, mu): a for (p, mu), a in col.items()}
            if col:
                new.append(col)
        cols = new
        del shifts[r]
    F0 = FreeBigradedModule(tuple(shifts))
    if cols:
        cols = [cols[n] for n in minimal_generators(ring, F0, cols)]
    return make_presentation(ring, shifts, cols, P.name if name is None else name)


def is_zero_module(P: BigradedPresentation) -> bool:
    return prune_presentation(P).generators.rank == 0
