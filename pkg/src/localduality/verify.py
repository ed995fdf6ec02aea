"""End-to-end verification commands built on the library.

Each ``cmd_*`` function takes a presentation and returns a
:class:`VerificationReport`; the command-line front end only parses
arguments, loads files and maps outcomes to exit codes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cech import default_cap, local_cohomology_table, slice_dims, verify_prop1
from .derham import (
    PreconditionError,
    compute_m_bound,
    verify_der3,
    verify_der4_euler,
    verify_final_prop,
    e1_table,
)
from .groebner import composite_is_zero, free_resolution, minimalize
from .homology import cm_check, cm_dual, ext_S, graded_dual_dim, minimal_resolution, selfdual_scan
from .modules import BigradedPresentation, hilbert_table
from .report import VerificationReport, table_records
from .rings import BiDegree


@dataclass(frozen=True)
class Window:
    x0: int
    x1: int
    t0: int
    t1: int

    @property
    def xs(self) -> range:
        return range(self.x0, self.x1 + 1)

    @property
    def ts(self) -> range:
        return range(self.t0, self.t1 + 1)

    def to_dict(self) -> dict:
        return {"x": [self.x0, self.x1], "t": [self.t0, self.t1]}

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"a0:a1,b0:b1"`` (x range, then t range; both inclusive)."""
        try:
            xpart, tpart = text.split(",")
            x0, x1 = (int(v) for v in xpart.split(":"))
            t0, t1 = (int(v) for v in tpart.split(":"))
        except ValueError:
            raise ValueError(f"window must look like a0:a1,b0:b1, got {text!r}") from None
        if x0 > x1 or t0 > t1:
            raise ValueError(f"empty window {text!r}")
        return cls(x0, x1, t0, t1)


def default_window(G: BigradedPresentation) -> Window:
    """t from ``min shift - d - 2`` to ``max shift + d + 2``; x from 0 to ``max relation x-degree + 4``."""
    d = G.ring.d
    ts = [s.t for s in G.shifts] + [s.t for s in G.relation_degrees] or [0]
    xs_gen = [s.x for s in G.shifts] or [0]
    xs_rel = [s.x for s in G.relation_degrees] or [0]
    return Window(min(0, min(xs_gen)), max(0, max(xs_rel)) + 4, min(ts) - d - 2, max(ts) + d + 2)


def _report(command: str, G: BigradedPresentation, window: Window | None, digest: str) -> VerificationReport:
    rep = VerificationReport(command, digest=digest)
    rep.window = window.to_dict() if window is not None else None
    return rep


def cmd_hilbert(G: BigradedPresentation, window: Window, digest: str = "") -> VerificationReport:
    rep = _report("hilbert", G, window, digest)
    table = {(d.x, d.t): v for d, v in hilbert_table(G, window.xs, window.ts).items()}
    rep.tables["hilbert[x,t,dim]"] = table_records(table)
    return rep


def cmd_resolve(G: BigradedPresentation, minimal: bool = True, length: int | None = None,
                digest: str = "") -> VerificationReport:
    rep = _report("resolve", G, None, digest)
    R = free_resolution(G, length)
    rep.add("resolve.dd=0", None, composite_is_zero(R), True)
    rep.add("resolve.complete", None, R.complete, True)
    out = minimalize(R) if minimal else R
    rep.tables["betti"] = out.betti().to_records()
    rep.tables["ranks"] = out.ranks()
    return rep


def cmd_ext(G: BigradedPresentation, q: int, window: Window, digest: str = "") -> VerificationReport:
    rep = _report("ext", G, window, digest)
    E = ext_S(G, q)
    rep.tables[f"ext{q}.generators"] = [[s.x, s.t] for s in E.module.shifts]
    rep.tables[f"ext{q}[x,t,dim]"] = table_records({(a, b): E.dim(BiDegree(a, b)) for a in window.xs for b in window.ts})
    return rep


def cmd_cm_check(G: BigradedPresentation, digest: str = "") -> VerificationReport:
    rep = _report("cm-check", G, None, digest)
    res = cm_check(G)
    note = "" if res.is_cm else f"Ext^{res.witness.q} nonzero, first generator at {res.witness.bidegree}"
    rep.add("cm", None, res.nonzero, [G.ring.d] if res.nonzero else [], passed=res.is_cm, note=note)
    rep.tables["nonzero_ext"] = res.nonzero
    return rep


def cmd_localcoh(G: BigradedPresentation, i: int | None, window: Window, cap: int | None = None,
                 max_cap: int | None = None, digest: str = "") -> VerificationReport:
    cap = cap if cap is not None else default_cap(G, window.ts)
    rep = _report("localcoh", G, window, digest)
    degrees = [i] if i is not None else list(range(G.ring.d + 1))
    for j in degrees:
        tab = local_cohomology_table(G, j, window.xs, window.ts, cap, max_cap)
        rep.tables[f"H{j}[x,t,dim,cap]"] = tab.to_records()
    rep.extend(verify_prop1(G, window.xs, window.ts, cap, max_cap))
    rep.window = window.to_dict()
    return rep


def _euler_identity(G: BigradedPresentation, window: Window, cap, max_cap, rep: VerificationReport) -> None:
    """``sum (-1)^{p+q} dim D^p(Ext^q_S(G, omega)) = (-1)^d sum (-1)^i dim H^i_X(G)`` per bidegree."""
    ring = G.ring
    R = minimal_resolution(G)
    exts = [ext_S(G, q, resolution=R).module for q in range(R.length + 1)]
    exts = [(q, E) for q, E in enumerate(exts) if E.generators.rank]
    rep.tables["nonzero_ext"] = [q for q, _ in exts]
    used = 0
    for a in window.xs:
        for k in window.ts:
            deg = BiDegree(a, k)
            lhs = 0
            for q, E in exts:
                for p in range(ring.m + 1):
                    lhs += (-1) ** (p + q) * graded_dual_dim(E, p, deg)
            sd = slice_dims(G, deg, cap, max_cap)
            used = max(used, sd.cap)
            rhs = (-1) ** ring.d * sum((-1) ** i * h for i, h in enumerate(sd.h))
            rep.add("duality.spectral_euler", deg, lhs, rhs)
    rep.cap = max(rep.cap or 0, used)


def cmd_verify_duality(G: BigradedPresentation, window: Window, cap: int | None = None,
                       max_cap: int | None = None, w_range: Sequence[int] = range(-3, 6),
                       digest: str = "") -> VerificationReport:
    """CM modules (with m = d): checks (i)-(iv) per bidegree.  Otherwise the Euler identity."""
    ring = G.ring
    d = ring.d
    cap = cap if cap is not None else default_cap(G, window.ts)
    rep = _report("verify-duality", G, window, digest)
    rep.cap = cap
    res = cm_check(G)
    rep.tables["cm"] = {"is_cm": res.is_cm, "nonzero_ext": res.nonzero}
    cm_path = res.is_cm and ring.m == d and G.generators.rank > 0
    if res.is_cm and ring.m != d:
        rep.notes.append("Cohen-Macaulay duality is only asserted for m = d; using the Euler identity")
    if not cm_path:
        _euler_identity(G, window, cap, max_cap, rep)
        rep.notes.append("selfdual scan skipped: module is not Cohen-Macaulay of dimension d")
        return rep
    dual = cm_dual(G)
    rep.tables["cm_dual.generators"] = [[s.x, s.t] for s in dual.shifts]
    rows = []
    used = 0
    for a in window.xs:
        for k in window.ts:
            deg = BiDegree(a, k)
            sd = slice_dims(G, deg, cap, max_cap)
            used = max(used, sd.cap)
            D = [graded_dual_dim(dual, i, deg) for i in range(d + 1)]
            gamma0 = sd.gamma[0]
            rep.add("duality.i:D0=H0", deg, D[0], sd.h[0])
            rep.add("duality.ii:D1=H1", deg, D[1], sd.h[1])
            for i in range(2, d + 1):
                rep.add(f"duality.iii:D{i}=H{i}", deg, D[i], sd.h[i])
                rep.add(f"duality.iii:H{i}=R{i - 1}Gamma", deg, sd.h[i], sd.gamma[i - 1])
            rep.add("duality.iv:euler", deg, sd.g - gamma0, D[0] - D[1])
            rows.append([a, k, sd.g, gamma0, D[0], D[1]])
    rep.cap = used
    rep.tables["dims[x,t,G,Gamma,D0,D1]"] = rows
    scan = selfdual_scan(G, list(w_range), window.xs, window.ts)
    rep.tables["selfdual"] = scan.to_dict()
    return rep


def cmd_selfdual_scan(G: BigradedPresentation, window: Window, w_range: Sequence[int],
                      digest: str = "") -> VerificationReport:
    rep = _report("selfdual-scan", G, window, digest)
    scan = selfdual_scan(G, list(w_range), window.xs, window.ts)
    rep.tables["selfdual"] = scan.to_dict()
    rep.add("selfdual.match", None, scan.matches, scan.matches, passed=bool(scan.matches),
            note="" if scan.matches else f"no weight fits; best {scan.best}")
    if scan.matches:
        rep.notes.append(f"self-dual at w = {', '.join(map(str, scan.matches))}")
    return rep


def resolve_weight(G: BigradedPresentation, window: Window, weight: int | None, hint: int | None,
                   w_range: Iterable[int] = range(-3, 6)) -> tuple:
    """Pick ``w`` from the flag, then the file hint, then a unique self-duality fit."""
    if weight is not None:
        return weight, "flag"
    if hint is not None:
        return hint, "weight_hint"
    if not cm_check(G).is_cm or G.ring.m != G.ring.d or not G.generators.rank:
        return None, "not Cohen-Macaulay"
    scan = selfdual_scan(G, list(w_range), window.xs, window.ts, split=False)
    if len(scan.matches) == 1:
        return scan.matches[0], "selfdual scan"
    return None, f"self-duality scan found {scan.matches or 'no'} fits"


def cmd_verify_derham(G: BigradedPresentation, window: Window, weight: int | None = None,
                      weight_hint: int | None = None, digest: str = "") -> VerificationReport:
    ring = G.ring
    d = ring.d
    rep = _report("verify-derham", G, window, digest)
    rep.extend(verify_der3(G, window.xs, window.ts))
    res = cm_check(G)
    is_cm = res.is_cm and ring.m == d and G.generators.rank > 0
    if res.is_cm or len(res.nonzero) == 1:
        rep.extend(verify_der4_euler(G, window.xs, window.ts))
    else:
        rep.notes.append(f"der4 skipped: Ext is nonzero in degrees {res.nonzero}")
    w, source = resolve_weight(G, window, weight, weight_hint)
    if w is None:
        rep.notes.append(f"final-prop and e1 skipped: no weight ({source})")
        return rep
    rep.tables["weight"] = {"w": w, "source": source}
    if not is_cm:
        rep.notes.append(f"e1 refused at w={w}: module is not Cohen-Macaulay of dimension d")
        rep.notes.append("final-prop skipped: it presumes the self-duality at w")
        return rep
    try:
        _, e1_rep = e1_table(G, w, window.xs, window.ts)
    except PreconditionError as exc:
        rep.notes.append(f"e1 refused: {exc}")
        rep.notes.append("final-prop skipped: it presumes the self-duality at w")
        return rep
    rep.extend(e1_rep)
    m_bound = compute_m_bound(G)
    if m_bound is None:
        rep.notes.append("final-prop: zero module, vacuous")
        return rep
    rep.tables["final_prop"] = {"m_bound": m_bound, "n": w - d, "k_from": m_bound - (w - d)}
    rep.extend(verify_final_prop(G, m_bound, w - d, window.xs, window.ts))
    return rep
