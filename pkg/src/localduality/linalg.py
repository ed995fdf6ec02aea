"""Sparse exact linear algebra over the rationals.

Vectors are plain dicts ``{index: coefficient}`` with no stored zeros.  The
workhorse is :class:`Echelon`, an incrementally built row-echelon basis used
for ranks, membership tests and ranks of induced maps between quotient
spaces.
"""
from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Dict, Hashable, Iterable, List, Sequence

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is optional
    from fractions import Fraction as QQ

SparseVec = Dict[int, "QQ"]

ZERO = QQ(0)
ONE = QQ(1)


def to_qq(value) -> "QQ":
    """Coerce ints, Fractions and strings like ``"3/4"`` to the field type."""
    if isinstance(value, str):
        num, _, den = value.partition("/")
        return QQ(int(num), int(den)) if den else QQ(int(num))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    return QQ(value)


class Echelon:
    """Row-echelon basis of a subspace, grown one vector at a time.

    Each stored row is normalised so that its leading (smallest) index carries
    coefficient one.  Rows are not back-substituted; the distinct leading
    indices are all that :meth:`reduce` needs.
    """

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[SparseVec] = ()):
        self.rows: Dict[int, SparseVec] = {}
        for v in vectors:
            self.add(v)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "Echelon":
        new = Echelon()
        new.rows = dict(self.rows)
        return new

    def reduce(self, vector: SparseVec) -> SparseVec:
        """Return ``vector`` with every pivot coordinate eliminated (a new dict)."""
        v = dict(vector)
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapify(heap)
        while heap:
            p = heappop(heap)
            c = v.get(p)
            if not c:
                continue
            for j, a in rows[p].items():
                old = v.get(j)
                nv = (old if old is not None else ZERO) - c * a
                if nv:
                    if old is None and j in rows:
                        heappush(heap, j)
                    v[j] = nv
                elif old is not None:
                    del v[j]
        return v

    def add(self, vector: SparseVec) -> bool:
        """Insert ``vector``; return True when it enlarged the span."""
        v = self.reduce(vector)
        if not v:
            return False
        p = min(v)
        inv = ONE / v[p]
        self.rows[p] = {j: a * inv for j, a in v.items()}
        return True

    def contains(self, vector: SparseVec) -> bool:
        return not self.reduce(vector)


def rank(vectors: Iterable[SparseVec]) -> int:
    return Echelon(vectors).rank


def induced_rank(target_relations: Echelon, images: Iterable[SparseVec]) -> int:
    """Rank of a map into ``W / R`` given the images in ``W``.

    ``target_relations`` spans ``R``.  Images are reduced against it; the
    residuals vanish on all pivots of ``R``, so their rank is the rank modulo
    ``R``.
    """
    residual = Echelon()
    for img in images:
        r = target_relations.reduce(img)
        if r:
            residual.add(r)
    return residual.rank


def kernel_basis(columns: Sequence[SparseVec], ncols: int | None = None) -> List[SparseVec]:
    """Basis of ``{c : sum_j c_j * columns[j] = 0}`` as sparse vectors over column indices."""
    n = len(columns) if ncols is None else ncols
    # augment each column with a tag coordinate to track combinations
    offset = 1 + max((max(c) for c in columns if c), default=-1)
    ech = Echelon()
    kernel: List[SparseVec] = []
    for j in range(n):
        v = dict(columns[j])
        v[offset + j] = ONE
        r = ech.reduce(v)
        if r and min(r) >= offset:
            kernel.append({k - offset: a for k, a in r.items()})
            continue
        ech.add(r)
    return kernel


def index_vectors(keyed: Iterable[Dict[Hashable, "QQ"]], index: Dict[Hashable, int]) -> List[SparseVec]:
    """Translate dicts keyed by basis labels into index-keyed sparse vectors."""
    out = []
    for vec in keyed:
        out.append({index[k]: c for k, c in vec.items()})
    return out
