"""Finite posets and lattices: construction, validation, derived lattices, isomorphism.

Elements are always referred to by index. Structures built from user input
(``build_poset``, ``catalog``, JSON documents) store their elements in the
canonical order: sorted by height, ties broken by position in the input.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    DuplicateLabel,
    NotALattice,
    NotDistributive,
    SizeGuardExceeded,
    UnknownCatalogName,
    UnknownLabel,
)

DEFAULT_MAX_SIZE = 100_000


def frozen_array(a, dtype=None) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    r = np.array(rel, dtype=bool, copy=True)
    np.fill_diagonal(r, True)
    for k in range(len(r)):
        r |= r[:, k : k + 1] & r[k : k + 1, :]
    return r


def cover_matrix(leq: np.ndarray) -> np.ndarray:
    """``cover[i, j]`` is true iff ``j`` covers ``i``."""
    lt = leq & ~np.eye(len(leq), dtype=bool)
    lti = lt.astype(np.int32)
    return lt & ((lti @ lti) == 0)


def linear_extension(leq: np.ndarray) -> list[int]:
    # |down(x)| strictly increases along <, so a stable sort on it is a linear extension
    return sorted(range(len(leq)), key=lambda i: int(leq[:, i].sum()))


def heights(leq: np.ndarray) -> list[int]:
    cov = cover_matrix(leq)
    h = [0] * len(leq)
    for x in linear_extension(leq):
        below = np.flatnonzero(cov[:, x])
        if len(below):
            h[x] = max(h[y] for y in below) + 1
    return h


def lattice_tables(leq: np.ndarray, want_meet: bool = True):
    """Join (and meet) tables of a finite order, or raise NotALattice with a witness."""
    leq = np.asarray(leq, dtype=bool)
    n = len(leq)
    down = leq.sum(axis=0)
    up = leq.sum(axis=1)
    big = n + 1
    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64) if want_meet else None
    for i in range(n):
        ub = leq[i][None, :] & leq
        k = np.where(ub, down[None, :], big).argmin(axis=1)
        bad = ~ub.any(axis=1) | (ub & ~leq[k]).any(axis=1)
        if bad.any():
            raise NotALattice((i, int(np.flatnonzero(bad)[0])), "join")
        join[i] = k
        if want_meet:
            lb = leq[:, i][None, :] & leq.T
            k = np.where(lb, up[None, :], big).argmin(axis=1)
            bad = ~lb.any(axis=1) | (lb & ~leq.T[k]).any(axis=1)
            if bad.any():
                raise NotALattice((i, int(np.flatnonzero(bad)[0])), "meet")
            meet[i] = k
    return join, meet


@dataclass(frozen=True, eq=False)
class FinPoset:
    labels: tuple
    leq: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "leq", frozen_array(self.leq, dtype=bool))
        if self.leq.shape != (len(self.labels), len(self.labels)):
            raise ValueError("order grid does not match the label count")

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    @cached_property
    def covers(self) -> np.ndarray:
        return frozen_array(cover_matrix(self.leq))

    @cached_property
    def heights(self) -> tuple:
        return tuple(heights(self.leq))

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.covers))]

    def subposet(self, indices: Sequence[int]) -> "FinPoset":
        idx = list(indices)
        return FinPoset(tuple(self.labels[i] for i in idx), self.leq[np.ix_(idx, idx)])

    def __repr__(self):
        return f"FinPoset(size={self.size})"


def canonical_poset(labels: Sequence, leq: np.ndarray) -> FinPoset:
    """Reorder an already transitive order by (height, input position)."""
    h = heights(np.asarray(leq, dtype=bool))
    order = sorted(range(len(labels)), key=lambda i: (h[i], i))
    leq = np.asarray(leq, dtype=bool)[np.ix_(order, order)]
    return FinPoset(tuple(labels[i] for i in order), leq)


def build_poset(labels: Sequence, covers: Sequence) -> FinPoset:
    labels = list(labels)
    index = {}
    for i, lab in enumerate(labels):
        if lab in index:
            raise DuplicateLabel(f"label {lab!r} appears twice")
        index[lab] = i
    n = len(labels)
    rel = np.zeros((n, n), dtype=bool)
    for pair in covers:
        lo, hi = pair
        for lab in (lo, hi):
            if lab not in index:
                raise UnknownLabel(f"cover references unknown label {lab!r}")
        rel[index[lo], index[hi]] = True
    leq = transitive_closure(rel)
    both = leq & leq.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = np.argwhere(both)[0]
        raise CycleDetected((labels[i], labels[j]))
    return canonical_poset(labels, leq)


@dataclass(frozen=True, eq=False)
class FinLattice:
    poset: FinPoset
    zero: int
    one: int
    meet: np.ndarray
    join: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "meet", frozen_array(self.meet, dtype=np.int64))
        object.__setattr__(self, "join", frozen_array(self.join, dtype=np.int64))

    @property
    def labels(self) -> tuple:
        return self.poset.labels

    @property
    def leq(self) -> np.ndarray:
        return self.poset.leq

    @property
    def size(self) -> int:
        return self.poset.size

    def index(self, label) -> int:
        return self.poset.index(label)

    @cached_property
    def join_reduct(self):
        from .semilattice import FinJoinSemilattice

        return FinJoinSemilattice(self.labels, self.zero, self.join)

    def __repr__(self):
        return f"FinLattice(size={self.size})"


def as_lattice(p: FinPoset) -> FinLattice:
    if p.size == 0:
        raise ValueError("a lattice needs at least one element")
    try:
        join, meet = lattice_tables(p.leq)
    except NotALattice as exc:
        i, j = exc.pair
        raise NotALattice((p.labels[i], p.labels[j]), exc.missing) from None
    zero = int(np.flatnonzero(p.leq.all(axis=1))[0])
    one = int(np.flatnonzero(p.leq.all(axis=0))[0])
    return FinLattice(p, zero, one, meet, join)


def lattice_from_leq(labels: Sequence, leq: np.ndarray, canonical: bool = True) -> FinLattice:
    p = canonical_poset(labels, leq) if canonical else FinPoset(tuple(labels), leq)
    return as_lattice(p)


# -- catalog -----------------------------------------------------------------

def _bool_label(s: int, n: int) -> str:
    if s == 0:
        return "0"
    return "".join(chr(ord("a") + i) for i in range(n) if s >> i & 1)


def catalog(name: str) -> FinLattice:
    """Named small lattices: ``chain:n``, ``bool:n``, ``M3``, ``N5``, ``Mn:k``.

    Element labels: chains use 0..n-1; Boolean lattices use atom-letter strings
    ("0", "a", "b", "ab", ...); M3 is 0 < p, q, r < 1; N5 is 0 < a < c < 1 with
    b incomparable to a and c; Mn:k is 0 < a1..ak < 1.
    """
    spec = name[1:] if name.startswith("@") else name
    m = re.fullmatch(r"(chain|bool|Mn):(\d+)", spec)
    if spec == "M3":
        return as_lattice(build_poset(["0", "p", "q", "r", "1"],
                                      [("0", x) for x in "pqr"] + [(x, "1") for x in "pqr"]))
    if spec == "N5":
        return as_lattice(build_poset(["0", "a", "b", "c", "1"],
                                      [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")]))
    if m is None:
        raise UnknownCatalogName(f"unknown catalog lattice {name!r}")
    kind, k = m.group(1), int(m.group(2))
    if kind == "chain":
        if k < 1:
            raise UnknownCatalogName("chain:n needs n >= 1")
        return as_lattice(build_poset(list(range(k)), [(i, i + 1) for i in range(k - 1)]))
    if kind == "bool":
        if k > 12:
            raise SizeGuardExceeded(2 ** 12, 2 ** k)
        labels = [_bool_label(s, k) for s in range(2 ** k)]
        covers = [(labels[s], labels[s | 1 << i]) for s in range(2 ** k) for i in range(k)
                  if not s >> i & 1]
        return as_lattice(build_poset(labels, covers))
    if k < 3:
        raise UnknownCatalogName("Mn:k needs k >= 3")
    atoms = [f"a{i}" for i in range(1, k + 1)]
    return as_lattice(build_poset(["0"] + atoms + ["1"],
                                  [("0", a) for a in atoms] + [(a, "1") for a in atoms]))


# -- derived lattices -----------------------------------------------------------

def dual(L: FinLattice) -> FinLattice:
    # reversing the index order turns a linear extension of <= into one of >=
    rev = np.arange(L.size)[::-1]
    leq = L.leq.T[np.ix_(rev, rev)]
    pos = np.empty(L.size, dtype=np.int64)
    pos[rev] = np.arange(L.size)
    meet = pos[L.join[np.ix_(rev, rev)]]
    join = pos[L.meet[np.ix_(rev, rev)]]
    p = FinPoset(tuple(L.labels[i] for i in rev), leq)
    return FinLattice(p, int(pos[L.one]), int(pos[L.zero]), meet, join)


def monotone_maps(L: FinLattice, P: FinPoset, max_size: int = DEFAULT_MAX_SIZE) -> list[tuple]:
    order = linear_extension(P.leq)
    out: list[tuple] = []
    f = [0] * P.size

    def extend(k):
        if k == len(order):
            out.append(tuple(f))
            if len(out) > max_size:
                raise SizeGuardExceeded(max_size, len(out))
            return
        p = order[k]
        below = [q for q in order[:k] if P.leq[q, p]]
        for v in range(L.size):
            if all(L.leq[f[q], v] for q in below):
                f[p] = v
                extend(k + 1)

    extend(0)
    return sorted(out)


def function_lattice(L: FinLattice, P: FinPoset, max_size: int = DEFAULT_MAX_SIZE) -> FinLattice:
    """All order-preserving maps P -> L, ordered componentwise.

    Elements are labelled by the tuple of values (as L labels) on P's elements.
    """
    maps = np.array(monotone_maps(L, P, max_size), dtype=np.int64).reshape(-1, P.size)
    m = len(maps)
    leq = np.ones((m, m), dtype=bool)
    for p in range(P.size):
        leq &= L.leq[np.ix_(maps[:, p], maps[:, p])]
    labels = [tuple(L.labels[v] for v in row) for row in maps]
    return lattice_from_leq(labels, leq)


def atoms(L) -> list[int]:
    cov = cover_matrix(L.leq)
    return [int(i) for i in np.flatnonzero(cov[L.zero])]


def join_irreducible_indices(leq: np.ndarray) -> list[int]:
    cov = cover_matrix(np.asarray(leq, dtype=bool))
    return [int(i) for i in np.flatnonzero(cov.sum(axis=0) == 1)]


def join_irreducibles(L) -> FinPoset:
    return FinPoset(tuple(L.labels), L.leq).subposet(join_irreducible_indices(L.leq))


def is_distributive_lattice(L: FinLattice) -> bool:
    J, M = L.join, L.meet
    for x in range(L.size):
        # x ^ (y v z) == (x ^ y) v (x ^ z) for all y, z
        if not np.array_equal(M[x][J], J[np.ix_(M[x], M[x])]):
            return False
    return True


def l_of_d(L: FinLattice, D: FinLattice, max_size: int = DEFAULT_MAX_SIZE) -> FinLattice:
    if not is_distributive_lattice(D):
        raise NotDistributive("L[D] needs a distributive D")
    return function_lattice(L, join_irreducibles(D), max_size)


def lattice_law_violations(L: FinLattice, limit: int = 10) -> list[str]:
    """Full scan of the lattice identities and table/order consistency."""
    J, M, n = L.join, L.meet, L.size
    ar = np.arange(n)
    bad = []
    checks = {
        "join commutative": np.array_equal(J, J.T),
        "meet commutative": np.array_equal(M, M.T),
        "join idempotent": np.array_equal(J[ar, ar], ar),
        "meet idempotent": np.array_equal(M[ar, ar], ar),
        "absorption x v (x ^ y) = x": np.array_equal(J[ar[:, None], M], np.repeat(ar[:, None], n, 1)),
        "absorption x ^ (x v y) = x": np.array_equal(M[ar[:, None], J], np.repeat(ar[:, None], n, 1)),
        "join matches order": np.array_equal(J == ar[None, :], L.leq),
        "zero is least": bool(L.leq[L.zero].all()),
        "one is greatest": bool(L.leq[:, L.one].all()),
    }
    assoc_j = all(np.array_equal(J[J[x]], J[x][J]) for x in range(n))
    assoc_m = all(np.array_equal(M[M[x]], M[x][M]) for x in range(n))
    checks["join associative"] = assoc_j
    checks["meet associative"] = assoc_m
    for name, ok in checks.items():
        if not ok:
            bad.append(name)
    return bad[:limit]


# -- isomorphism -------------------------------------------------------------

@dataclass(frozen=True)
class IsoWitness:
    mapping: tuple

    def inverse(self) -> "IsoWitness":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return IsoWitness(tuple(inv))

    def __len__(self):
        return len(self.mapping)


def _signatures(leq: np.ndarray) -> list[tuple]:
    cov = cover_matrix(leq)
    h = heights(leq)
    down = leq.sum(axis=0)
    up = leq.sum(axis=1)
    return [(h[i], int(cov[:, i].sum()), int(cov[i].sum()), int(down[i]), int(up[i]))
            for i in range(len(leq))]


def preserves_structure(X, Y, mapping) -> bool:
    f = np.asarray(mapping, dtype=np.int64)
    n = X.size
    if len(f) != n or Y.size != n or len(set(f.tolist())) != n:
        return False
    if not np.array_equal(X.leq, Y.leq[np.ix_(f, f)]):
        return False
    if not np.array_equal(f[X.join], Y.join[np.ix_(f, f)]):
        return False
    meet_x, meet_y = getattr(X, "meet", None), getattr(Y, "meet", None)
    if meet_x is not None and meet_y is not None:
        return np.array_equal(f[meet_x], meet_y[np.ix_(f, f)])
    return True


def are_isomorphic(X, Y) -> Optional[IsoWitness]:
    """Isomorphism between two finite lattices or join-semilattices with zero.

    Backtracks over images of the join-irreducible elements (pruned by order
    signatures and by order relations with already placed elements); every
    other element is forced as a join of join-irreducibles.
    """
    if X.size != Y.size:
        return None
    n = X.size
    sx, sy = _signatures(np.asarray(X.leq)), _signatures(np.asarray(Y.leq))
    if sorted(sx) != sorted(sy):
        return None
    jx = join_irreducible_indices(X.leq)
    jy = join_irreducible_indices(Y.leq)
    if len(jx) != len(jy):
        return None
    hx = heights(np.asarray(X.leq))
    jx.sort(key=lambda i: (hx[i], i))
    cand = {j: [k for k in jy if sy[k] == sx[j]] for j in jx}
    lx, ly, JY = np.asarray(X.leq), np.asarray(Y.leq), np.asarray(Y.join)
    below = [[j for j in jx if lx[j, x]] for x in range(n)]
    img: dict[int, int] = {}
    used: set[int] = set()

    def complete():
        f = np.empty(n, dtype=np.int64)
        for x in range(n):
            v = Y.zero
            for j in below[x]:
                v = JY[v, img[j]]
            f[x] = v
        return f if preserves_structure(X, Y, f) else None

    def search(k):
        if k == len(jx):
            return complete()
        j = jx[k]
        for c in cand[j]:
            if c in used:
                continue
            if any(lx[i, j] != ly[img[i], c] or lx[j, i] != ly[c, img[i]] for i in jx[:k]):
                continue
            img[j] = c
            used.add(c)
            found = search(k + 1)
            if found is not None:
                return found
            used.discard(c)
            del img[j]
        return None

    f = search(0)
    return None if f is None else IsoWitness(tuple(int(v) for v in f))


def product_lattice(L1: FinLattice, L2: FinLattice) -> FinLattice:
    n1, n2 = L1.size, L2.size
    pairs = list(itertools.product(range(n1), range(n2)))
    leq = np.zeros((n1 * n2, n1 * n2), dtype=bool)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            leq[a, b] = L1.leq[i, k] and L2.leq[j, l]
    return lattice_from_leq([(L1.labels[i], L2.labels[j]) for i, j in pairs], leq)
