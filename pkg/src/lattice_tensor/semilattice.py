"""Finite join-semilattices with zero, their homomorphisms and join-congruences."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import NotASemilattice, SizeGuardExceeded, UnknownLabel
from .order import (
    DEFAULT_MAX_SIZE,
    FinLattice,
    FinPoset,
    frozen_array,
    join_irreducible_indices,
    lattice_tables,
)


@dataclass(frozen=True, eq=False)
class FinJoinSemilattice:
    labels: tuple
    zero: int
    join: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "join", frozen_array(self.join, dtype=np.int64))
        n = len(self.labels)
        if self.join.shape != (n, n):
            raise NotASemilattice("join table does not match the label count")

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def leq(self) -> np.ndarray:
        return frozen_array(self.join == np.arange(self.size)[None, :])

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"unknown element {label!r}") from None

    @cached_property
    def meet(self) -> np.ndarray:
        # a finite join-semilattice with zero is a lattice; meets exist
        return frozen_array(lattice_tables(self.leq)[1])

    def join_all(self, elements) -> int:
        v = self.zero
        for x in elements:
            v = int(self.join[v, x])
        return v

    def as_poset(self) -> FinPoset:
        return FinPoset(self.labels, self.leq)

    def __repr__(self):
        return f"FinJoinSemilattice(size={self.size})"


def semilattice_law_violations(S: FinJoinSemilattice) -> list[str]:
    J, n = S.join, S.size
    ar = np.arange(n)
    bad = []
    if not np.array_equal(J, J.T):
        bad.append("join commutative")
    if not np.array_equal(J[ar, ar], ar):
        bad.append("join idempotent")
    if not np.array_equal(J[S.zero], ar):
        bad.append("zero neutral")
    if not all(np.array_equal(J[J[x]], J[x][J]) for x in range(n)):
        bad.append("join associative")
    return bad


def semilattice_from_poset(p: FinPoset) -> FinJoinSemilattice:
    """Join-semilattice with zero from an order in which all pairwise joins exist."""
    from .errors import NotALattice

    bottoms = np.flatnonzero(p.leq.all(axis=1))
    if len(bottoms) == 0:
        raise NotASemilattice("no least element")
    try:
        join, _ = lattice_tables(p.leq, want_meet=False)
    except NotALattice as exc:
        i, j = exc.pair
        raise NotALattice((p.labels[i], p.labels[j]), "join") from None
    return FinJoinSemilattice(p.labels, int(bottoms[0]), join)


def join_reduct(L: FinLattice) -> FinJoinSemilattice:
    return L.join_reduct


def one_element_semilattice() -> FinJoinSemilattice:
    return FinJoinSemilattice((0,), 0, [[0]])


def is_distributive_semilattice(S: FinJoinSemilattice) -> bool:
    """Decomposition test: every u <= x0 v x1 is a join of some x0' <= x0 and x1' <= x1.

    In a finite join-semilattice every element is a join of join-irreducibles,
    and a join-irreducible j = x0' v x1' forces j to equal one of them, so the
    property reduces to: each join-irreducible below x0 v x1 lies below x0 or x1.
    """
    leq = S.leq
    js = join_irreducible_indices(leq)
    if not js:
        return True
    dj = leq[js, :].T  # dj[x, k]: k-th join-irreducible <= x
    for x0 in range(S.size):
        need = dj[S.join[x0]]
        have = dj[x0][None, :] | dj
        if (need & ~have).any():
            return False
    return True


def direct_sum(S1: FinJoinSemilattice, S2: FinJoinSemilattice,
               max_size: int = DEFAULT_MAX_SIZE) -> FinJoinSemilattice:
    n1, n2 = S1.size, S2.size
    if n1 * n2 > max_size:
        raise SizeGuardExceeded(max_size, n1 * n2)
    pairs = list(itertools.product(range(n1), range(n2)))
    i = np.array([p[0] for p in pairs])
    j = np.array([p[1] for p in pairs])
    join = S1.join[np.ix_(i, i)] * n2 + S2.join[np.ix_(j, j)]
    labels = [(S1.labels[a], S2.labels[b]) for a, b in pairs]
    return FinJoinSemilattice(labels, S1.zero * n2 + S2.zero, join)


@dataclass(frozen=True, eq=False)
class SemilatticeMap:
    source: FinJoinSemilattice
    target: FinJoinSemilattice
    image: tuple

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))
        if len(self.image) != self.source.size:
            raise ValueError("image length differs from the source size")

    def __call__(self, x: int) -> int:
        return self.image[x]

    @cached_property
    def array(self) -> np.ndarray:
        return frozen_array(self.image, dtype=np.int64)

    def is_homomorphism(self) -> bool:
        f = self.array
        if f[self.source.zero] != self.target.zero:
            return False
        return bool(np.array_equal(f[self.source.join], self.target.join[np.ix_(f, f)]))

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.target.size


def identity_map(S: FinJoinSemilattice) -> SemilatticeMap:
    return SemilatticeMap(S, S, range(S.size))


def is_l_homomorphism(f: SemilatticeMap) -> bool:
    """Exhaustive check: b <= f(a0), f(a1) implies b <= f(x) for some x <= a0, a1."""
    S, T = f.source, f.target
    img = f.array
    tdown = T.leq[:, img].T.astype(np.float32)  # tdown[x, b]: b <= f(x)
    for a0 in range(S.size):
        common = (S.leq[:, a0][:, None] & S.leq).astype(np.float32)  # [x, a1]
        reach = (common.T @ tdown) > 0  # [a1, b]
        need = T.leq[:, img[a0]][None, :] & T.leq[:, img].T
        if (need & ~reach).any():
            return False
    return True


def canonical_blocks(block_of) -> tuple:
    """Renumber blocks so that they appear in order of their least member."""
    seen: dict = {}
    out = []
    for b in block_of:
        if b not in seen:
            seen[b] = len(seen)
        out.append(seen[b])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class JoinCongruence:
    carrier: FinJoinSemilattice
    block_of: tuple

    def __post_init__(self):
        object.__setattr__(self, "block_of", canonical_blocks(int(b) for b in self.block_of))

    @property
    def num_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return out

    def related(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def is_compatible(self) -> bool:
        lab = np.asarray(self.block_of)
        J = self.carrier.join
        rep = np.array([blk[0] for blk in self.blocks()])[lab]
        return bool(np.array_equal(lab[J], lab[J[rep]]))

    def __eq__(self, other):
        return isinstance(other, JoinCongruence) and self.block_of == other.block_of \
            and self.carrier.size == other.carrier.size

    def __hash__(self):
        return hash(self.block_of)

    def __repr__(self):
        return f"JoinCongruence(blocks={self.blocks()})"


def kernel(f: SemilatticeMap) -> JoinCongruence:
    return JoinCongruence(f.source, f.image)


def quotient_semilattice(S: FinJoinSemilattice, theta: JoinCongruence):
    blocks = theta.blocks()
    lab = np.asarray(theta.block_of)
    reps = np.array([b[0] for b in blocks], dtype=np.int64)
    join = lab[S.join[np.ix_(reps, reps)]]
    labels = [tuple(S.labels[x] for x in b) for b in blocks]
    Q = FinJoinSemilattice(labels, int(lab[S.zero]), join)
    return Q, SemilatticeMap(S, Q, theta.block_of)


def is_l_congruence(S: FinJoinSemilattice, theta: JoinCongruence) -> bool:
    """Decided by testing whether the canonical projection is an L-homomorphism."""
    _, proj = quotient_semilattice(S, theta)
    return is_l_homomorphism(proj)


def homomorphisms(S: FinJoinSemilattice, T: FinJoinSemilattice, fixed: dict | None = None):
    """Yield every {v,0}-homomorphism S -> T (as a tuple), optionally with some values fixed.

    Backtracking in a linear extension of S; an element that is the join of two
    earlier elements has its value forced.
    """
    from .order import linear_extension

    order = linear_extension(np.asarray(S.leq))
    fixed = dict(fixed or {})
    if fixed.setdefault(S.zero, T.zero) != T.zero:
        return
    pos = {x: k for k, x in enumerate(order)}
    forced_by = {}
    below = {}
    for k, x in enumerate(order):
        below[x] = [y for y in order[:k] if S.leq[y, x]]
        for y1, y2 in itertools.combinations(order[:k], 2):
            if S.join[y1, y2] == x:
                forced_by[x] = (y1, y2)
                break
    f = [-1] * S.size
    TJ, TL = T.join, T.leq
    src_join = S.join

    def extend(k):
        if k == len(order):
            arr = np.asarray(f)
            if np.array_equal(arr[src_join], TJ[np.ix_(arr, arr)]):
                yield tuple(f)
            return
        x = order[k]
        if x in forced_by:
            y1, y2 = forced_by[x]
            choices = [int(TJ[f[y1], f[y2]])]
            if x in fixed and fixed[x] != choices[0]:
                return
        elif x in fixed:
            choices = [fixed[x]]
        else:
            choices = range(T.size)
        for v in choices:
            if all(TL[f[y], v] for y in below[x]):
                f[x] = v
                yield from extend(k + 1)
        f[x] = -1

    yield from extend(0)
