"""Congruences of finite lattices and the congruence lattice Con L."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import IndexOutOfRange, SizeGuardExceeded, TrivialLattice
from .order import DEFAULT_MAX_SIZE, FinLattice, FinPoset, frozen_array, lattice_tables
from .semilattice import FinJoinSemilattice, canonical_blocks


# -- partitions as canonical block-label tuples --------------------------------

def _components(n: int, src, dst) -> tuple:
    g = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, lab = connected_components(g, directed=False)
    return canonical_blocks(lab.tolist())


def representatives(block_of: Sequence[int]) -> np.ndarray:
    """rep[x] = least member of x's block."""
    lab = np.asarray(block_of)
    first = np.full(lab.max() + 1 if len(lab) else 0, -1)
    for x in range(len(lab) - 1, -1, -1):
        first[lab[x]] = x
    return first[lab]


def partition_join(p: Sequence[int], q: Sequence[int]) -> tuple:
    """Equivalence join: transitive closure of the union."""
    n = len(p)
    rp, rq = representatives(p), representatives(q)
    ar = np.arange(n)
    return _components(n, np.concatenate([ar, ar]), np.concatenate([rp, rq]))


def partition_join_all(parts: Iterable[Sequence[int]], n: int) -> tuple:
    src, dst = [np.arange(n)], [np.arange(n)]
    for p in parts:
        src.append(np.arange(n))
        dst.append(representatives(p))
    return _components(n, np.concatenate(src), np.concatenate(dst))


def partition_meet(p: Sequence[int], q: Sequence[int]) -> tuple:
    return canonical_blocks(zip(p, q))


def refines(p: Sequence[int], q: Sequence[int]) -> bool:
    """Every block of p lies inside a block of q."""
    q = np.asarray(q)
    return bool(np.array_equal(q, q[representatives(p)]))


def blocks_of(block_of: Sequence[int]) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(max(block_of) + 1 if len(block_of) else 0)]
    for x, b in enumerate(block_of):
        out[b].append(x)
    return out


def is_lattice_compatible(L: FinLattice, block_of: Sequence[int]) -> bool:
    lab = np.asarray(block_of)
    rep = representatives(lab)
    return bool(np.array_equal(lab[L.join], lab[L.join[rep]])
                and np.array_equal(lab[L.meet], lab[L.meet[rep]]))


def congruence_closure(L: FinLattice, block_of: Sequence[int]) -> tuple:
    """Least lattice congruence containing the given equivalence.

    Each round links x's row of the join and meet tables to the row of its
    block representative, then recomputes blocks; stops at the first stable round.
    """
    n = L.size
    lab = canonical_blocks(block_of)
    ar = np.arange(n)
    J, M = np.asarray(L.join), np.asarray(L.meet)
    while True:
        rep = representatives(lab)
        src = np.concatenate([ar, J.ravel(), M.ravel()])
        dst = np.concatenate([rep, J[rep].ravel(), M[rep].ravel()])
        new = _components(n, src, dst)
        if new == lab:
            return lab
        lab = new


@dataclass(frozen=True, eq=False)
class LatticeCongruence:
    carrier: FinLattice
    block_of: tuple

    def __post_init__(self):
        object.__setattr__(self, "block_of", canonical_blocks(int(b) for b in self.block_of))

    @property
    def num_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def blocks(self) -> list[list[int]]:
        return blocks_of(self.block_of)

    def related(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def is_compatible(self) -> bool:
        return is_lattice_compatible(self.carrier, self.block_of)

    def __le__(self, other: "LatticeCongruence") -> bool:
        return refines(self.block_of, other.block_of)

    def __or__(self, other: "LatticeCongruence") -> "LatticeCongruence":
        return LatticeCongruence(self.carrier, partition_join(self.block_of, other.block_of))

    def __and__(self, other: "LatticeCongruence") -> "LatticeCongruence":
        return LatticeCongruence(self.carrier, partition_meet(self.block_of, other.block_of))

    def __eq__(self, other):
        return isinstance(other, LatticeCongruence) and self.block_of == other.block_of

    def __hash__(self):
        return hash(self.block_of)

    def export(self) -> list[list]:
        """Blocks as sorted label lists, ordered by least member."""
        labels = self.carrier.labels
        return [[labels[x] for x in blk] for blk in self.blocks()]

    def __repr__(self):
        return f"LatticeCongruence({self.blocks()})"


def omega(L: FinLattice) -> LatticeCongruence:
    return LatticeCongruence(L, range(L.size))


def iota(L: FinLattice) -> LatticeCongruence:
    return LatticeCongruence(L, [0] * L.size)


def principal_congruence(L: FinLattice, a: int, b: int) -> LatticeCongruence:
    for v in (a, b):
        if not 0 <= v < L.size:
            raise IndexOutOfRange(f"index {v} out of range for size {L.size}")
    lab = list(range(L.size))
    lab[max(a, b)] = min(a, b)
    return LatticeCongruence(L, congruence_closure(L, lab))


def _cong_label(L: FinLattice, block_of) -> str:
    return "|".join(",".join(str(L.labels[x]) for x in blk) for blk in blocks_of(block_of))


@dataclass(frozen=True, eq=False)
class ConLattice:
    """All congruences of a finite lattice, ordered by refinement."""

    base: FinLattice
    partitions: tuple
    order: np.ndarray
    join: np.ndarray
    meet: np.ndarray

    @property
    def size(self) -> int:
        return len(self.partitions)

    @cached_property
    def congruences(self) -> list[LatticeCongruence]:
        return [LatticeCongruence(self.base, p) for p in self.partitions]

    @cached_property
    def _index(self) -> dict:
        return {p: i for i, p in enumerate(self.partitions)}

    def index_of(self, theta) -> int:
        p = theta.block_of if hasattr(theta, "block_of") else canonical_blocks(theta)
        return self._index[p]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1

    def principal_index(self, a: int, b: int) -> int:
        return self._principal(a, b)

    def _principal(self, a, b):
        cache = self.__dict__.setdefault("_principal_cache", {})
        key = (min(a, b), max(a, b))
        if key not in cache:
            cache[key] = self.index_of(principal_congruence(self.base, *key))
        return cache[key]

    @cached_property
    def labels(self) -> tuple:
        return tuple(_cong_label(self.base, p) for p in self.partitions)

    @cached_property
    def lattice(self) -> FinLattice:
        return FinLattice(FinPoset(self.labels, self.order), 0, self.size - 1, self.meet, self.join)

    @property
    def semilattice(self) -> FinJoinSemilattice:
        return self.lattice.join_reduct

    def atoms(self) -> list[int]:
        from .order import atoms
        return atoms(self.lattice)


def cover_principal_partitions(L: FinLattice) -> list[tuple]:
    gens = {}
    for x, y in L.poset.cover_pairs():
        p = principal_congruence(L, x, y).block_of
        gens.setdefault(p, None)
    return list(gens)


def congruence_lattice(L: FinLattice, max_size: int = DEFAULT_MAX_SIZE) -> ConLattice:
    """Join-closure of the principal congruences of covering pairs, plus omega."""
    n = L.size
    bottom = tuple(range(n))
    gens = cover_principal_partitions(L)
    seen = {bottom}
    queue = deque([bottom])
    while queue:
        p = queue.popleft()
        for g in gens:
            if refines(g, p):
                continue
            q = partition_join(p, g)
            if q not in seen:
                seen.add(q)
                if len(seen) > max_size:
                    raise SizeGuardExceeded(max_size, len(seen))
                queue.append(q)
    parts = sorted(seen, key=lambda p: (n - (max(p) + 1), p))
    k = len(parts)
    labs = np.array(parts, dtype=np.int64).reshape(k, n)
    order = np.zeros((k, k), dtype=bool)
    for i, p in enumerate(parts):
        rep = representatives(p)
        order[i] = (labs == labs[:, rep]).all(axis=1)
    join, meet = lattice_tables(order)
    return ConLattice(L, tuple(parts), frozen_array(order), frozen_array(join), frozen_array(meet))


def conc_semilattice(L: FinLattice) -> FinJoinSemilattice:
    return congruence_lattice(L).semilattice


def quotient_lattice(L: FinLattice, theta: LatticeCongruence):
    """Blocks with the induced operations, and the projection as an index tuple."""
    lab = np.asarray(theta.block_of)
    blocks = theta.blocks()
    reps = np.array([b[0] for b in blocks], dtype=np.int64)
    join = lab[L.join[np.ix_(reps, reps)]]
    meet = lab[L.meet[np.ix_(reps, reps)]]
    k = len(blocks)
    leq = join == np.arange(k)[None, :]
    labels = [tuple(L.labels[x] for x in b) for b in blocks]
    Q = FinLattice(FinPoset(labels, leq), int(lab[L.zero]), int(lab[L.one]), meet, join)
    return Q, tuple(int(v) for v in lab)


def is_simple(L: FinLattice) -> bool:
    if L.size < 2:
        raise TrivialLattice("simplicity needs at least two elements")
    return congruence_lattice(L).size == 2


def is_subdirectly_irreducible(L: FinLattice) -> bool:
    if L.size < 2:
        raise TrivialLattice("subdirect irreducibility needs at least two elements")
    return len(congruence_lattice(L).atoms()) == 1
