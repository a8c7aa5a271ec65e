"""Bi-ideals of A x B and the tensor product of finite join-semilattices with zero.

A bi-ideal is stored as a Python int bitmask over the grid; cell (x, y) has bit
``x * |B| + y``. Enumeration, closure and table construction all work on these
masks; ``BiIdeal`` wraps a mask together with its two factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotABimorphism,
    NotComparablePair,
    NotLHomomorphism,
    SizeGuardExceeded,
)
from .order import DEFAULT_MAX_SIZE, FinLattice, FinPoset, frozen_array, lattice_tables
from .semilattice import FinJoinSemilattice, SemilatticeMap, is_l_homomorphism


def _as_semilattice(S) -> FinJoinSemilattice:
    return S.join_reduct if isinstance(S, FinLattice) else S


class GridOps:
    """Precomputed masks for closure computations on A x B."""

    def __init__(self, A: FinJoinSemilattice, B: FinJoinSemilattice):
        self.A, self.B = A, B
        na, nb = self.na, self.nb = A.size, B.size
        self.ncells = na * nb
        self.full = (1 << self.ncells) - 1
        la, lb = A.leq, B.leq
        self.down = [0] * self.ncells
        self.up = [0] * self.ncells
        for x in range(na):
            for y in range(nb):
                d = u = 0
                for x2 in range(na):
                    for y2 in range(nb):
                        bit = 1 << (x2 * nb + y2)
                        if la[x2, x] and lb[y2, y]:
                            d |= bit
                        if la[x, x2] and lb[y, y2]:
                            u |= bit
                self.down[x * nb + y] = d
                self.up[x * nb + y] = u
        nab = 0
        for x in range(na):
            nab |= 1 << (x * nb + B.zero)
        for y in range(nb):
            nab |= 1 << (A.zero * nb + y)
        self.nabla = nab
        self.row_mask = (1 << nb) - 1
        self._ajoin: dict[int, int] = {}
        self._bjoin: dict[int, int] = {}

    def cell(self, x: int, y: int) -> int:
        return x * self.nb + y

    def pair(self, c: int) -> tuple[int, int]:
        return divmod(c, self.nb)

    def cells(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def hereditary(self, mask: int) -> int:
        h = 0
        down = self.down
        for c in self.cells(mask):
            if not h >> c & 1:
                h |= down[c]
        return h

    def _join_of_bits(self, S: FinJoinSemilattice, bits: int, cache: dict) -> int:
        v = cache.get(bits)
        if v is None:
            v = S.zero
            b, i = bits, 0
            while b:
                if b & 1:
                    v = int(S.join[v, i])
                b >>= 1
                i += 1
            cache[bits] = v
        return v

    def lateral_pass(self, m: int) -> int:
        """Add the hereditary closure of every row and column section join."""
        na, nb, down = self.na, self.nb, self.down
        new = m
        for x in range(na):
            sec = (m >> (x * nb)) & self.row_mask
            if sec:
                j = self._join_of_bits(self.B, sec, self._bjoin)
                if not m >> (x * nb + j) & 1:
                    new |= down[x * nb + j]
        for y in range(nb):
            sec = 0
            for x in range(na):
                if m >> (x * nb + y) & 1:
                    sec |= 1 << x
            if sec:
                j = self._join_of_bits(self.A, sec, self._ajoin)
                if not m >> (j * nb + y) & 1:
                    new |= down[j * nb + y]
        return new

    def close(self, mask: int) -> int:
        """Least bi-ideal containing ``mask``: alternate lateral joins and hereditary completion."""
        m = self.hereditary(mask | self.nabla)
        while True:
            new = self.lateral_pass(m)
            if new == m:
                return m
            m = new

    def close_staged(self, mask: int) -> int:
        """Literal staged closure: X0 = X u nabla, X_n = hereditary set generated by
        all lateral joins of pairs in X_{n-1}; stop at the first repeated stage."""
        A, B = self.A, self.B
        cur = set(self.cells(mask | self.nabla))
        while True:
            pts = [self.pair(c) for c in cur]
            gen = set(cur)
            for x0, y0 in pts:
                for x1, y1 in pts:
                    if x0 == x1 or y0 == y1:
                        gen.add(self.cell(int(A.join[x0, x1]), int(B.join[y0, y1])))
            nxt = set(self.cells(self.hereditary(sum(1 << c for c in gen))))
            if nxt == cur:
                return sum(1 << c for c in cur)
            cur = nxt

    def is_biideal(self, mask: int) -> bool:
        if mask & self.nabla != self.nabla:
            return False
        if self.hereditary(mask) != mask:
            return False
        return self.lateral_pass(mask) == mask

    def maximal_cells(self, mask: int) -> list[int]:
        return [c for c in self.cells(mask) if mask & self.up[c] == 1 << c]

    def grid(self, mask: int) -> np.ndarray:
        bits = [(mask >> c) & 1 for c in range(self.ncells)]
        return np.array(bits, dtype=bool).reshape(self.na, self.nb)

    def bitstring(self, mask: int) -> str:
        return "".join("1" if mask >> c & 1 else "0" for c in range(self.ncells))


@lru_cache(maxsize=256)
def grid_ops(A: FinJoinSemilattice, B: FinJoinSemilattice) -> GridOps:
    return GridOps(A, B)


@dataclass(frozen=True, eq=False)
class BiIdeal:
    A: FinJoinSemilattice
    B: FinJoinSemilattice
    mask: int

    @property
    def dims(self) -> tuple[int, int]:
        return (self.A.size, self.B.size)

    @property
    def ops(self) -> GridOps:
        return grid_ops(self.A, self.B)

    @property
    def membership(self) -> np.ndarray:
        return self.ops.grid(self.mask)

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.mask >> self.ops.cell(x, y) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def cells(self) -> list[tuple[int, int]]:
        return [self.ops.pair(c) for c in self.ops.cells(self.mask)]

    def issubset(self, other: "BiIdeal") -> bool:
        return self.mask & other.mask == self.mask

    def __eq__(self, other):
        return (isinstance(other, BiIdeal) and self.dims == other.dims
                and self.mask == other.mask)

    def __hash__(self):
        return hash((self.dims, self.mask))

    def rows(self) -> list[str]:
        """Export format: one 0/1 string per A element, columns in B order."""
        g = self.membership
        return ["".join("1" if v else "0" for v in row) for row in g]

    def __repr__(self):
        return f"BiIdeal({'/'.join(self.rows())})"


@dataclass(frozen=True)
class Cap:
    pairs: tuple

    def regenerate(self, A, B) -> BiIdeal:
        """Hereditary set generated by the cap, together with nabla."""
        A, B = _as_semilattice(A), _as_semilattice(B)
        ops = grid_ops(A, B)
        m = ops.nabla
        for x, y in self.pairs:
            m |= ops.down[ops.cell(x, y)]
        return BiIdeal(A, B, m)

    def labelled(self, A, B) -> list[list]:
        return sorted([[A.labels[x], B.labels[y]] for x, y in self.pairs], key=str)

    def __len__(self):
        return len(self.pairs)


def _check_index(S, i):
    if not 0 <= i < S.size:
        raise IndexOutOfRange(f"index {i} out of range for size {S.size}")


def _same_dims(I: BiIdeal, J: BiIdeal):
    if I.dims != J.dims:
        raise DimensionMismatch(f"{I.dims} vs {J.dims}")


def nabla(A, B) -> BiIdeal:
    A, B = _as_semilattice(A), _as_semilattice(B)
    return BiIdeal(A, B, grid_ops(A, B).nabla)


def pure_tensor(A, B, a: int, b: int) -> BiIdeal:
    A, B = _as_semilattice(A), _as_semilattice(B)
    _check_index(A, a)
    _check_index(B, b)
    ops = grid_ops(A, B)
    return BiIdeal(A, B, ops.nabla | ops.down[ops.cell(a, b)])


def biideal_generate(A, B, X: Iterable[tuple[int, int]], staged: bool = False) -> BiIdeal:
    A, B = _as_semilattice(A), _as_semilattice(B)
    ops = grid_ops(A, B)
    m = 0
    for x, y in X:
        _check_index(A, x)
        _check_index(B, y)
        m |= 1 << ops.cell(x, y)
    return BiIdeal(A, B, ops.close_staged(m) if staged else ops.close(m))


def biideal_join(I: BiIdeal, J: BiIdeal) -> BiIdeal:
    _same_dims(I, J)
    return BiIdeal(I.A, I.B, I.ops.close(I.mask | J.mask))


def biideal_meet(I: BiIdeal, J: BiIdeal) -> BiIdeal:
    _same_dims(I, J)
    return BiIdeal(I.A, I.B, I.mask & J.mask)


def is_mixed_pair(A, B, a0, b0, a1, b1) -> bool:
    A, B = _as_semilattice(A), _as_semilattice(B)
    return bool((A.leq[a0, a1] and B.leq[b1, b0]) or (A.leq[a1, a0] and B.leq[b0, b1]))


def mixed_tensor(A, B, a0: int, b0: int, a1: int, b1: int) -> BiIdeal:
    A, B = _as_semilattice(A), _as_semilattice(B)
    if not is_mixed_pair(A, B, a0, b0, a1, b1):
        raise NotComparablePair(f"({a0},{b0}) and ({a1},{b1}) are not oppositely comparable")
    return biideal_join(pure_tensor(A, B, a0, b0), pure_tensor(A, B, a1, b1))


def minimal_cap(I: BiIdeal) -> Cap:
    """Maximal elements of I outside nabla."""
    ops = I.ops
    cells = [c for c in ops.maximal_cells(I.mask) if not ops.nabla >> c & 1]
    return Cap(tuple(sorted(ops.pair(c) for c in cells)))


def cap_label(A, B, cap: Cap) -> str:
    if not cap.pairs:
        return "∇"
    return " ∪ ".join(f"{A.labels[x]}⊗{B.labels[y]}" for x, y in cap.pairs)


def tables_from_containment(masks: Sequence[int], ncells: int):
    """Containment order, join and meet tables of a family of bi-ideals closed under
    both operations (the join is the smallest upper bound, the meet the largest lower one)."""
    n = len(masks)
    G = np.zeros((n, ncells), dtype=np.float32)
    for i, m in enumerate(masks):
        for c in range(ncells):
            if m >> c & 1:
                G[i, c] = 1.0
    outside = (G @ (1.0 - G).T)  # [i, j] = |I_i \ I_j|
    leq = outside == 0
    join, meet = lattice_tables(leq)
    return leq, join, meet


@dataclass(frozen=True, eq=False)
class TensorAlgebra:
    """All bi-ideals of A x B, canonically ordered, with containment order and tables."""

    A: FinJoinSemilattice
    B: FinJoinSemilattice
    masks: tuple
    leq: np.ndarray
    join: np.ndarray
    meet: np.ndarray
    pure_index: dict
    lattice_factors: Optional[tuple] = None

    @property
    def size(self) -> int:
        return len(self.masks)

    @property
    def ops(self) -> GridOps:
        return grid_ops(self.A, self.B)

    @property
    def elements(self) -> list[BiIdeal]:
        return [BiIdeal(self.A, self.B, m) for m in self.masks]

    def element(self, i: int) -> BiIdeal:
        return BiIdeal(self.A, self.B, self.masks[i])

    @cached_property
    def _mask_index(self) -> dict:
        return {m: i for i, m in enumerate(self.masks)}

    def index_of(self, I) -> int:
        m = I.mask if isinstance(I, BiIdeal) else I
        return self._mask_index[m]

    def pure(self, a: int, b: int) -> int:
        return self.pure_index[(a, b)]

    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def labels(self) -> tuple:
        return tuple(cap_label(self.A, self.B, minimal_cap(I)) for I in self.elements)

    @cached_property
    def semilattice(self) -> FinJoinSemilattice:
        return FinJoinSemilattice(self.labels, 0, self.join)

    @cached_property
    def lattice(self) -> FinLattice:
        return FinLattice(FinPoset(self.labels, self.leq), 0, self.size - 1, self.meet, self.join)

    def cap(self, i: int) -> Cap:
        return minimal_cap(self.element(i))

    def __repr__(self):
        return f"TensorAlgebra({self.A.size}x{self.B.size}, size={self.size})"


def enumerate_biideal_masks(A: FinJoinSemilattice, B: FinJoinSemilattice,
                            max_size: int = DEFAULT_MAX_SIZE) -> list[int]:
    """Close the pure tensors under binary join with a worklist."""
    ops = grid_ops(A, B)
    pures = sorted({ops.nabla | ops.down[ops.cell(a, b)] for a in range(A.size) for b in range(B.size)})
    seen = set(pures)
    if len(seen) > max_size:
        raise SizeGuardExceeded(max_size, len(seen))
    work = list(pures)
    while work:
        m = work.pop()
        for p in pures:
            if p & m == p:
                continue
            k = ops.close(m | p)
            if k not in seen:
                seen.add(k)
                if len(seen) > max_size:
                    raise SizeGuardExceeded(max_size, len(seen))
                work.append(k)
    return sorted(seen, key=lambda m: (bin(m).count("1"), ops.bitstring(m)))


def tensor_product(A, B, max_size: int = DEFAULT_MAX_SIZE) -> TensorAlgebra:
    factors = (A, B) if isinstance(A, FinLattice) and isinstance(B, FinLattice) else None
    A, B = _as_semilattice(A), _as_semilattice(B)
    masks = enumerate_biideal_masks(A, B, max_size)
    ops = grid_ops(A, B)
    leq, join, meet = tables_from_containment(masks, ops.ncells)
    index = {m: i for i, m in enumerate(masks)}
    pure = {(a, b): index[ops.nabla | ops.down[ops.cell(a, b)]]
            for a in range(A.size) for b in range(B.size)}
    return TensorAlgebra(A, B, tuple(masks), frozen_array(leq), frozen_array(join),
                         frozen_array(meet), pure, factors)


# -- bimorphisms and maps ---------------------------------------------------------

def bimorphism_violation(A, B, C, f) -> Optional[tuple]:
    """First violated bimorphism law as (law, witness), or None."""
    A, B, C = _as_semilattice(A), _as_semilattice(B), _as_semilattice(C)
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (A.size, B.size):
        raise DimensionMismatch(f"bimorphism table has shape {f.shape}")
    for a in range(A.size):
        if f[a, B.zero] != C.zero:
            return ("f(a,0) = 0", (a, B.zero, None))
    for b in range(B.size):
        if f[A.zero, b] != C.zero:
            return ("0 = f(0,b)", (A.zero, b, None))
    for b in range(B.size):
        col = f[:, b]
        lhs = col[A.join]
        rhs = C.join[np.ix_(col, col)]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a0, a1 = bad[0]
            return ("join in first variable", (int(a0), int(a1), b))
    for a in range(A.size):
        row = f[a]
        lhs = row[B.join]
        rhs = C.join[np.ix_(row, row)]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            b0, b1 = bad[0]
            return ("join in second variable", (a, int(b0), int(b1)))
    return None


def lift_bimorphism(A, B, C, f, T: Optional[TensorAlgebra] = None) -> SemilatticeMap:
    """The {v,0}-homomorphism g on A (x) B with g(a (x) b) = f(a, b): g(I) joins f over I."""
    violation = bimorphism_violation(A, B, C, f)
    if violation is not None:
        law, witness = violation
        raise NotABimorphism(witness, law)
    A, B, C = _as_semilattice(A), _as_semilattice(B), _as_semilattice(C)
    f = np.asarray(f, dtype=np.int64)
    T = T if T is not None else tensor_product(A, B)
    ops = T.ops
    flat = f.reshape(-1)
    image = []
    for m in T.masks:
        v = C.zero
        for c in ops.cells(m):
            v = int(C.join[v, flat[c]])
        image.append(v)
    return SemilatticeMap(T.semilattice, C, image)


def tensor_of_maps(f: SemilatticeMap, g: SemilatticeMap,
                   T: Optional[TensorAlgebra] = None,
                   T2: Optional[TensorAlgebra] = None,
                   max_size: int = DEFAULT_MAX_SIZE) -> SemilatticeMap:
    """f (x) g: each bi-ideal I goes to the hereditary set generated by (f x g)(I), with nabla."""
    if not is_l_homomorphism(f):
        raise NotLHomomorphism("f")
    if not is_l_homomorphism(g):
        raise NotLHomomorphism("g")
    T = T if T is not None else tensor_product(f.source, g.source, max_size)
    T2 = T2 if T2 is not None else tensor_product(f.target, g.target, max_size)
    ops, ops2 = T.ops, T2.ops
    cell_image = [ops2.down[ops2.cell(f.image[x], g.image[y])]
                  for x in range(f.source.size) for y in range(g.source.size)]
    image = []
    for m in T.masks:
        h = ops2.nabla
        for c in ops.cells(m):
            h |= cell_image[c]
        image.append(T2.index_of(h))
    return SemilatticeMap(T.semilattice, T2.semilattice, image)
