"""Sub-tensor products, box congruences, the epsilon maps and the congruence
embedding/isomorphism checks for finite factors."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .congruence import (
    ConLattice,
    LatticeCongruence,
    congruence_lattice,
    iota,
    omega,
    partition_join_all,
    partition_meet,
    quotient_lattice,
)
from .errors import CarrierMismatch, NotComparable
from .order import DEFAULT_MAX_SIZE, FinLattice, FinPoset, IsoWitness, are_isomorphic, lattice_tables
from .semilattice import FinJoinSemilattice, JoinCongruence, canonical_blocks
from .tensor import TensorAlgebra, is_mixed_pair, minimal_cap, tensor_product


@dataclass(frozen=True)
class Report:
    check: str
    pair: tuple
    status: str
    witness: object = None
    sizes: dict = field(default_factory=dict)
    reference: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "pair": list(self.pair),
            "status": self.status,
            "witness": self.witness,
            "sizes": dict(sorted(self.sizes.items())),
            "reference": self.reference,
        }


# -- sub-tensor products ----------------------------------------------------------

def mixed_tensor_indices(T: TensorAlgebra) -> set[int]:
    A, B = T.A, T.B
    out = set()
    for a0 in range(A.size):
        for a1 in range(A.size):
            if not A.leq[a0, a1]:
                continue
            for b1 in range(B.size):
                for b0 in range(B.size):
                    if B.leq[b1, b0]:
                        out.add(int(T.join[T.pure(a0, b0), T.pure(a1, b1)]))
    return out


def sub_tensor_failure(T: TensorAlgebra, member: Sequence[int]) -> Optional[str]:
    """First failing sub-tensor condition, or None when all hold."""
    mem = sorted(set(int(i) for i in member))
    mset = set(mem)
    missing = mixed_tensor_indices(T) - mset
    if missing:
        return f"mixed tensor missing: {T.labels[min(missing)]}"
    for i in mem:
        for j in mem:
            if int(T.meet[i, j]) not in mset:
                return f"not closed under intersection: {T.labels[i]} and {T.labels[j]}"
    sub = T.leq[np.ix_(mem, mem)]
    from .errors import NotALattice
    try:
        lattice_tables(sub)
    except NotALattice as exc:
        i, j = exc.pair
        return f"not a lattice: {T.labels[mem[i]]} and {T.labels[mem[j]]} lack a {exc.missing}"
    return None


def is_sub_tensor_product(T: TensorAlgebra, member: Sequence[int]) -> bool:
    return sub_tensor_failure(T, member) is None


@dataclass(frozen=True, eq=False)
class SubTensorProduct:
    """A member subset of a tensor algebra; local index k refers to algebra element members[k]."""

    algebra: TensorAlgebra
    members: tuple
    leq: np.ndarray
    join: np.ndarray
    meet: np.ndarray

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def A(self) -> FinJoinSemilattice:
        return self.algebra.A

    @property
    def B(self) -> FinJoinSemilattice:
        return self.algebra.B

    @cached_property
    def _local(self) -> dict:
        return {g: k for k, g in enumerate(self.members)}

    def local(self, global_index: int) -> int:
        return self._local[global_index]

    def pure(self, a: int, b: int) -> int:
        return self._local[self.algebra.pure(a, b)]

    @cached_property
    def masks(self) -> tuple:
        return tuple(self.algebra.masks[g] for g in self.members)

    @cached_property
    def lattice(self) -> FinLattice:
        labels = tuple(self.algebra.labels[g] for g in self.members)
        return FinLattice(FinPoset(labels, self.leq), 0, self.size - 1, self.meet, self.join)

    @cached_property
    def con(self) -> ConLattice:
        return congruence_lattice(self.lattice)


def sub_tensor_product(T: TensorAlgebra, member: Sequence[int]) -> SubTensorProduct:
    failure = sub_tensor_failure(T, member)
    if failure is not None:
        raise ValueError(failure)
    mem = sorted(set(int(i) for i in member))
    leq = T.leq[np.ix_(mem, mem)]
    join, meet = lattice_tables(leq)
    return SubTensorProduct(T, tuple(mem), leq, join, meet)


def full_sub_tensor_product(T: TensorAlgebra) -> SubTensorProduct:
    mem = tuple(range(T.size))
    return SubTensorProduct(T, mem, T.leq, T.join, T.meet)


@dataclass(frozen=True)
class CongruencePair:
    alpha: LatticeCongruence
    beta: LatticeCongruence


# -- box congruences and the epsilon maps ---------------------------------------

def _check_carrier(C: SubTensorProduct, alpha_blocks=None, beta_blocks=None):
    na = C.A.size if alpha_blocks is None else len(alpha_blocks)
    nb = C.B.size if beta_blocks is None else len(beta_blocks)
    if (na, nb) != (C.A.size, C.B.size):
        raise CarrierMismatch(f"congruences on sizes {na}, {nb} "
                              f"do not match factors of sizes {C.A.size}, {C.B.size}")


def block_pair_signatures(C: SubTensorProduct, alpha_blocks, beta_blocks) -> list[frozenset]:
    """For each member, the set of (alpha-block, beta-block) pairs met by its cells."""
    nb = C.B.size
    cell_pair = [(alpha_blocks[c // nb], beta_blocks[c % nb]) for c in range(C.A.size * nb)]
    ops = C.algebra.ops
    return [frozenset(cell_pair[c] for c in ops.cells(m)) for m in C.masks]


def box_partition(C: SubTensorProduct, alpha_blocks, beta_blocks) -> tuple:
    """H and K are related iff every cell of each is matched, up to alpha and beta,
    by a cell of the other; i.e. both meet the same (alpha-block, beta-block) pairs."""
    sig = block_pair_signatures(C, alpha_blocks, beta_blocks)
    return canonical_blocks(sig)


def box_relation_direct(C: SubTensorProduct, alpha_blocks, beta_blocks) -> np.ndarray:
    """The defining biconditional evaluated cell by cell for every member pair."""
    ops = C.algebra.ops
    nb = C.B.size
    cells = [[divmod(c, nb) for c in ops.cells(m)] for m in C.masks]

    def covered(H, K):
        return all(any(alpha_blocks[x] == alpha_blocks[x2] and beta_blocks[y] == beta_blocks[y2]
                       for x2, y2 in K) for x, y in H)

    n = C.size
    R = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i, n):
            R[i, j] = R[j, i] = covered(cells[i], cells[j]) and covered(cells[j], cells[i])
    return R


def box_congruence(C: SubTensorProduct, p: CongruencePair) -> JoinCongruence:
    _check_carrier(C, p.alpha.block_of, p.beta.block_of)
    return JoinCongruence(C.lattice.join_reduct, box_partition(C, p.alpha.block_of, p.beta.block_of))


def epsilon_A(C: SubTensorProduct, alpha: LatticeCongruence) -> JoinCongruence:
    _check_carrier(C, alpha_blocks=alpha.block_of)
    return JoinCongruence(C.lattice.join_reduct,
                          box_partition(C, alpha.block_of, tuple(range(C.B.size))))


def epsilon_B(C: SubTensorProduct, beta: LatticeCongruence) -> JoinCongruence:
    _check_carrier(C, beta_blocks=beta.block_of)
    return JoinCongruence(C.lattice.join_reduct,
                          box_partition(C, tuple(range(C.A.size)), beta.block_of))


def odot_partition(C: SubTensorProduct, alpha_blocks, beta_blocks) -> tuple:
    ea = box_partition(C, alpha_blocks, tuple(range(C.B.size)))
    eb = box_partition(C, tuple(range(C.A.size)), beta_blocks)
    return partition_meet(ea, eb)


def odot(C: SubTensorProduct, p: CongruencePair) -> LatticeCongruence:
    _check_carrier(C, p.alpha.block_of, p.beta.block_of)
    return LatticeCongruence(C.lattice, odot_partition(C, p.alpha.block_of, p.beta.block_of))


def projection_relation(C: SubTensorProduct, gamma, b: int, b2: int) -> np.ndarray:
    """x R y iff ((x v y) (x) b) v_C ((x ^ y) (x) b') is gamma-related to (x v y) (x) b'."""
    B = C.B
    if not B.leq[b, b2]:
        raise NotComparable(f"{B.labels[b]} is not below {B.labels[b2]}")
    if len(gamma.block_of) != C.size:
        raise CarrierMismatch("gamma is not a congruence of the sub-tensor product")
    A = C.A
    lab = gamma.block_of
    Ameet = A.meet
    n = A.size
    R = np.zeros((n, n), dtype=bool)
    for x in range(n):
        for y in range(n):
            u, v = int(A.join[x, y]), int(Ameet[x, y])
            lhs = int(C.join[C.pure(u, b), C.pure(v, b2)])
            R[x, y] = lab[lhs] == lab[C.pure(u, b2)]
    return R


def projection_congruence(C: SubTensorProduct, gamma, b: int, b2: int,
                          A: Optional[FinLattice] = None) -> LatticeCongruence:
    R = projection_relation(C, gamma, b, b2)
    if not (R.diagonal().all() and (R == R.T).all()
            and not (((R.astype(np.int32) @ R.astype(np.int32)) > 0) & ~R).any()):
        raise ValueError("projection relation is not an equivalence")
    first = R.argmax(axis=1)
    carrier = A if A is not None else _lattice_of(C.A)
    return LatticeCongruence(carrier, first.tolist())


def _lattice_of(S: FinJoinSemilattice) -> FinLattice:
    return FinLattice(S.as_poset(), S.zero, int(np.flatnonzero(S.leq.all(axis=0))[0]), S.meet, S.join)


# -- the epsilon map on Con A (x) Con B ----------------------------------------------

@dataclass(frozen=True, eq=False)
class EpsilonData:
    C: SubTensorProduct
    con_A: ConLattice
    con_B: ConLattice
    con_tensor: TensorAlgebra
    odots: dict  # (i, j) -> partition of C
    image: np.ndarray  # element of con_tensor -> index in C.con


def epsilon_setup(A: FinLattice, B: FinLattice, C: SubTensorProduct,
                  max_size: int = DEFAULT_MAX_SIZE) -> EpsilonData:
    con_A, con_B = congruence_lattice(A), congruence_lattice(B)
    if A.size != C.A.size or B.size != C.B.size:
        raise CarrierMismatch("factor lattices do not match the sub-tensor product")
    CT = tensor_product(con_A.semilattice, con_B.semilattice, max_size)
    odots = {(i, j): odot_partition(C, pa, pb)
             for i, pa in enumerate(con_A.partitions)
             for j, pb in enumerate(con_B.partitions)}
    image = np.array([epsilon_partition_index(C, CT, odots, k) for k in range(CT.size)],
                     dtype=np.int64)
    return EpsilonData(C, con_A, con_B, CT, odots, image)


def epsilon_partition(C: SubTensorProduct, CT: TensorAlgebra, odots: dict, k: int,
                      cap: Optional[Sequence] = None) -> tuple:
    """Join in Con C of the odots over a cap of element k of the congruence tensor."""
    pairs = minimal_cap(CT.element(k)).pairs if cap is None else cap
    return partition_join_all((odots[p] for p in pairs), C.size)


def epsilon_partition_index(C, CT, odots, k, cap=None) -> int:
    return C.con.index_of(epsilon_partition(C, CT, odots, k, cap))


def epsilon_map(C: SubTensorProduct, xi: int, data: Optional[EpsilonData] = None,
                A: Optional[FinLattice] = None, B: Optional[FinLattice] = None) -> LatticeCongruence:
    if data is None:
        data = epsilon_setup(A if A is not None else _lattice_of(C.A),
                             B if B is not None else _lattice_of(C.B), C)
    return C.con.congruences[int(data.image[xi])]


def _embedding_failure(data: EpsilonData) -> Optional[tuple]:
    CT, conC, E = data.con_tensor, data.C.con, data.image
    if E[CT.zero] != conC.bottom:
        return ("zero not preserved", [CT.labels[CT.zero]])
    lhs = E[np.asarray(CT.join)]
    rhs = np.asarray(conC.join)[np.ix_(E, E)]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        i, j = bad[0]
        return ("join not preserved", [CT.labels[i], CT.labels[j]])
    seen: dict[int, int] = {}
    for k, v in enumerate(E.tolist()):
        if v in seen:
            return ("not injective", [CT.labels[seen[v]], CT.labels[k]])
        seen[v] = k
    return None


def _pair_names(A, B):
    return (getattr(A, "name", None) or f"|A|={A.size}", getattr(B, "name", None) or f"|B|={B.size}")


def verify_embedding(A: FinLattice, B: FinLattice, C: SubTensorProduct,
                     pair: Optional[tuple] = None, data: Optional[EpsilonData] = None) -> Report:
    data = data if data is not None else epsilon_setup(A, B, C)
    failure = _embedding_failure(data)
    sizes = {"con_tensor": data.con_tensor.size, "con_C": data.C.con.size, "C": C.size}
    pair = pair or _pair_names(A, B)
    if failure:
        law, wit = failure
        return Report("embed", pair, "fail", {"law": law, "elements": wit}, sizes,
                      "epsilon_C is a {v,0}-embedding")
    return Report("embed", pair, "pass", None, sizes, "epsilon_C is a {v,0}-embedding")


def verify_isomorphism(A: FinLattice, B: FinLattice, C: SubTensorProduct,
                       pair: Optional[tuple] = None, data: Optional[EpsilonData] = None):
    """Returns (Report, IsoWitness or None)."""
    data = data if data is not None else epsilon_setup(A, B, C)
    pair = pair or _pair_names(A, B)
    sizes = {"con_tensor": data.con_tensor.size, "con_C": data.C.con.size, "C": C.size}
    ref = "epsilon_C: Con_c A (x) Con_c B -> Con_c C is an isomorphism"
    ops = C.algebra.ops
    for m in C.masks:
        cap = [c for c in ops.maximal_cells(m) if not ops.nabla >> c & 1]
        regen = ops.nabla
        for c in cap:
            regen |= ops.down[c]
        if regen != m:
            return Report("iso", pair, "fail", {"law": "uncapped member", "elements": [ops.bitstring(m)]},
                          sizes, ref), None
    failure = _embedding_failure(data)
    if failure is None and data.con_tensor.size != data.C.con.size:
        missing = sorted(set(range(data.C.con.size)) - set(data.image.tolist()))
        failure = ("not surjective", [data.C.con.labels[missing[0]]])
    if failure:
        law, wit = failure
        return Report("iso", pair, "fail", {"law": law, "elements": wit}, sizes, ref), None
    return Report("iso", pair, "pass", None, sizes, ref), IsoWitness(tuple(data.image.tolist()))


def verify_quotient_factorization(A: FinLattice, B: FinLattice, alpha: LatticeCongruence,
                                  beta: LatticeCongruence, pair: Optional[tuple] = None,
                                  max_size: int = DEFAULT_MAX_SIZE) -> Report:
    """(A (x) B) / (alpha box beta) is isomorphic to (A/alpha) (x) (B/beta)."""
    T = tensor_product(A, B, max_size)
    C = full_sub_tensor_product(T)
    box = box_congruence(C, CongruencePair(alpha, beta))
    from .semilattice import quotient_semilattice
    left, _ = quotient_semilattice(T.semilattice, box)
    QA, _ = quotient_lattice(A, alpha)
    QB, _ = quotient_lattice(B, beta)
    right = tensor_product(QA, QB, max_size).semilattice
    w = are_isomorphic(left, right)
    sizes = {"left": left.size, "right": right.size}
    pair = pair or _pair_names(A, B)
    ref = "(A (x) B)/(alpha box beta) ~ (A/alpha) (x) (B/beta)"
    if w is None:
        return Report("quotient", pair, "fail", {"law": "no isomorphism"}, sizes, ref)
    return Report("quotient", pair, "pass", None, sizes, ref)
