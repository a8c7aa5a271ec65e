"""Invariant checks. Each returns None on success or a small witness describing
the first violation; the suite runner and the tests share them."""
from __future__ import annotations

import itertools
from typing import Optional

import numpy as np

from .congruence import (
    ConLattice,
    congruence_lattice,
    cover_principal_partitions,
    is_lattice_compatible,
    partition_join,
    partition_join_all,
    partition_meet,
    principal_congruence,
    refines,
)
from .order import (
    FinLattice,
    are_isomorphic,
    atoms,
    dual,
    is_distributive_lattice,
    lattice_law_violations,
)
from .semilattice import (
    FinJoinSemilattice,
    SemilatticeMap,
    canonical_blocks,
    homomorphisms,
    is_distributive_semilattice,
    is_l_homomorphism,
)
from .tensor import TensorAlgebra, bimorphism_violation, is_mixed_pair, tensor_product
from .theorem import (
    SubTensorProduct,
    box_partition,
    epsilon_partition,
    odot_partition,
    sub_tensor_failure,
)


# -- single lattices ------------------------------------------------------------

def check_lattice_laws(L: FinLattice):
    bad = lattice_law_violations(L)
    return bad or None


def check_dual_involution(L: FinLattice):
    D = dual(dual(L))
    same = (D.labels == L.labels and np.array_equal(D.leq, L.leq)
            and np.array_equal(D.join, L.join) and np.array_equal(D.meet, L.meet))
    return None if same else "dual(dual(L)) differs from L"


def check_distributivity_agreement(L: FinLattice):
    a, b = is_distributive_lattice(L), is_distributive_semilattice(L.join_reduct)
    return None if a == b else {"lattice": a, "semilattice": b}


def check_con(L: FinLattice, con: Optional[ConLattice] = None):
    """Compatibility, distributivity, least-collapse and cover-join reconstruction."""
    con = con if con is not None else congruence_lattice(L)
    for p in con.partitions:
        if not is_lattice_compatible(L, p):
            return {"law": "not compatible", "congruence": list(p)}
    if not is_distributive_lattice(con.lattice):
        return {"law": "Con L not distributive"}
    if con.partitions[0] != tuple(range(L.size)) or max(con.partitions[-1]) != 0:
        return {"law": "bottom/top are not omega/iota"}
    for a in range(L.size):
        for b in range(a + 1, L.size):
            theta = principal_congruence(L, a, b).block_of
            holders = [p for p in con.partitions if p[a] == p[b]]
            if theta not in holders or not all(refines(theta, p) for p in holders):
                return {"law": "principal congruence is not least", "pair": [a, b]}
    gens = cover_principal_partitions(L)
    for p in con.partitions:
        below = [g for g in gens if refines(g, p)]
        if partition_join_all(below, L.size) != p:
            return {"law": "not a join of cover principals", "congruence": list(p)}
    return None


# -- tensor algebras --------------------------------------------------------------

def check_biideal_tables(T: TensorAlgebra):
    ops = T.ops
    for i, m in enumerate(T.masks):
        if not ops.is_biideal(m):
            return {"law": "not a bi-ideal", "element": T.labels[i]}
    n = T.size
    for i in range(n):
        mi = T.masks[i]
        for j in range(i, n):
            mj = T.masks[j]
            if T.masks[T.join[i, j]] != ops.close(mi | mj):
                return {"law": "join is not closure of union", "elements": [T.labels[i], T.labels[j]]}
            if T.masks[T.meet[i, j]] != mi & mj:
                return {"law": "meet is not intersection", "elements": [T.labels[i], T.labels[j]]}
    if T.masks[0] != ops.nabla or T.masks[-1] != ops.full:
        return {"law": "bottom or top wrong"}
    return None


def check_staged_closure(T: TensorAlgebra):
    ops = T.ops
    pures = sorted(set(T.pure_index.values()))
    for i, j in itertools.combinations_with_replacement(pures, 2):
        u = T.masks[i] | T.masks[j]
        if ops.close(u) != ops.close_staged(u):
            return {"elements": [T.labels[i], T.labels[j]]}
    return None


def check_pure_tensor_identities(T: TensorAlgebra, A: FinLattice, B: FinLattice):
    """Pure tensor meets are pure; pure tensor joins are four-fold unions; mixed joins are unions."""
    na, nb = A.size, B.size
    P = T.pure
    masks = T.masks
    for a0, b0, a1, b1 in itertools.product(range(na), range(nb), range(na), range(nb)):
        I, J = P(a0, b0), P(a1, b1)
        if T.meet[I, J] != P(A.meet[a0, a1], B.meet[b0, b1]):
            return {"law": "meet of pure tensors", "pairs": [[a0, b0], [a1, b1]]}
        four = (masks[I] | masks[J] | masks[P(A.join[a0, a1], B.meet[b0, b1])]
                | masks[P(A.meet[a0, a1], B.join[b0, b1])])
        if masks[T.join[I, J]] != four:
            return {"law": "join of pure tensors", "pairs": [[a0, b0], [a1, b1]]}
        if is_mixed_pair(A, B, a0, b0, a1, b1) and masks[T.join[I, J]] != masks[I] | masks[J]:
            return {"law": "mixed tensor is not a union", "pairs": [[a0, b0], [a1, b1]]}
    return None


def mixed_pairs(T: TensorAlgebra):
    A, B = T.A, T.B
    out = set()
    for a0, b0, a1, b1 in itertools.product(range(A.size), range(B.size), range(A.size), range(B.size)):
        if is_mixed_pair(A, B, a0, b0, a1, b1):
            out.add(tuple(sorted((T.pure(a0, b0), T.pure(a1, b1)))))
    return sorted(out)


def check_mixed_distributive(T, join=None, meet=None):
    join = np.asarray(T.join if join is None else join)
    meet = np.asarray(T.meet if meet is None else meet)
    H = np.arange(join.shape[0])
    for I, J in mixed_pairs(T):
        lhs = meet[join[I, J], H]
        rhs = join[meet[I, H], meet[J, H]]
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            return {"I": T.labels[I], "J": T.labels[J], "H": int(bad[0])}
    return None


def check_atoms(T: TensorAlgebra):
    At = set(atoms(T.lattice))
    expected = {T.pure(a, b) for a in atoms(T.A) for b in atoms(T.B)}
    return None if At == expected else {"atoms": sorted(At), "pure atoms": sorted(expected)}


def check_capped(T: TensorAlgebra):
    from .tensor import minimal_cap
    for i in range(T.size):
        if minimal_cap(T.element(i)).regenerate(T.A, T.B).mask != T.masks[i]:
            return {"element": T.labels[i]}
    return None


def check_commutative(A, B, T: Optional[TensorAlgebra] = None):
    T = T if T is not None else tensor_product(A, B)
    T2 = tensor_product(B, A)
    return None if are_isomorphic(T.semilattice, T2.semilattice) is not None else {"sizes": [T.size, T2.size]}


def check_distributivity_preserved(T: TensorAlgebra):
    if is_distributive_semilattice(T.A) and is_distributive_semilattice(T.B):
        if not is_distributive_semilattice(T.semilattice):
            return "tensor of distributive factors is not distributive"
    return None


def check_pure_bimorphism(C: SubTensorProduct):
    """(a, b) -> a (x) b is a bimorphism with joins read in C."""
    A, B = C.A, C.B
    f = np.array([[C.pure(a, b) for b in range(B.size)] for a in range(A.size)])
    v = bimorphism_violation(A, B, C.lattice.join_reduct, f)
    return None if v is None else {"law": v[0], "witness": list(v[1])}


def check_sub_tensor_arithmetic(C: SubTensorProduct):
    failure = sub_tensor_failure(C.algebra, C.members)
    if failure:
        return {"law": failure}
    A, B = C.A, C.B
    ops = C.algebra.ops
    for a0, b0, a1, b1 in itertools.product(range(A.size), range(B.size), range(A.size), range(B.size)):
        I, J = C.pure(a0, b0), C.pure(a1, b1)
        if C.meet[I, J] != C.pure(A.meet[a0, a1], B.meet[b0, b1]):
            return {"law": "pure tensor meet", "pairs": [[a0, b0], [a1, b1]]}
        if is_mixed_pair(A, B, a0, b0, a1, b1) and C.masks[C.join[I, J]] != C.masks[I] | C.masks[J]:
            return {"law": "mixed join is not a union"}
    for k, m in enumerate(C.masks):
        v = 0
        for c in ops.cells(m):
            v = int(C.join[v, C.pure(*ops.pair(c))])
        if v != k:
            return {"law": "member is not a join of pure tensors", "member": k}
    return check_mixed_distributive(C.algebra, C.join, C.meet) if C.size == C.algebra.size else None


# -- congruence identities on (A, B, C) ------------------------------------------------

class CongruenceBattery:
    """Precomputed box, epsilon and odot partitions over Con A x Con B."""

    def __init__(self, A: FinLattice, B: FinLattice, C: SubTensorProduct):
        self.A, self.B, self.C = A, B, C
        self.conA, self.conB = congruence_lattice(A), congruence_lattice(B)
        PA, PB = self.conA.partitions, self.conB.partitions
        self.box = {(i, j): box_partition(C, pa, pb) for i, pa in enumerate(PA) for j, pb in enumerate(PB)}
        wa, wb = 0, 0  # omega is first in canonical order
        self.eA = [self.box[(i, wb)] for i in range(len(PA))]
        self.eB = [self.box[(wa, j)] for j in range(len(PB))]
        self.odot = {(i, j): partition_meet(self.eA[i], self.eB[j])
                     for i in range(len(PA)) for j in range(len(PB))}

    def _join(self, p, q):
        return partition_join(p, q)

    def check_box_is_congruence(self):
        L = self.C.lattice
        full = self.C.size == self.C.algebra.size
        for key, p in self.box.items():
            if not is_lattice_compatible(L, p) if full else not _join_compatible(self.C, p):
                return {"law": "box relation not compatible", "pair": list(key)}
        return None

    def check_epsilon_laws(self):
        conA, conB, n = self.conA, self.conB, self.C.size
        omega_c, iota_c = tuple(range(n)), tuple([0] * n)
        if self.eA[0] != omega_c or self.eB[0] != omega_c:
            return {"law": "epsilon(omega) != omega_C"}
        if self.eA[-1] != iota_c or self.eB[-1] != iota_c:
            return {"law": "epsilon(iota) != iota_C"}
        for side, con, eps in (("A", conA, self.eA), ("B", conB, self.eB)):
            for i in range(con.size):
                for j in range(con.size):
                    if eps[con.join[i, j]] != self._join(eps[i], eps[j]):
                        return {"law": f"epsilon_{side} does not preserve joins", "pair": [i, j]}
        return None

    def check_odot_bimorphism(self):
        conA, conB, n = self.conA, self.conB, self.C.size
        omega_c = tuple(range(n))
        for i in range(conA.size):
            for j in range(conB.size):
                if i == 0 or j == 0:
                    if self.odot[(i, j)] != omega_c:
                        return {"law": "odot with omega is not omega_C", "pair": [i, j]}
        for i in range(conA.size):
            for j0 in range(conB.size):
                for j1 in range(conB.size):
                    if self.odot[(i, conB.join[j0, j1])] != self._join(self.odot[(i, j0)], self.odot[(i, j1)]):
                        return {"law": "odot not join-preserving in beta", "pair": [i, j0, j1]}
        for j in range(conB.size):
            for i0 in range(conA.size):
                for i1 in range(conA.size):
                    if self.odot[(conA.join[i0, i1], j)] != self._join(self.odot[(i0, j)], self.odot[(i1, j)]):
                        return {"law": "odot not join-preserving in alpha", "pair": [i0, i1, j]}
        return None

    def check_decomposition(self):
        """alpha x_C beta = (alpha odot iota) v (iota odot beta)."""
        ta, tb = self.conA.size - 1, self.conB.size - 1
        for (i, j), p in self.box.items():
            if p != self._join(self.odot[(i, tb)], self.odot[(ta, j)]):
                return {"pair": [i, j]}
        return None

    def check_containment(self):
        """alpha odot beta <= alpha' x_C beta' iff alpha <= alpha' or beta <= beta'."""
        oa, ob = self.conA.order, self.conB.order
        keys = list(self.box)
        for (i, j) in keys:
            od = self.odot[(i, j)]
            for (k, l) in keys:
                lhs = refines(od, self.box[(k, l)])
                rhs = bool(oa[i, k] or ob[j, l])
                if lhs != rhs:
                    return {"alpha_beta": [i, j], "alpha'_beta'": [k, l], "contained": lhs}
        return None

    def check_principal_formula(self):
        """Theta(a,a') odot Theta(b,b') = Theta_C((a (x) b') v (a' (x) b), a' (x) b') for a <= a', b <= b'."""
        A, B, C = self.A, self.B, self.C
        conC = C.con
        for a, a2 in zip(*np.nonzero(A.leq)):
            ia = self.conA.principal_index(int(a), int(a2))
            for b, b2 in zip(*np.nonzero(B.leq)):
                ib = self.conB.principal_index(int(b), int(b2))
                top = C.pure(a2, b2)
                low = int(C.join[C.pure(a, b2), C.pure(a2, b)])
                rhs = conC.partitions[conC.principal_index(low, top)]
                if self.odot[(ia, ib)] != rhs:
                    return {"a": [int(a), int(a2)], "b": [int(b), int(b2)]}
        return None


def _join_compatible(C: SubTensorProduct, p) -> bool:
    lab = np.asarray(p)
    from .congruence import representatives
    rep = representatives(lab)
    return bool(np.array_equal(lab[C.join], lab[C.join[rep]]))


def check_cap_independence(data):
    """The epsilon join is unchanged when every off-nabla cell is used as the cap."""
    CT = data.con_tensor
    ops = CT.ops
    for k in range(CT.size):
        m = CT.masks[k]
        cap = [ops.pair(c) for c in ops.cells(m) if not ops.nabla >> c & 1]
        p = epsilon_partition(data.C, CT, data.odots, k, cap)
        if data.C.con.index_of(p) != data.image[k]:
            return {"element": CT.labels[k]}
    return None


# -- maps ---------------------------------------------------------------------------

def l_homomorphisms(S: FinJoinSemilattice, T: FinJoinSemilattice) -> list[tuple]:
    return [f for f in homomorphisms(S, T) if is_l_homomorphism(SemilatticeMap(S, T, f))]


def grid_stack(T: TensorAlgebra) -> np.ndarray:
    return np.stack([T.ops.grid(m) for m in T.masks]).astype(np.float32)


def _down_matrices(maps, targets, width) -> np.ndarray:
    """M[k, x, u] = [u <= f_k(x)], padded with zero columns to a common width."""
    out = np.zeros((len(maps), len(maps[0]), width), dtype=np.float32)
    for k, (f, S2) in enumerate(zip(maps, targets)):
        out[k, :, :S2.size] = S2.leq[:, list(f)].T
    return out


def _block_matrices(maps, width) -> np.ndarray:
    out = np.zeros((len(maps), len(maps[0]), width), dtype=np.float32)
    for k, f in enumerate(maps):
        out[k, np.arange(len(f)), list(canonical_blocks(f))] = 1.0
    return out


def _same_rows(X: np.ndarray) -> np.ndarray:
    """X: (..., t, d) 0/1; result[..., s, t] says rows s and t coincide."""
    d = X.shape[-1]
    agree = X @ np.swapaxes(X, -1, -2) + (1 - X) @ np.swapaxes(1 - X, -1, -2)
    return agree == d


def kernel_law_violations(T: TensorAlgebra, fs: list, gs: list, A2s: list, B2s: list):
    """For every f in fs (maps A -> A2s[k]) and g in gs (B -> B2s[l]), compare
    ker(f (x) g) with ker f box ker g. The image of I is the downset of
    (f x g)(I), i.e. the support of F^T I G with F[x, u] = [u <= f(x)]; box
    classes are the supports of P^T I Q with block indicator matrices P, Q."""
    G = grid_stack(T)
    t = G.shape[0]
    wa = max(S.size for S in A2s)
    wb = max(S.size for S in B2s)
    Fs = _down_matrices(fs, A2s, wa)
    Pfs = _block_matrices(fs, T.A.size)
    Gs = _down_matrices(gs, B2s, wb)
    Pgs = _block_matrices(gs, T.B.size)
    for k, f in enumerate(fs):
        XF = np.einsum("xu,txy->tuy", Fs[k], G)
        XP = np.einsum("xk,txy->tky", Pfs[k], G)
        img = (np.einsum("tuy,myv->mtuv", XF, Gs) > 0).reshape(len(gs), t, -1).astype(np.float32)
        box = (np.einsum("tky,myv->mtkv", XP, Pgs) > 0).reshape(len(gs), t, -1).astype(np.float32)
        diff = np.flatnonzero((_same_rows(img) != _same_rows(box)).any(axis=(1, 2)))
        if len(diff):
            return {"f": list(f), "g": list(gs[diff[0]])}
    return None


def meet_embedding_violation(T: TensorAlgebra, T2: TensorAlgebra, f, g):
    """f (x) g computed by downsets must be one-to-one and preserve meets."""
    ops, ops2 = T.ops, T2.ops
    cell_image = [ops2.down[ops2.cell(f[x], g[y])] for x in range(T.A.size) for y in range(T.B.size)]
    image = []
    for m in T.masks:
        h = ops2.nabla
        for c in ops.cells(m):
            h |= cell_image[c]
        image.append(T2.index_of(h))
    h = np.asarray(image)
    if len(set(image)) != len(image):
        return {"law": "not one-to-one"}
    bad = np.argwhere(h[np.asarray(T.meet)] != np.asarray(T2.meet)[np.ix_(h, h)])
    if len(bad):
        return {"law": "meet not preserved", "elements": bad[0].tolist()}
    return None
