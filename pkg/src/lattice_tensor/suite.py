"""Runs every invariant over a catalog selection and collects Reports."""
from __future__ import annotations

import itertools
from typing import Callable, Sequence

from . import checks
from .congruence import congruence_lattice, quotient_lattice
from .errors import SizeGuardExceeded
from .io import load_lattice
from .order import DEFAULT_MAX_SIZE
from .semilattice import canonical_blocks
from .tensor import tensor_product
from .theorem import (
    LatticeCongruence,
    Report,
    epsilon_setup,
    full_sub_tensor_product,
    verify_embedding,
    verify_isomorphism,
    verify_quotient_factorization,
)

DEFAULT_CATALOG = ("chain:2", "chain:3", "chain:4", "bool:2", "M3", "N5")

LATTICE_CHECKS: dict[str, tuple[Callable, str]] = {
    "lattice_laws": (checks.check_lattice_laws, "meet and join tables satisfy the lattice laws"),
    "dual_involution": (checks.check_dual_involution, "dual is an involution"),
    "distributivity_agreement": (checks.check_distributivity_agreement,
                                 "semilattice and lattice distributivity tests agree"),
    "congruences": (checks.check_con, "Con L is a distributive lattice of compatible partitions"),
}


def _report(check, pair, witness, sizes, reference) -> Report:
    return Report(check, tuple(pair), "pass" if witness is None else "fail",
                  _jsonable(witness), sizes, reference)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def lattice_reports(name: str, L) -> list[Report]:
    out = []
    for check, (fn, ref) in LATTICE_CHECKS.items():
        out.append(_report(check, [name], fn(L), {"L": L.size}, ref))
    return out


def pair_reports(a: str, A, b: str, B, max_size: int = DEFAULT_MAX_SIZE) -> list[Report]:
    pair = [a, b]
    T = tensor_product(A, B, max_size)
    C = full_sub_tensor_product(T)
    sizes = {"A": A.size, "B": B.size, "tensor": T.size}
    out = []

    def add(check, witness, ref):
        out.append(_report(check, pair, witness, sizes, ref))

    add("biideal_tables", checks.check_biideal_tables(T),
        "elements are bi-ideals; join is closure of union, meet is intersection")
    add("staged_closure", checks.check_staged_closure(T),
        "worklist closure equals the staged hereditary/lateral-join closure")
    add("pure_tensor_identities", checks.check_pure_tensor_identities(T, A, B),
        "pure tensor meets are pure; joins are four-fold unions; mixed joins are unions")
    add("mixed_distributive", checks.check_mixed_distributive(T),
        "(I v J) ^ H = (I ^ H) v (J ^ H) for mixed pairs")
    add("atoms", checks.check_atoms(T), "atoms of A (x) B are the pure tensors of atoms")
    add("capped", checks.check_capped(T), "every bi-ideal is regenerated by its minimal cap")
    add("commutative", checks.check_commutative(A, B, T), "A (x) B ~ B (x) A")
    add("distributivity_preserved", checks.check_distributivity_preserved(T),
        "tensor of distributive semilattices is distributive")
    add("pure_bimorphism", checks.check_pure_bimorphism(C), "(a, b) -> a (x) b is a bimorphism into C")
    add("sub_tensor", checks.check_sub_tensor_arithmetic(C),
        "A (x) B is a sub-tensor product with the expected arithmetic")

    bat = checks.CongruenceBattery(A, B, C)
    add("box_congruence", bat.check_box_is_congruence(), "alpha box beta is a lattice congruence")
    add("epsilon_laws", bat.check_epsilon_laws(), "epsilon_A, epsilon_B are {v,0,1}-homomorphisms")
    add("odot_bimorphism", bat.check_odot_bimorphism(), "odot_C is a bimorphism Con A x Con B -> Con C")
    add("decomposition", bat.check_decomposition(),
        "alpha x_C beta = (alpha odot iota) v (iota odot beta)")
    add("containment", bat.check_containment(),
        "alpha odot beta <= alpha' x_C beta' iff alpha <= alpha' or beta <= beta'")
    add("principal_formula", bat.check_principal_formula(),
        "Theta(a,a') odot Theta(b,b') = Theta_C((a (x) b') v (a' (x) b), a' (x) b')")

    data = epsilon_setup(A, B, C, max_size)
    add("cap_independence", checks.check_cap_independence(data),
        "epsilon_C does not depend on the chosen cap")
    out.append(verify_embedding(A, B, C, tuple(pair), data))
    out.append(verify_isomorphism(A, B, C, tuple(pair), data)[0])

    conA, conB = bat.conA, bat.conB
    witness = None
    for pa, pb in itertools.product(conA.partitions, conB.partitions):
        r = verify_quotient_factorization(A, B, LatticeCongruence(A, pa), LatticeCongruence(B, pb),
                                          tuple(pair), max_size)
        if not r.passed:
            witness = {"alpha": list(pa), "beta": list(pb)}
            break
    add("quotient", witness, "(A (x) B)/(alpha box beta) ~ (A/alpha) (x) (B/beta)")

    fs = [canonical_blocks(p) for p in conA.partitions]
    gs = [canonical_blocks(p) for p in conB.partitions]
    A2 = [quotient_lattice(A, LatticeCongruence(A, p))[0].join_reduct for p in conA.partitions]
    B2 = [quotient_lattice(B, LatticeCongruence(B, p))[0].join_reduct for p in conB.partitions]
    add("kernel_law", checks.kernel_law_violations(T, fs, gs, A2, B2),
        "ker(f (x) g) = ker f box ker g for the canonical projections")
    return out


def sort_reports(reports: Sequence[Report]) -> list[Report]:
    return sorted(reports, key=lambda r: (r.check, [str(p) for p in r.pair]))


def run_suite(specs: Sequence[str] = DEFAULT_CATALOG, max_size: int = DEFAULT_MAX_SIZE) -> list[Report]:
    """All lattice checks for every selected structure and all pair checks for every
    ordered pair. Raises SizeGuardExceeded if some construction exceeds the guard."""
    loaded = [load_lattice(s if s.startswith("@") or s.endswith(".json") else "@" + s) for s in specs]
    reports: list[Report] = []
    for name, L in loaded:
        if L.size > max_size:
            raise SizeGuardExceeded(max_size, L.size)
        reports.extend(lattice_reports(name, L))
    for (a, A), (b, B) in itertools.product(loaded, loaded):
        reports.extend(pair_reports(a, A, b, B, max_size))
    return sort_reports(reports)
