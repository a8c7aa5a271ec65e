import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from lattice_tensor.errors import (
    CycleDetected,
    DuplicateLabel,
    NotALattice,
    NotDistributive,
    SizeGuardExceeded,
    UnknownCatalogName,
    UnknownLabel,
)
from lattice_tensor.order import (
    FinPoset,
    are_isomorphic,
    as_lattice,
    atoms,
    build_poset,
    catalog,
    dual,
    function_lattice,
    is_distributive_lattice,
    join_irreducibles,
    l_of_d,
    lattice_from_leq,
    lattice_law_violations,
    preserves_structure,
)

CATALOG = ["chain:1", "chain:2", "chain:3", "chain:5", "bool:0", "bool:1", "bool:2", "bool:3",
           "M3", "N5", "Mn:4", "Mn:5"]


def antichain(n):
    return FinPoset(tuple(f"p{i}" for i in range(n)), np.eye(n, dtype=bool))


def test_build_poset_examples():
    p = build_poset([0, 1], [(0, 1)])
    assert p.leq.tolist() == [[True, True], [False, True]]
    b2 = build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    assert b2.leq[b2.index("0"), b2.index("1")] and not b2.leq[b2.index("a"), b2.index("b")]
    with pytest.raises(CycleDetected):
        build_poset(["x", "y"], [("x", "y"), ("y", "x")])
    with pytest.raises(DuplicateLabel):
        build_poset(["x", "x"], [])
    with pytest.raises(UnknownLabel):
        build_poset(["x"], [("x", "z")])


def test_canonical_order_is_height_then_input():
    p = build_poset(["top", "b", "a", "bot"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
    assert p.labels == ("bot", "b", "a", "top")


def test_as_lattice_examples():
    b2 = as_lattice(build_poset(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]))
    a, b = b2.index("a"), b2.index("b")
    assert b2.labels[b2.meet[a, b]] == "0" and b2.labels[b2.join[a, b]] == "1"
    with pytest.raises(NotALattice) as exc:
        as_lattice(build_poset(["0", "a", "b"], [("0", "a"), ("0", "b")]))
    assert set(exc.value.pair) == {"a", "b"}
    m3 = catalog("M3")
    for x, y in itertools.permutations("pqr", 2):
        assert m3.labels[m3.join[m3.index(x), m3.index(y)]] == "1"
        assert m3.labels[m3.meet[m3.index(x), m3.index(y)]] == "0"


@pytest.mark.parametrize("name", CATALOG + ["chain:7", "Mn:7"])
def test_catalog_matches_oracle_tables(name):
    L, O = catalog(name), oracles.oracle_lattice(name)
    assert sorted(map(str, L.labels)) == sorted(map(str, O.labels))
    for x, y in itertools.product(O.labels, repeat=2):
        i, j = L.index(x), L.index(y)
        assert bool(L.leq[i, j]) == O.leq(x, y)
        assert L.labels[L.join[i, j]] == O.join(x, y)
        assert L.labels[L.meet[i, j]] == O.meet(x, y)
    assert lattice_law_violations(L) == []


def test_catalog_errors_and_prefix():
    with pytest.raises(UnknownCatalogName):
        catalog("K7")
    with pytest.raises(UnknownCatalogName):
        catalog("Mn:2")
    assert catalog("@chain:3").size == 3
    assert catalog("chain:3").labels == (0, 1, 2)
    assert catalog("bool:2").size == 4 and len(atoms(catalog("bool:2"))) == 2


def test_atoms_and_join_irreducibles():
    m3 = catalog("M3")
    assert sorted(m3.labels[i] for i in atoms(m3)) == ["p", "q", "r"]
    c3 = catalog("chain:3")
    assert [c3.labels[i] for i in atoms(c3)] == [1]
    assert len(atoms(catalog("bool:3"))) == 3
    ji = join_irreducibles(catalog("bool:2"))
    assert ji.size == 2 and not ji.leq[0, 1] and not ji.leq[1, 0]
    for n in range(2, 7):
        ji = join_irreducibles(catalog(f"chain:{n}"))
        assert ji.size == n - 1 and ji.leq[np.triu_indices(n - 1)].all()
    assert join_irreducibles(catalog("N5")).size == 3


@pytest.mark.parametrize("name,expected", [("bool:2", True), ("M3", False), ("N5", False),
                                           ("chain:4", True), ("bool:3", True), ("Mn:4", False)])
def test_distributivity(name, expected):
    assert is_distributive_lattice(catalog(name)) is expected
    O = oracles.oracle_lattice(name)
    brute = all(O.meet(x, O.join(y, z)) == O.join(O.meet(x, y), O.meet(x, z))
                for x, y, z in itertools.product(O.labels, repeat=3))
    assert brute is expected


@pytest.mark.parametrize("name", CATALOG)
def test_dual_is_involution(name):
    L = catalog(name)
    D2 = dual(dual(L))
    assert D2.labels == L.labels
    assert np.array_equal(D2.leq, L.leq) and np.array_equal(D2.join, L.join)
    assert np.array_equal(D2.meet, L.meet)
    D = dual(L)
    for i, j in itertools.product(range(L.size), repeat=2):
        assert D.leq[D.index(L.labels[i]), D.index(L.labels[j])] == L.leq[j, i]
    assert lattice_law_violations(D) == []


def test_dual_examples():
    assert are_isomorphic(dual(catalog("chain:3")), catalog("chain:3")) is not None
    n5 = catalog("N5")
    w = are_isomorphic(dual(n5), n5)
    assert w is not None
    assert oracles.isomorphic_by_permutation(5, oracles.leq_pairs(dual(n5).leq), oracles.leq_pairs(n5.leq))


def test_function_lattice_examples():
    c2 = catalog("chain:2")
    assert are_isomorphic(function_lattice(c2, antichain(2)), catalog("bool:2")) is not None
    for name in ["M3", "N5", "chain:3"]:
        L = catalog(name)
        assert are_isomorphic(function_lattice(L, antichain(1)), L) is not None
    c2p = FinPoset(("x", "y"), np.array([[True, True], [False, True]]))
    assert are_isomorphic(function_lattice(c2, c2p), catalog("chain:3")) is not None
    with pytest.raises(SizeGuardExceeded):
        function_lattice(catalog("chain:5"), antichain(6), max_size=1000)


@pytest.mark.parametrize("lname", ["chain:3", "M3", "N5"])
@pytest.mark.parametrize("pname", ["chain:3", "bool:2", "N5"])
def test_function_lattice_size_matches_brute_count(lname, pname):
    P = catalog(pname).poset
    F = function_lattice(catalog(lname), P)
    count = oracles.monotone_map_count(oracles.oracle_lattice(lname), list(range(P.size)),
                                       lambda p, q: bool(P.leq[p, q]))
    assert F.size == count
    assert lattice_law_violations(F) == []


def test_l_of_d_examples():
    M3 = catalog("M3")
    assert l_of_d(M3, catalog("bool:2")).size == 25
    for name in ["M3", "N5", "chain:3"]:
        L = catalog(name)
        assert are_isomorphic(l_of_d(L, catalog("chain:2")), L) is not None
    assert are_isomorphic(l_of_d(catalog("chain:2"), catalog("bool:2")), catalog("bool:2")) is not None
    with pytest.raises(NotDistributive):
        l_of_d(M3, catalog("N5"))


def test_isomorphism_examples():
    w = are_isomorphic(catalog("chain:3"), catalog("chain:3"))
    assert w.mapping == (0, 1, 2)
    assert are_isomorphic(catalog("M3"), catalog("N5")) is None
    assert are_isomorphic(catalog("bool:2"), catalog("chain:4")) is None


def _lattices(max_n):
    return [lattice_from_leq(list(range(n)), np.array(g)) for n, g in oracles.all_lattices(max_n)]


def test_isomorphism_agrees_with_permutation_search():
    lats = _lattices(6)
    for X, Y in itertools.product(lats, repeat=2):
        if X.size != Y.size:
            continue
        w = are_isomorphic(X, Y)
        brute = oracles.isomorphic_by_permutation(X.size, oracles.leq_pairs(X.leq), oracles.leq_pairs(Y.leq))
        assert (w is not None) == brute
        if w is not None:
            assert preserves_structure(X, Y, w.mapping)
            assert preserves_structure(Y, X, w.inverse().mapping)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(oracles.all_lattices(6)))), st.randoms(use_true_random=False))
def test_isomorphism_invariant_under_relabelling(k, rnd):
    n, grid = oracles.all_lattices(6)[k]
    perm = list(range(n))
    rnd.shuffle(perm)
    g = np.array(grid)
    inv = np.argsort(perm)
    shuffled = g[np.ix_(inv, inv)]
    X = lattice_from_leq(list(range(n)), g)
    Y = lattice_from_leq([f"e{perm[i]}" for i in inv], shuffled)
    w = are_isomorphic(X, Y)
    assert w is not None and preserves_structure(X, Y, w.mapping)
    assert are_isomorphic(Y, X) is not None


@pytest.mark.parametrize("name", CATALOG)
def test_isomorphism_is_reflexive(name):
    L = catalog(name)
    w = are_isomorphic(L, L)
    assert w is not None and preserves_structure(L, L, w.mapping)
