import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from lattice_tensor.order import are_isomorphic, catalog, lattice_from_leq
from lattice_tensor.semilattice import (
    FinJoinSemilattice,
    JoinCongruence,
    SemilatticeMap,
    direct_sum,
    homomorphisms,
    identity_map,
    is_distributive_semilattice,
    is_l_congruence,
    is_l_homomorphism,
    join_reduct,
    kernel,
    one_element_semilattice,
    quotient_semilattice,
    semilattice_from_poset,
    semilattice_law_violations,
)

SMALL = [lattice_from_leq(list(range(n)), np.array(g)) for n, g in oracles.all_lattices(5)]


def reduct(name):
    return join_reduct(catalog(name))


def _tables(S):
    labels = list(range(S.size))
    join = {x: {y: int(S.join[x, y]) for y in labels} for x in labels}
    return labels, join


def test_join_reduct_examples():
    assert reduct("chain:2").size == 2
    m3 = reduct("M3")
    assert m3.labels[m3.join[m3.index("p"), m3.index("q")]] == "1"
    b2 = reduct("bool:2")
    assert b2.size == 4 and b2.labels[b2.join[b2.index("a"), b2.index("b")]] == "ab"
    for name in ["M3", "N5", "bool:3"]:
        assert semilattice_law_violations(reduct(name)) == []


def test_distributive_semilattice_examples():
    assert is_distributive_semilattice(reduct("bool:2"))
    assert not is_distributive_semilattice(reduct("M3"))
    for n in range(1, 6):
        assert is_distributive_semilattice(reduct(f"chain:{n}"))


def _distributive_by_definition(S):
    n = S.size
    for x0, x1 in itertools.product(range(n), repeat=2):
        for u in range(n):
            if not S.leq[u, S.join[x0, x1]]:
                continue
            if not any(S.join[y0, y1] == u for y0 in range(n) if S.leq[y0, x0]
                       for y1 in range(n) if S.leq[y1, x1]):
                return False
    return True


@pytest.mark.parametrize("L", SMALL + [catalog("bool:3"), catalog("Mn:4")], ids=lambda L: str(L.size))
def test_distributivity_matches_definition_and_lattice_test(L):
    from lattice_tensor.order import is_distributive_lattice
    S = L.join_reduct
    assert is_distributive_semilattice(S) == _distributive_by_definition(S)
    assert is_distributive_semilattice(S) == is_distributive_lattice(L)


def test_direct_sum_examples():
    c2 = reduct("chain:2")
    assert are_isomorphic(direct_sum(c2, c2), reduct("bool:2")) is not None
    m3 = reduct("M3")
    assert are_isomorphic(direct_sum(m3, one_element_semilattice()), m3) is not None
    s = direct_sum(reduct("chain:3"), m3)
    assert s.size == 15 and semilattice_law_violations(s) == []


def test_l_homomorphism_examples():
    b2, c2 = reduct("bool:2"), reduct("chain:2")
    f = SemilatticeMap(b2, c2, [0, 1, 1, 1])
    assert f.is_homomorphism() and not is_l_homomorphism(f)
    assert is_l_homomorphism(identity_map(reduct("N5")))


def _lattice_hom(A, B, f):
    f = np.asarray(f)
    return (np.array_equal(f[A.join], B.join[np.ix_(f, f)])
            and np.array_equal(f[A.meet], B.meet[np.ix_(f, f)]) and f[A.zero] == B.zero)


@pytest.mark.parametrize("a,b", [("chain:3", "bool:2"), ("N5", "chain:3"), ("bool:2", "N5"), ("M3", "M3")])
def test_lattice_homomorphisms_are_l_homomorphisms(a, b):
    A, B = catalog(a), catalog(b)
    n = 0
    for f in homomorphisms(A.join_reduct, B.join_reduct):
        m = SemilatticeMap(A.join_reduct, B.join_reduct, f)
        if _lattice_hom(A, B, f):
            n += 1
            assert is_l_homomorphism(m)
    assert n > 0


@pytest.mark.parametrize("S", [L.join_reduct for L in SMALL], ids=lambda S: str(S.size))
@pytest.mark.parametrize("T", [L.join_reduct for L in SMALL[:7]], ids=lambda S: str(S.size))
def test_homomorphism_enumeration_and_l_test_match_brute(S, T):
    ls, js = _tables(S)
    lt, jt = _tables(T)
    brute = list(oracles.join_homs(ls, js, S.zero, lt, jt, T.zero))
    ours = set(homomorphisms(S, T))
    assert ours == {tuple(f[x] for x in ls) for f in brute}
    for f in brute:
        img = tuple(f[x] for x in ls)
        expected = oracles.is_l_hom_by_definition(ls, lambda x, y: bool(S.leq[x, y]), f, lt,
                                                  lambda x, y: bool(T.leq[x, y]))
        assert is_l_homomorphism(SemilatticeMap(S, T, img)) == expected


def _l_homs(S, T):
    return [SemilatticeMap(S, T, f) for f in homomorphisms(S, T) if is_l_homomorphism(SemilatticeMap(S, T, f))]


@pytest.mark.parametrize("a,b", [("N5", "bool:2"), ("bool:2", "N5"), ("chain:4", "M3"), ("M3", "M3")])
def test_l_homomorphisms_are_partial_meet_homomorphisms(a, b):
    S, T = reduct(a), reduct(b)
    for f in _l_homs(S, T):
        F = f.array
        assert np.array_equal(F[S.meet], T.meet[np.ix_(F, F)])
        # f(a0) <= f(a1) gives some a' below both with the value of a0
        for a0, a1 in itertools.product(range(S.size), repeat=2):
            if T.leq[F[a0], F[a1]]:
                assert any(S.leq[x, a0] and S.leq[x, a1] and F[x] == F[a0] for x in range(S.size))


def test_kernel_examples():
    c3, c2 = reduct("chain:3"), reduct("chain:2")
    assert kernel(identity_map(c3)).blocks() == [[0], [1], [2]]
    assert kernel(SemilatticeMap(c3, c2, [0, 0, 0])).blocks() == [[0, 1, 2]]
    assert kernel(SemilatticeMap(c3, c2, [0, 1, 1])).blocks() == [[0], [1, 2]]


def test_block_numbering_is_canonical():
    t = JoinCongruence(reduct("chain:3"), [5, 2, 2])
    assert t.block_of == (0, 1, 1)


def test_quotient_examples():
    c3 = reduct("chain:3")
    Q, p = quotient_semilattice(c3, JoinCongruence(c3, [0, 1, 2]))
    assert are_isomorphic(Q, c3) is not None
    Q, p = quotient_semilattice(c3, JoinCongruence(c3, [0, 0, 0]))
    assert Q.size == 1
    Q, p = quotient_semilattice(c3, JoinCongruence(c3, [0, 0, 1]))
    assert are_isomorphic(Q, reduct("chain:2")) is not None
    assert p.is_homomorphism()


@pytest.mark.parametrize("S", [L.join_reduct for L in SMALL] + [reduct("bool:3")], ids=lambda S: str(S.size))
def test_kernel_of_projection_recovers_congruence(S):
    labels, join = _tables(S)
    for cls in oracles.join_congruences(labels, join):
        theta = JoinCongruence(S, [cls[x] for x in labels])
        assert theta.is_compatible()
        Q, proj = quotient_semilattice(S, theta)
        assert semilattice_law_violations(Q) == []
        assert proj.is_homomorphism() and proj.is_surjective()
        assert kernel(proj) == theta


def test_l_congruence_examples():
    from lattice_tensor.congruence import congruence_lattice
    b2 = reduct("bool:2")
    assert not is_l_congruence(b2, JoinCongruence(b2, [0, 1, 2, 2]))
    for name in ["N5", "M3", "chain:4", "bool:2"]:
        L = catalog(name)
        for p in congruence_lattice(L).partitions:
            assert is_l_congruence(L.join_reduct, JoinCongruence(L.join_reduct, p))
    for S in [reduct("N5"), b2]:
        assert is_l_congruence(S, JoinCongruence(S, range(S.size)))
        assert is_l_congruence(S, JoinCongruence(S, [0] * S.size))


def test_semilattice_from_poset_rejects_missing_join():
    from lattice_tensor.errors import NotALattice
    from lattice_tensor.order import build_poset
    p = build_poset(["0", "a", "b"], [("0", "a"), ("0", "b")])
    with pytest.raises(NotALattice):
        semilattice_from_poset(p)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(SMALL))), st.sampled_from(range(len(SMALL))), st.data())
def test_random_map_homomorphism_flag_matches_definition(i, j, data):
    S, T = SMALL[i].join_reduct, SMALL[j].join_reduct
    img = data.draw(st.lists(st.integers(0, T.size - 1), min_size=S.size, max_size=S.size))
    f = SemilatticeMap(S, T, img)
    expected = img[S.zero] == T.zero and all(img[S.join[x, y]] == T.join[img[x], img[y]]
                                             for x in range(S.size) for y in range(S.size))
    assert f.is_homomorphism() == expected
