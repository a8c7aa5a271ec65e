"""Brute-force reference implementations, written from the definitions with
plain Python sets. Nothing here imports the package."""
from __future__ import annotations

import itertools
from functools import lru_cache


class Lat:
    """A finite order given by labels and a <= predicate; joins/meets by search."""

    def __init__(self, labels, leq_pairs):
        self.labels = list(labels)
        self.le = set(leq_pairs)
        self.n = len(self.labels)
        self.zero = next(x for x in self.labels if all((x, y) in self.le for y in self.labels))

    def leq(self, x, y):
        return (x, y) in self.le

    def join(self, x, y):
        ubs = [z for z in self.labels if self.leq(x, z) and self.leq(y, z)]
        least = [z for z in ubs if all(self.leq(z, w) for w in ubs)]
        assert len(least) == 1, (x, y)
        return least[0]

    def meet(self, x, y):
        lbs = [z for z in self.labels if self.leq(z, x) and self.leq(z, y)]
        great = [z for z in lbs if all(self.leq(w, z) for w in lbs)]
        assert len(great) == 1, (x, y)
        return great[0]


def _bounded(labels, middle_pairs):
    bot, top = labels[0], labels[-1]
    le = {(x, x) for x in labels}
    le |= {(bot, x) for x in labels} | {(x, top) for x in labels}
    le |= set(middle_pairs)
    return Lat(labels, le)


def oracle_lattice(name: str) -> Lat:
    name = name.lstrip("@")
    kind, _, k = name.partition(":")
    if kind == "chain":
        n = int(k)
        return Lat(range(n), {(i, j) for i in range(n) for j in range(n) if i <= j})
    if kind == "bool":
        n = int(k)
        letters = "abcdefghijkl"[:n]
        subsets = [frozenset(c for i, c in enumerate(letters) if s >> i & 1) for s in range(2 ** n)]
        lab = {s: ("".join(sorted(s)) or "0") for s in subsets}
        return Lat([lab[s] for s in subsets], {(lab[s], lab[t]) for s in subsets for t in subsets if s <= t})
    if name == "M3":
        return _bounded(["0", "p", "q", "r", "1"], [])
    if name == "N5":
        return _bounded(["0", "a", "b", "c", "1"], [("a", "c")])
    if kind == "Mn":
        n = int(k)
        return _bounded(["0"] + [f"a{i}" for i in range(1, n + 1)] + ["1"], [])
    raise KeyError(name)


# -- bi-ideals ------------------------------------------------------------------------

def is_biideal(A: Lat, B: Lat, X: frozenset) -> bool:
    for a in A.labels:
        if (a, B.zero) not in X:
            return False
    for b in B.labels:
        if (A.zero, b) not in X:
            return False
    for (x, y) in X:
        for x2 in A.labels:
            for y2 in B.labels:
                if A.leq(x2, x) and B.leq(y2, y) and (x2, y2) not in X:
                    return False
    for (x0, y0) in X:
        for (x1, y1) in X:
            if y0 == y1 and (A.join(x0, x1), y0) not in X:
                return False
            if x0 == x1 and (x0, B.join(y0, y1)) not in X:
                return False
    return True


def all_biideals(A: Lat, B: Lat) -> set[frozenset]:
    cells = [(a, b) for a in A.labels for b in B.labels]
    out = set()
    for bits in range(2 ** len(cells)):
        X = frozenset(c for i, c in enumerate(cells) if bits >> i & 1)
        if is_biideal(A, B, X):
            out.add(X)
    return out


def generated_biideal(A: Lat, B: Lat, X) -> frozenset:
    """Intersection of all bi-ideals containing X, found by fixpoint from the definition."""
    cur = set(X) | {(a, B.zero) for a in A.labels} | {(A.zero, b) for b in B.labels}
    while True:
        new = set(cur)
        for (x, y) in cur:
            new |= {(x2, y2) for x2 in A.labels for y2 in B.labels if A.leq(x2, x) and B.leq(y2, y)}
        for (x0, y0) in cur:
            for (x1, y1) in cur:
                if y0 == y1:
                    new.add((A.join(x0, x1), y0))
                if x0 == x1:
                    new.add((x0, B.join(y0, y1)))
        if new == cur:
            return frozenset(cur)
        cur = new


def pure(A: Lat, B: Lat, a, b) -> frozenset:
    return generated_biideal(A, B, [(a, b)])


# -- partitions and congruences --------------------------------------------------------------

def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def partition_key(blocks) -> frozenset:
    return frozenset(frozenset(b) for b in blocks)


def lattice_congruences(L: Lat) -> set[frozenset]:
    out = set()
    for part in set_partitions(L.labels):
        cls = {x: i for i, blk in enumerate(part) for x in blk}
        ok = True
        for x in L.labels:
            for y in L.labels:
                if cls[x] != cls[y]:
                    continue
                for z in L.labels:
                    if cls[L.join(x, z)] != cls[L.join(y, z)] or cls[L.meet(x, z)] != cls[L.meet(y, z)]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.add(partition_key(part))
    return out


def join_congruences(labels, join) -> list[dict]:
    """All partitions compatible with a join table given as a dict-of-dicts; as block maps."""
    out = []
    for part in set_partitions(labels):
        cls = {x: i for i, blk in enumerate(part) for x in blk}
        if all(cls[join[x][z]] == cls[join[y][z]]
               for x in labels for y in labels if cls[x] == cls[y] for z in labels):
            out.append(cls)
    return out


# -- maps -----------------------------------------------------------------------------------

def join_homs(S_labels, S_join, S_zero, T_labels, T_join, T_zero):
    for img in itertools.product(T_labels, repeat=len(S_labels)):
        f = dict(zip(S_labels, img))
        if f[S_zero] != T_zero:
            continue
        if all(f[S_join[x][y]] == T_join[f[x]][f[y]] for x in S_labels for y in S_labels):
            yield f


def is_l_hom_by_definition(S_labels, S_leq, f, T_labels, T_leq) -> bool:
    for a0 in S_labels:
        for a1 in S_labels:
            for b in T_labels:
                if T_leq(b, f[a0]) and T_leq(b, f[a1]):
                    if not any(S_leq(x, a0) and S_leq(x, a1) and T_leq(b, f[x]) for x in S_labels):
                        return False
    return True


def monotone_map_count(L: Lat, P_labels, P_leq) -> int:
    count = 0
    for img in itertools.product(L.labels, repeat=len(P_labels)):
        f = dict(zip(P_labels, img))
        if all(L.leq(f[p], f[q]) for p in P_labels for q in P_labels if P_leq(p, q)):
            count += 1
    return count


# -- isomorphism -------------------------------------------------------------------------------

def isomorphic_by_permutation(n, leq1, leq2) -> bool:
    """leq1, leq2: sets of index pairs on range(n); order isomorphism by trying every bijection."""
    for perm in itertools.permutations(range(n)):
        if all(((perm[i], perm[j]) in leq2) == ((i, j) in leq1) for i in range(n) for j in range(n)):
            return True
    return False


def leq_pairs(leq_grid) -> set:
    n = len(leq_grid)
    return {(i, j) for i in range(n) for j in range(n) if leq_grid[i][j]}


# -- small lattices -----------------------------------------------------------------------------

@lru_cache(maxsize=None)
def all_lattices(max_n: int) -> tuple:
    """Every lattice with at most max_n elements up to isomorphism, as (n, leq grid tuple).

    Element 0 is the bottom, n-1 the top; the order among 1..n-2 is any partial
    order compatible with the natural numbering."""
    found = []
    for n in range(1, max_n + 1):
        inner = list(range(1, n - 1))
        pairs = [(i, j) for i in inner for j in inner if i < j]
        seen = set()
        for bits in range(2 ** len(pairs)):
            rel = {p for k, p in enumerate(pairs) if bits >> k & 1}
            if any((i, j) in rel and (j, k) in rel and (i, k) not in rel
                   for i in inner for j in inner for k in inner):
                continue
            le = {(i, i) for i in range(n)} | {(0, i) for i in range(n)} | {(i, n - 1) for i in range(n)} | rel
            if not _has_joins(n, le):
                continue
            key = min(tuple(sorted((perm[i], perm[j]) for i, j in le))
                      for perm in _inner_perms(n))
            if key in seen:
                continue
            seen.add(key)
            grid = tuple(tuple((i, j) in le for j in range(n)) for i in range(n))
            found.append((n, grid))
    return tuple(found)


def _inner_perms(n):
    if n <= 2:
        yield tuple(range(n))
        return
    for p in itertools.permutations(range(1, n - 1)):
        yield (0,) + p + (n - 1,)


def _has_joins(n, le) -> bool:
    for x in range(n):
        for y in range(n):
            ubs = [z for z in range(n) if (x, z) in le and (y, z) in le]
            if not [z for z in ubs if all((z, w) in le for w in ubs)]:
                return False
    return True


# -- rectangles ---------------------------------------------------------------------------------

def rectangle_unions(n: int) -> tuple[list[frozenset], set]:
    """The union-closed family generated by all rectangles X x Y in an n x n grid,
    with its inclusion order as index pairs."""
    subsets = [frozenset(i for i in range(n) if s >> i & 1) for s in range(2 ** n)]
    rects = {frozenset((x, y) for x in X for y in Y) for X in subsets for Y in subsets}
    family = set(rects)
    while True:
        new = {r | s for r in family for s in family} | family
        if new == family:
            break
        family = new
    fam = sorted(family, key=lambda s: (len(s), sorted(s)))
    le = {(i, j) for i, r in enumerate(fam) for j, s in enumerate(fam) if r <= s}
    return fam, le


# -- bi-ideal filter on bitmasks --------------------------------------------------------------

def _joins_from_grid(n, leq):
    join = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            ubs = [z for z in range(n) if leq[x][z] and leq[y][z]]
            join[x][y] = next(z for z in ubs if all(leq[z][w] for w in ubs))
    return join


def biideal_cellsets(na, leqa, nb, leqb) -> set[frozenset]:
    """Every subset of the na x nb grid passing the three bi-ideal conditions, by
    scanning all 2^(na*nb) subsets. Elements are given by index with <= grids."""
    ja, jb = _joins_from_grid(na, leqa), _joins_from_grid(nb, leqb)
    za = next(x for x in range(na) if all(leqa[x]))
    zb = next(y for y in range(nb) if all(leqb[y]))
    bit = lambda x, y: 1 << (x * nb + y)
    axes = 0
    for x in range(na):
        axes |= bit(x, zb)
    for y in range(nb):
        axes |= bit(za, y)
    down = [[0] * nb for _ in range(na)]
    for x in range(na):
        for y in range(nb):
            for x2 in range(na):
                for y2 in range(nb):
                    if leqa[x2][x] and leqb[y2][y]:
                        down[x][y] |= bit(x2, y2)
    lateral = []
    for y in range(nb):
        for x0 in range(na):
            for x1 in range(x0 + 1, na):
                lateral.append((bit(x0, y) | bit(x1, y), bit(ja[x0][x1], y)))
    for x in range(na):
        for y0 in range(nb):
            for y1 in range(y0 + 1, nb):
                lateral.append((bit(x, y0) | bit(x, y1), bit(x, jb[y0][y1])))
    cells = [(x, y) for x in range(na) for y in range(nb)]
    out = set()
    for m in range(1 << (na * nb)):
        if m & axes != axes:
            continue
        if any(m >> (x * nb + y) & 1 and down[x][y] & ~m for x, y in cells):
            continue
        if any(m & pair == pair and not m & target for pair, target in lateral):
            continue
        out.add(frozenset(c for c in cells if m >> (c[0] * nb + c[1]) & 1))
    return out
