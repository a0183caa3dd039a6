import random

from polyhom.unionfind import UnionFind


def test_basic_merge():
    uf = UnionFind("abcd")
    uf.union("a", "b")
    uf.union("c", "d")
    assert uf.find("a") == uf.find("b")
    assert uf.find("a") != uf.find("c")
    assert sorted(map(sorted, uf.groups())) == [["a", "b"], ["c", "d"]]


def test_merge_order_invariance():
    items = list(range(30))
    pairs = [(i % 30, (i * 7 + 3) % 30) for i in range(60)]
    baseline = None
    for seed in range(6):
        rng = random.Random(seed)
        shuffled = pairs[:]
        rng.shuffle(shuffled)
        uf = UnionFind(items)
        for a, b in shuffled:
            uf.union(a, b)
        groups = sorted(map(tuple, map(sorted, uf.groups())))
        if baseline is None:
            baseline = groups
        assert groups == baseline


def test_representative_is_min_index():
    uf = UnionFind([10, 20, 30])
    uf.union(30, 20)
    assert uf.find(30) == uf.index[20]
    uf.union(20, 10)
    assert uf.find(30) == uf.index[10]
