"""Deterministic union-find over hashable items.

Merges are index-ordered: the root with the smaller insertion index
wins, so the final partition and its representatives do not depend on
merge order or scheduling.
"""


class UnionFind:
    def __init__(self, items=()):
        self.index = {}
        self.parent = []
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.index:
            self.index[x] = len(self.parent)
            self.parent.append(len(self.parent))
        return self.index[x]

    def find(self, x):
        i = self.index[x]
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo
        return lo

    def groups(self):
        """Partition as a list of tuples, ordered by smallest member index."""
        items = list(self.index)
        buckets = {}
        for x in items:
            buckets.setdefault(self.find(x), []).append(x)
        return [tuple(buckets[r]) for r in sorted(buckets)]
