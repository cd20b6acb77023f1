"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written from the definitions, not by
calling the code under test: repeated-relaxation shortest paths, a
union-find congruence closure over operation tables, a brute-force search
for the largest valid congruence matrix over a value grid, and a
backtracking isometry search.
"""

from __future__ import annotations

import itertools

from quantalg import Dist, INF, ZERO


def shortest_path_closure(rows):
    """All-pairs shortest paths by repeated relaxation to a fixpoint."""
    n = len(rows)
    m = [list(r) for r in rows]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    alt = m[i][k] + m[k][j]
                    if alt < m[i][j]:
                        m[i][j] = alt
                        changed = True
    return m


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def congruence_closure_partition(algebra, pairs):
    """Classical congruence closure on a finite algebra via union-find.

    Merges the given pairs and propagates through the operation tables
    until stable; returns the partition as a frozenset of frozensets.
    """
    uf = UnionFind(algebra.carrier.points)
    for a, b in pairs:
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        for name, arity in algebra.signature.symbols:
            tuples = list(itertools.product(algebra.carrier.points, repeat=arity))
            for xs, ys in itertools.combinations(tuples, 2):
                if all(uf.find(x) == uf.find(y) for x, y in zip(xs, ys)):
                    if uf.union(algebra.op(name, xs), algebra.op(name, ys)):
                        changed = True
    classes: dict[str, set[str]] = {}
    for p in algebra.carrier.points:
        classes.setdefault(uf.find(p), set()).add(p)
    return frozenset(frozenset(c) for c in classes.values())


def value_grid(inputs, max_atoms=4):
    """All saturating sums of at most max_atoms input values, plus infinity."""
    finite = sorted({v for v in inputs if not v.is_infinite})
    values = {ZERO, INF}
    values.update(finite)
    frontier = set(finite)
    for _ in range(max_atoms - 1):
        frontier = {a + b for a in frontier for b in finite} - values
        values |= frontier
        if not frontier:
            break
    return sorted(values)


def largest_valid_congruence(algebra, constraints, max_atoms=4):
    """Brute-force the pointwise-largest matrix that is a congruence below
    the carrier metric and the constraint bounds.

    Candidate entries are drawn from the saturating-sum grid over the
    input values.  Valid matrices are closed under pointwise maximum, so
    the largest one is also the lexicographically largest; a descending
    depth-first search returns the first (hence largest) valid matrix.
    """
    carrier = algebra.carrier
    pts = list(carrier.points)
    n = len(pts)
    bound = [[carrier.dist(x, y) for y in pts] for x in pts]
    for x, y, eps in constraints:
        i, j = pts.index(x), pts.index(y)
        e = Dist(eps)
        if e < bound[i][j]:
            bound[i][j] = bound[j][i] = e
    inputs = [carrier.dist(x, y) for x in pts for y in pts]
    inputs += [Dist(eps) for _, _, eps in constraints]
    grid = value_grid(inputs, max_atoms)

    entries = [(i, j) for i in range(n) for j in range(i + 1, n)]
    candidates = [
        sorted({v for v in grid if v <= bound[i][j]} | {bound[i][j]}, reverse=True)
        for i, j in entries
    ]

    op_instances = []
    for name, arity in algebra.signature.symbols:
        tuples = list(itertools.product(pts, repeat=arity))
        for xs, ys in itertools.combinations(tuples, 2):
            out_a, out_b = algebra.op(name, xs), algebra.op(name, ys)
            if out_a != out_b:
                op_instances.append((list(zip(xs, ys)), out_a, out_b))

    m = [[ZERO] * n for _ in range(n)]

    def get(x, y):
        return m[pts.index(x)][pts.index(y)]

    def valid():
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if m[i][j] > m[i][k] + m[k][j]:
                        return False
        for coords, out_a, out_b in op_instances:
            limit = ZERO
            for x, y in coords:
                v = get(x, y)
                if v > limit:
                    limit = v
            if get(out_a, out_b) > limit:
                return False
        return True

    def search(level):
        if level == len(entries):
            return valid()
        i, j = entries[level]
        for v in candidates[level]:
            m[i][j] = m[j][i] = v
            if search(level + 1):
                return True
        return False

    if not search(0):
        raise AssertionError("no valid matrix found; the zero matrix should always work")
    return [[m[i][j] for j in range(n)] for i in range(n)]


def find_isometry(space_a, space_b):
    """A distance-preserving bijection between two finite spaces, or None.

    Exhaustive backtracking over point assignments, pruning on the first
    mismatched distance.
    """
    if space_a.n != space_b.n:
        return None
    a_pts = list(space_a.points)
    b_pts = list(space_b.points)
    assigned: dict[str, str] = {}
    used: set[str] = set()

    def extend(k):
        if k == len(a_pts):
            return True
        x = a_pts[k]
        for y in b_pts:
            if y in used:
                continue
            if all(
                space_b.dist(y, assigned[prev]) == space_a.dist(x, prev)
                for prev in a_pts[:k]
            ):
                assigned[x] = y
                used.add(y)
                if extend(k + 1):
                    return True
                del assigned[x]
                used.discard(y)
        return False

    return dict(assigned) if extend(0) else None
