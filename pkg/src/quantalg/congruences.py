"""Subcongruences on finite spaces, their colimits, and quotient algebras.

A subcongruence on a finite metric space is stored as a single matrix
d-hat: symmetric, zero on the diagonal, satisfying the triangle
inequality, and bounded above by the base distance.  The sublevel set of
d-hat at each threshold, with the two coordinate projections, recovers the
indexed picture of the relation family; on finite carriers the infimum
defining a colimit distance is attained, so the matrix loses nothing.

Colimits are metric reflections of (base points, d-hat).  The closure
operation that generates the least congruence refining given distance
bounds alternates exact min-plus transitive closure with operation
propagation until a full alternation changes nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebras import Homomorphism, QuantAlgebra
from .distance import Dist, INF, ZERO, dist_max
from .errors import CapExceededError, ConvergenceError, InvariantError, StructuralError
from .spaces import (
    MetricSpace,
    PseudoSpace,
    QuotientMap,
    SpaceMap,
    Violation,
    metric_reflection,
    product_space,
    tuple_label,
)

DEFAULT_PAIR_CAP = 10_000_000


def subcongruence_violations(
    base: MetricSpace, dhat: Sequence[Sequence[Dist]]
) -> list[Violation]:
    """All axioms the matrix breaks: reflexivity bound, symmetry, zero
    diagonal, triangle inequality."""
    pts = base.points
    n = len(pts)
    if len(dhat) != n or any(len(row) != n for row in dhat):
        raise StructuralError(f"matrix is not {n}x{n}")
    out: list[Violation] = []
    for i in range(n):
        if dhat[i][i] != ZERO:
            out.append(Violation("diagonal", (pts[i],), f"{dhat[i][i]} != 0"))
    for i in range(n):
        for j in range(i + 1, n):
            if dhat[i][j] != dhat[j][i]:
                out.append(Violation("symmetry", (pts[i], pts[j]), f"{dhat[i][j]} vs {dhat[j][i]}"))
            if dhat[i][j] > base.dist_at(i, j):
                out.append(
                    Violation(
                        "bound",
                        (pts[i], pts[j]),
                        f"{dhat[i][j]} exceeds base distance {base.dist_at(i, j)}",
                    )
                )
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k == i or k == j:
                    continue
                if dhat[i][j] > dhat[i][k] + dhat[k][j]:
                    out.append(
                        Violation(
                            "triangle",
                            (pts[i], pts[k], pts[j]),
                            f"{dhat[i][j]} > {dhat[i][k]} + {dhat[k][j]}",
                        )
                    )
    return out


class Subcongruence:
    """A pseudometric matrix below the base metric of a finite space."""

    __slots__ = ("base", "dhat")

    def __init__(self, base: MetricSpace, dhat: Sequence[Sequence[Dist]]):
        report = subcongruence_violations(base, dhat)
        if report:
            raise InvariantError("not a subcongruence", report)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dhat", tuple(tuple(row) for row in dhat))

    def __setattr__(self, name, value):
        raise AttributeError("Subcongruence is immutable")

    def d(self, x: str, y: str) -> Dist:
        return self.dhat[self.base.index(x)][self.base.index(y)]

    def as_pseudo_space(self) -> PseudoSpace:
        return PseudoSpace(self.base.points, self.dhat)

    def sublevel(self, epsilon: Dist) -> "PairRelation":
        """The relation at one threshold, with its two projections."""
        pairs = tuple(
            (x, y)
            for x in self.base.points
            for y in self.base.points
            if self.d(x, y) <= epsilon
        )
        return _pair_relation(self.base, pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subcongruence):
            return NotImplemented
        return self.base == other.base and self.dhat == other.dhat

    def __repr__(self) -> str:
        return f"Subcongruence({self.base.n} points)"


def identity_subcongruence(base: MetricSpace) -> Subcongruence:
    return Subcongruence(base, base.rows)


@dataclass(frozen=True)
class PairRelation:
    """A set of ordered point pairs as a subspace of the square, plus the
    coordinate projections."""

    pairs: tuple[tuple[str, str], ...]
    space: MetricSpace
    left: SpaceMap
    right: SpaceMap


def _pair_relation(base: MetricSpace, pairs: tuple[tuple[str, str], ...]) -> PairRelation:
    labels = sorted(tuple_label(p) for p in pairs)
    by_label = {tuple_label(p): p for p in pairs}
    rows = [
        [
            dist_max(
                (
                    base.dist(by_label[a][0], by_label[b][0]),
                    base.dist(by_label[a][1], by_label[b][1]),
                )
            )
            for b in labels
        ]
        for a in labels
    ]
    space = MetricSpace(labels, rows)
    left = SpaceMap(space, base, {lab: by_label[lab][0] for lab in labels})
    right = SpaceMap(space, base, {lab: by_label[lab][1] for lab in labels})
    return PairRelation(tuple(sorted(pairs)), space, left, right)


def _as_map(f) -> tuple[PseudoSpace, PseudoSpace, Mapping[str, str]]:
    if isinstance(f, Homomorphism):
        return f.source.carrier, f.target.carrier, f.mapping
    if isinstance(f, SpaceMap):
        return f.source, f.target, f.mapping
    if isinstance(f, QuotientMap):
        return f.source, f.target, f.class_of
    raise StructuralError(f"not a map between spaces: {f!r}")


def epsilon_kernel_pair(f, epsilon) -> PairRelation:
    """All source pairs whose images lie within the threshold.

    The relation carries the maximum-metric subspace structure of the
    square of the source.
    """
    source, target, mapping = _as_map(f)
    eps = Dist(epsilon)
    if not isinstance(source, MetricSpace):
        raise StructuralError("kernel pairs need a metric source")
    pairs = tuple(
        (x, y)
        for x in source.points
        for y in source.points
        if target.dist(mapping[x], mapping[y]) <= eps
    )
    return _pair_relation(source, pairs)


def kernel_subcongruence(f) -> Subcongruence:
    """The matrix of image distances; its sublevels are the kernel pairs."""
    source, target, mapping = _as_map(f)
    if not isinstance(source, MetricSpace):
        raise StructuralError("kernel subcongruences need a metric source")
    sm = SpaceMap(source, target, dict(mapping))
    witness = sm.expansion_witness()
    if witness is not None:
        raise StructuralError(f"map expands the pair {witness}; not nonexpanding")
    rows = [
        [target.dist(mapping[x], mapping[y]) for y in source.points]
        for x in source.points
    ]
    return Subcongruence(source, rows)


def colimit(sub: Subcongruence) -> tuple[MetricSpace, QuotientMap]:
    """Identify zero d-hat pairs; class distances are exactly d-hat.

    This is the metric reflection of (base points, d-hat); the returned
    map's source carries the d-hat pseudometric.
    """
    pseudo = sub.as_pseudo_space()
    return metric_reflection(pseudo)


@dataclass(frozen=True)
class EffectivityResult:
    ok: bool
    discrepancies: tuple[tuple[str, str, Dist, Dist], ...]  # (x, y, dhat, kernel)


def check_effectivity(sub: Subcongruence) -> EffectivityResult:
    """Rebuild the subcongruence from its own colimit map and compare.

    Every subcongruence on a finite space is the kernel of its colimit
    map, so a nonempty discrepancy list indicates an implementation bug.
    """
    space, qmap = colimit(sub)
    recovered = kernel_subcongruence(
        SpaceMap(sub.base, space, dict(qmap.class_of))
    )
    bad = tuple(
        (x, y, sub.d(x, y), recovered.d(x, y))
        for x, y in sub.base.point_pairs()
        if sub.d(x, y) != recovered.d(x, y)
    )
    return EffectivityResult(not bad, bad)


def product_subcongruence(s1: Subcongruence, s2: Subcongruence) -> Subcongruence:
    """Componentwise maximum on the product base; its colimit is the
    product of the component colimits."""
    prod = product_space([s1.base, s2.base])
    labels = prod.space.points
    rows = []
    for a in labels:
        xa, ya = prod.coords[a]
        row = []
        for b in labels:
            xb, yb = prod.coords[b]
            row.append(dist_max((s1.d(xa, xb), s2.d(ya, yb))))
        rows.append(row)
    return Subcongruence(prod.space, rows)


@dataclass(frozen=True)
class PropagationRule:
    """One operation instance: if all coordinate pairs are close, the output
    pair must be at least as close."""

    coord_pairs: tuple[tuple[int, int], ...]
    out_left: int
    out_right: int


def _floyd_warshall_sweep(m: list[list[Dist]]) -> bool:
    n = len(m)
    changed = False
    for k in range(n):
        row_k = m[k]
        for i in range(n):
            d_ik = m[i][k]
            if d_ik.is_infinite:
                continue
            row_i = m[i]
            for j in range(n):
                alt = d_ik + row_k[j]
                if alt < row_i[j]:
                    row_i[j] = alt
                    m[j][i] = alt
                    changed = True
    return changed


def _propagation_sweep(m: list[list[Dist]], rules: Sequence[PropagationRule]) -> bool:
    changed = False
    for rule in rules:
        bound = ZERO
        for i, j in rule.coord_pairs:
            v = m[i][j]
            if v > bound:
                bound = v
            if bound.is_infinite:
                break
        if bound < m[rule.out_left][rule.out_right]:
            m[rule.out_left][rule.out_right] = bound
            m[rule.out_right][rule.out_left] = bound
            changed = True
    return changed


def closure_fixpoint(
    matrix: list[list[Dist]], rules: Sequence[PropagationRule], pass_cap: int
) -> int:
    """Alternate full min-plus sweeps with propagation sweeps, in place.

    Stops after a full alternation with zero changes; returns the number
    of alternations.  Termination of the alternation in exact arithmetic
    is unproven, so a pass cap guards against silent divergence.
    """
    passes = 0
    while True:
        snapshot = [row[:] for row in matrix]
        changed = _floyd_warshall_sweep(matrix)
        changed = _propagation_sweep(matrix, rules) or changed
        passes += 1
        if not changed:
            return passes
        if passes >= pass_cap:
            raise ConvergenceError(passes, snapshot, [row[:] for row in matrix])


def _operation_rules(algebra: QuantAlgebra, max_pairs: int) -> list[PropagationRule]:
    index = {p: i for i, p in enumerate(algebra.carrier.points)}
    rules: list[PropagationRule] = []
    for name, arity in algebra.signature.symbols:
        count = len(index) ** (2 * arity)
        if count > max_pairs:
            raise CapExceededError(f"tuple pairs for symbol {name!r}", count, max_pairs)
        tuples = list(itertools.product(algebra.carrier.points, repeat=arity))
        for xs, ys in itertools.combinations(tuples, 2):
            out_l = index[algebra.op(name, xs)]
            out_r = index[algebra.op(name, ys)]
            if out_l == out_r:
                continue
            rules.append(
                PropagationRule(
                    tuple((index[x], index[y]) for x, y in zip(xs, ys)),
                    out_l,
                    out_r,
                )
            )
    return rules


class CongruenceOnAlgebra:
    """A subcongruence on an algebra's carrier that the operations respect."""

    __slots__ = ("algebra", "sub")

    def __init__(self, algebra: QuantAlgebra, sub: Subcongruence, max_pairs: int = DEFAULT_PAIR_CAP):
        if sub.base != algebra.carrier:
            raise StructuralError("subcongruence base differs from the carrier")
        bad = compatibility_violations(algebra, sub, max_pairs)
        if bad:
            raise InvariantError("operations do not respect the matrix", bad)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "sub", sub)

    def __setattr__(self, name, value):
        raise AttributeError("CongruenceOnAlgebra is immutable")

    def __repr__(self) -> str:
        return f"CongruenceOnAlgebra({self.algebra!r})"


def compatibility_violations(
    algebra: QuantAlgebra, sub: Subcongruence, max_pairs: int = DEFAULT_PAIR_CAP
) -> list[Violation]:
    """Tuple pairs where an operation stretches d-hat beyond the maximum of
    the coordinate d-hat distances."""
    m = [list(row) for row in sub.dhat]
    out: list[Violation] = []
    for rule in _operation_rules(algebra, max_pairs):
        bound = dist_max(m[i][j] for i, j in rule.coord_pairs)
        actual = m[rule.out_left][rule.out_right]
        if actual > bound:
            pts = algebra.carrier.points
            out.append(
                Violation(
                    "compatibility",
                    (pts[rule.out_left], pts[rule.out_right]),
                    f"{actual} > coordinate bound {bound}",
                )
            )
    return out


def generated_congruence(
    algebra: QuantAlgebra,
    constraints: Sequence[tuple[str, str, object]],
    max_passes: int | None = None,
    max_pairs: int = DEFAULT_PAIR_CAP,
) -> CongruenceOnAlgebra:
    """The largest matrix below the carrier metric and the given bounds that
    is a congruence on the algebra.

    Starts from the carrier metric lowered by the constraints and
    alternates min-plus closure with operation propagation to the greatest
    fixpoint.  The result is idempotent: feeding its own values back as
    constraints changes nothing.
    """
    carrier = algebra.carrier
    m = [list(row) for row in carrier.rows]
    for x, y, eps in constraints:
        i, j = carrier.index(x), carrier.index(y)
        bound = Dist(eps)
        if bound < m[i][j]:
            m[i][j] = m[j][i] = bound
    rules = _operation_rules(algebra, max_pairs)
    n = carrier.n
    cap = max_passes if max_passes is not None else 16 * n * n * (1 + algebra.table_size())
    closure_fixpoint(m, rules, max(cap, 1))
    return CongruenceOnAlgebra(algebra, Subcongruence(carrier, m))


def quotient_algebra(cong: CongruenceOnAlgebra) -> tuple[QuantAlgebra, Homomorphism]:
    """Collapse the congruence; classes are named by their least member.

    Operation tables descend to classes, which is well defined exactly
    because the matrix is operation-compatible.  The quotient map is a
    surjective homomorphism.
    """
    algebra = cong.algebra
    space, qmap = colimit(cong.sub)
    class_of = qmap.class_of
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    for name, arity in algebra.signature.symbols:
        table: dict[tuple[str, ...], str] = {}
        for reps in itertools.product(space.points, repeat=arity):
            table[reps] = class_of[algebra.op(name, reps)]
        tables[name] = table
    quotient = QuantAlgebra(space, algebra.signature, tables)
    onto = Homomorphism(algebra, quotient, dict(class_of))
    return quotient, onto


def coequalizer(
    f: Homomorphism, g: Homomorphism, max_passes: int | None = None
) -> tuple[QuantAlgebra, Homomorphism]:
    """Universal quotient of the common target forcing f and g to agree."""
    if f.source != g.source or f.target != g.target:
        raise StructuralError("coequalizer needs a parallel pair")
    constraints = [(f(x), g(x), ZERO) for x in f.source.carrier.points]
    cong = generated_congruence(f.target, constraints, max_passes=max_passes)
    return quotient_algebra(cong)


@dataclass(frozen=True)
class UniversalCheck:
    """Outcome of factoring a candidate map through a colimit map."""

    ok: bool
    factor: SpaceMap | None
    reason: str | None
    witness: tuple | None


def universal_property_check(sub: Subcongruence, q, candidate) -> UniversalCheck:
    """Try to factor the candidate through q as maps out of the base.

    The candidate must satisfy the compatibility condition in matrix form:
    its image distances may not exceed d-hat.  If they do, the least
    violating pair is returned.  Otherwise the unique factor through q is
    constructed and checked nonexpanding; failures report why q is not a
    colimit map.
    """
    q_src, q_tgt, q_map = _as_map(q)
    c_src, c_tgt, c_map = _as_map(candidate)
    if set(q_src.points) != set(sub.base.points) or set(c_src.points) != set(sub.base.points):
        raise StructuralError("maps must start from the subcongruence base")
    for x, y in sub.base.point_pairs():
        if c_tgt.dist(c_map[x], c_map[y]) > sub.d(x, y):
            return UniversalCheck(False, None, "candidate violates the compatibility bound", (x, y))
    factor: dict[str, str] = {}
    definer: dict[str, str] = {}
    for x in sub.base.points:
        image = q_map[x]
        value = c_map[x]
        if image in factor and factor[image] != value:
            return UniversalCheck(
                False, None, "candidate is not constant on the fibers of q", (definer[image], x)
            )
        factor.setdefault(image, value)
        definer.setdefault(image, x)
    missing = [p for p in q_tgt.points if p not in factor]
    if missing:
        return UniversalCheck(False, None, "q is not surjective onto its target", tuple(missing))
    h = SpaceMap(q_tgt, c_tgt, factor)
    witness = h.expansion_witness()
    if witness is not None:
        return UniversalCheck(False, None, "induced factor is not nonexpanding", witness)
    return UniversalCheck(True, h, None, None)
