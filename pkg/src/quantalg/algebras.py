"""Finite quantitative algebras and their homomorphisms.

An algebra is a metric-space carrier plus one total operation table per
symbol.  Construction checks the tables structurally (total, closed); the
semantic law, every operation nonexpanding with respect to the maximum
metric on tuples, is checked separately by validate_algebra, so that
near-miss algebras (the truncated-addition monoid, say) can still be built
and inspected.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .distance import Dist, dist_max, dist_sum
from .errors import CapExceededError, InvariantError, StructuralError
from .spaces import MetricSpace, SpaceMap, product_space, tuple_label
from .terms import Signature

DEFAULT_PAIR_CAP = 10_000_000


@dataclass(frozen=True)
class OpViolation:
    """One tuple pair where an operation stretched the allowed distance."""

    symbol: str
    left: tuple[str, ...]
    right: tuple[str, ...]
    bound: Dist
    actual: Dist

    def __str__(self) -> str:
        return (
            f"{self.symbol}{self.left} vs {self.symbol}{self.right}: "
            f"output distance {self.actual} > input bound {self.bound}"
        )


class QuantAlgebra:
    """A finite algebra on a metric space, with explicit operation tables."""

    __slots__ = ("carrier", "signature", "tables")

    def __init__(
        self,
        carrier: MetricSpace,
        signature: Signature,
        tables: Mapping[str, Mapping[tuple[str, ...], str]],
    ):
        points = set(carrier.points)
        cleaned: dict[str, dict[tuple[str, ...], str]] = {}
        for name, arity in signature.symbols:
            if name not in tables:
                raise StructuralError(f"missing table for symbol {name!r}")
            table = {tuple(k): v for k, v in tables[name].items()}
            for key, value in table.items():
                if len(key) != arity:
                    raise StructuralError(f"table key {key} has wrong arity for {name!r}")
                if any(x not in points for x in key) or value not in points:
                    raise StructuralError(f"table entry {key} -> {value!r} leaves the carrier")
            expected = len(points) ** arity
            if len(table) != expected:
                raise StructuralError(
                    f"table for {name!r} has {len(table)} entries, expected {expected}"
                )
            cleaned[name] = table
        extra = set(tables) - set(signature.names)
        if extra:
            raise StructuralError(f"tables given for unknown symbols {sorted(extra)}")
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "tables", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("QuantAlgebra is immutable")

    def op(self, name: str, args: Sequence[str]) -> str:
        try:
            table = self.tables[name]
        except KeyError:
            raise StructuralError(f"unknown operation symbol {name!r}") from None
        try:
            return table[tuple(args)]
        except KeyError:
            raise StructuralError(f"operation {name!r} undefined on {tuple(args)}") from None

    def table_size(self) -> int:
        return sum(len(t) for t in self.tables.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantAlgebra):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.signature == other.signature
            and self.tables == other.tables
        )

    def __repr__(self) -> str:
        return f"QuantAlgebra({self.carrier.n} points, {len(self.signature.symbols)} symbols)"


def _tuple_pairs(points, arity, symbol, max_pairs):
    count = len(points) ** (2 * arity)
    if count > max_pairs:
        raise CapExceededError(f"tuple pairs for symbol {symbol!r}", count, max_pairs)
    tuples = list(itertools.product(points, repeat=arity))
    return itertools.product(tuples, tuples)


def check_op_against_combiner(
    algebra: QuantAlgebra,
    symbol: str,
    combiner: str,
    max_pairs: int = DEFAULT_PAIR_CAP,
) -> list[OpViolation]:
    """Check one operation against an input-distance combiner (max or sum).

    The quantitative-algebra law is the "max" combiner.  The "sum"
    combiner is the weaker law satisfied by, e.g., truncated addition on
    an interval: that operation passes "sum" but fails "max".
    """
    if combiner not in ("max", "sum"):
        raise StructuralError(f"unknown combiner {combiner!r}")
    combine = dist_max if combiner == "max" else dist_sum
    arity = algebra.signature.arity(symbol)
    carrier = algebra.carrier
    out: list[OpViolation] = []
    for xs, ys in _tuple_pairs(carrier.points, arity, symbol, max_pairs):
        bound = combine(carrier.dist(x, y) for x, y in zip(xs, ys))
        actual = carrier.dist(algebra.op(symbol, xs), algebra.op(symbol, ys))
        if actual > bound:
            out.append(OpViolation(symbol, xs, ys, bound, actual))
    return out


def validate_algebra(
    algebra: QuantAlgebra, max_pairs: int = DEFAULT_PAIR_CAP
) -> list[OpViolation]:
    """Every way an operation fails to be nonexpanding for the max metric.

    Empty report iff the algebra is a valid quantitative algebra.  The
    report order is deterministic (symbols in signature order, tuples
    lexicographic).
    """
    out: list[OpViolation] = []
    for name, _ in algebra.signature.symbols:
        out.extend(check_op_against_combiner(algebra, name, "max", max_pairs))
    return out


def require_valid(algebra: QuantAlgebra, max_pairs: int = DEFAULT_PAIR_CAP) -> QuantAlgebra:
    report = validate_algebra(algebra, max_pairs)
    if report:
        raise InvariantError("operations are not nonexpanding for the max metric", report)
    return algebra


def hom_violations(
    source: QuantAlgebra, target: QuantAlgebra, mapping: Mapping[str, str]
) -> list[str]:
    """Why the mapping fails to be a homomorphism; empty iff it is one."""
    problems: list[str] = []
    for p in source.carrier.points:
        if p not in mapping:
            problems.append(f"undefined on {p!r}")
        elif mapping[p] not in target.carrier.points:
            problems.append(f"maps {p!r} outside the target carrier")
    if problems:
        return problems
    if source.signature != target.signature:
        problems.append("source and target signatures differ")
        return problems
    for x, y in source.carrier.point_pairs():
        if target.carrier.dist(mapping[x], mapping[y]) > source.carrier.dist(x, y):
            problems.append(f"expands the pair ({x!r}, {y!r})")
    for name, arity in source.signature.symbols:
        for xs in itertools.product(source.carrier.points, repeat=arity):
            image = target.op(name, tuple(mapping[x] for x in xs))
            if mapping[source.op(name, xs)] != image:
                problems.append(f"does not commute with {name!r} at {xs}")
    return problems


class Homomorphism:
    """A nonexpanding, structure-preserving map between algebras."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: QuantAlgebra, target: QuantAlgebra, mapping: Mapping[str, str]):
        problems = hom_violations(source, target, mapping)
        if problems:
            raise InvariantError("not a homomorphism", problems)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mapping", dict(mapping))

    def __setattr__(self, name, value):
        raise AttributeError("Homomorphism is immutable")

    def __call__(self, point: str) -> str:
        return self.mapping[point]

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.carrier.points)

    def is_isometric_embedding(self) -> bool:
        return self.as_space_map().is_isometric_embedding()

    def as_space_map(self) -> SpaceMap:
        return SpaceMap(self.source.carrier, self.target.carrier, dict(self.mapping))

    def compose(self, then: "Homomorphism") -> "Homomorphism":
        if then.source != self.target:
            raise StructuralError("composition mismatch")
        return Homomorphism(
            self.source, then.target, {p: then.mapping[q] for p, q in self.mapping.items()}
        )

    def __repr__(self) -> str:
        return f"Homomorphism({self.source!r} -> {self.target!r})"


def identity_hom(algebra: QuantAlgebra) -> Homomorphism:
    return Homomorphism(algebra, algebra, {p: p for p in algebra.carrier.points})


def hom_distance(f: Homomorphism, g: Homomorphism) -> Dist:
    """Supremum over the common source carrier of the image distances."""
    if f.source != g.source or f.target != g.target:
        raise StructuralError("hom distance needs a parallel pair")
    return dist_max(f.target.carrier.dist(f(p), g(p)) for p in f.source.carrier.points)


def product_algebra(
    algebras: Sequence[QuantAlgebra],
) -> tuple[QuantAlgebra, list[Homomorphism]]:
    """Product carrier with the maximum metric, operations componentwise.

    Returns the product algebra and the projection homomorphisms.
    """
    if not algebras:
        raise StructuralError("product of an empty family is not supported")
    signature = algebras[0].signature
    for a in algebras[1:]:
        if a.signature != signature:
            raise StructuralError("product factors must share a signature")
    prod = product_space([a.carrier for a in algebras])
    labels = prod.space.points
    coords = prod.coords
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    for name, arity in signature.symbols:
        table: dict[tuple[str, ...], str] = {}
        for key in itertools.product(labels, repeat=arity):
            result = tuple(
                a.op(name, tuple(coords[k][i] for k in key))
                for i, a in enumerate(algebras)
            )
            table[key] = tuple_label(result)
        tables[name] = table
    out = QuantAlgebra(prod.space, signature, tables)
    projections = [
        Homomorphism(out, a, {p: coords[p][i] for p in labels})
        for i, a in enumerate(algebras)
    ]
    return out, projections


def _subspace(carrier: MetricSpace, keep: Iterable[str]) -> MetricSpace:
    pts = sorted(set(keep))
    rows = [[carrier.dist(x, y) for y in pts] for x in pts]
    return MetricSpace(pts, rows)


def subalgebra_generated(
    algebra: QuantAlgebra, seed: Iterable[str]
) -> tuple[QuantAlgebra, Homomorphism]:
    """Least operation-closed subset containing the seed, as a subalgebra.

    The inclusion is an isometric embedding and a homomorphism.
    """
    current = set(seed)
    for p in current:
        if p not in algebra.carrier.points:
            raise StructuralError(f"seed point {p!r} is not in the carrier")
    while True:
        added: set[str] = set()
        for name, arity in algebra.signature.symbols:
            for xs in itertools.product(sorted(current), repeat=arity):
                value = algebra.op(name, xs)
                if value not in current:
                    added.add(value)
        if not added:
            break
        current |= added
    sub_carrier = _subspace(algebra.carrier, current)
    tables = {
        name: {
            xs: algebra.op(name, xs)
            for xs in itertools.product(sub_carrier.points, repeat=arity)
        }
        for name, arity in algebra.signature.symbols
    }
    sub = QuantAlgebra(sub_carrier, algebra.signature, tables)
    inclusion = Homomorphism(sub, algebra, {p: p for p in sub_carrier.points})
    return sub, inclusion


def image_factorize(f: Homomorphism) -> tuple[Homomorphism, Homomorphism]:
    """Split f into a surjection onto its image followed by an isometric
    embedding.

    Image points are named by their least preimage in source point order,
    which keeps serialization deterministic.
    """
    source, target = f.source, f.target
    rep_of_value: dict[str, str] = {}
    for p in source.carrier.points:  # sorted, so first hit is least
        rep_of_value.setdefault(f(p), p)
    value_of_rep = {rep: val for val, rep in rep_of_value.items()}
    reps = sorted(value_of_rep)
    rows = [
        [target.carrier.dist(value_of_rep[a], value_of_rep[b]) for b in reps]
        for a in reps
    ]
    image_carrier = MetricSpace(reps, rows)
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    for name, arity in source.signature.symbols:
        table: dict[tuple[str, ...], str] = {}
        for xs in itertools.product(reps, repeat=arity):
            value = target.op(name, tuple(value_of_rep[x] for x in xs))
            table[xs] = rep_of_value[value]  # image is op-closed
        tables[name] = table
    image = QuantAlgebra(image_carrier, source.signature, tables)
    onto = Homomorphism(source, image, {p: rep_of_value[f(p)] for p in source.carrier.points})
    embed = Homomorphism(image, target, value_of_rep)
    return onto, embed
