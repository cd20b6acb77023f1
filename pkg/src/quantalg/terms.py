"""Finitary signatures and terms over a generator set.

A term is either a generator (a bare identifier) or a composite built from
an operation symbol and child terms.  The free algebra over a metric space
carries the inductively defined term metric: generator pairs inherit the
space's distance, dissimilar terms sit at infinity, and similar composites
take the maximum of their children's distances.

The full term space is infinite whenever the signature has operations, so
every computation here goes through an explicit depth bound and a term
count cap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .distance import INF, Dist, dist_max
from .errors import CapExceededError, StructuralError
from .spaces import PseudoSpace

DEFAULT_TERM_CAP = 100_000


@dataclass(frozen=True)
class Signature:
    """Operation symbols with arities; names are distinct, arities >= 0."""

    symbols: tuple[tuple[str, int], ...]

    def __init__(self, symbols: Iterable[tuple[str, int]]):
        syms = tuple((str(name), int(arity)) for name, arity in symbols)
        names = [name for name, _ in syms]
        if len(set(names)) != len(names):
            raise StructuralError("duplicate operation symbol names")
        for name, arity in syms:
            if arity < 0:
                raise StructuralError(f"negative arity for symbol {name!r}")
        object.__setattr__(self, "symbols", syms)

    def arity(self, name: str) -> int:
        for sym, ar in self.symbols:
            if sym == name:
                return ar
        raise StructuralError(f"unknown operation symbol {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def __contains__(self, name: str) -> bool:
        return any(sym == name for sym, _ in self.symbols)


@dataclass(frozen=True)
class Term:
    """A generator (args is None) or a composite (args is a tuple)."""

    head: str
    args: tuple["Term", ...] | None = None

    @property
    def is_generator(self) -> bool:
        return self.args is None

    def depth(self) -> int:
        if self.args is None:
            return 0
        return 1 + max((child.depth() for child in self.args), default=0)

    def generators(self) -> set[str]:
        if self.args is None:
            return {self.head}
        out: set[str] = set()
        for child in self.args:
            out |= child.generators()
        return out

    def __str__(self) -> str:
        if self.args is None:
            return self.head
        return f"{self.head}({', '.join(str(a) for a in self.args)})"


def var(name: str) -> Term:
    return Term(name)


def op(name: str, *args: Term) -> Term:
    return Term(name, tuple(args))


def parse_term(text: str) -> Term:
    """Parse prefix syntax: "mul(x, e())"; constants always carry "()"."""
    term, rest = _parse_term(text.strip())
    if rest.strip():
        raise StructuralError(f"trailing input after term: {rest!r}")
    return term


def _parse_term(text: str) -> tuple[Term, str]:
    name, rest = _parse_ident(text)
    rest = rest.lstrip()
    if not rest.startswith("("):
        return Term(name), rest
    rest = rest[1:].lstrip()
    args: list[Term] = []
    if rest.startswith(")"):
        return Term(name, ()), rest[1:]
    while True:
        child, rest = _parse_term(rest)
        args.append(child)
        rest = rest.lstrip()
        if rest.startswith(","):
            rest = rest[1:].lstrip()
            continue
        if rest.startswith(")"):
            return Term(name, tuple(args)), rest[1:]
        raise StructuralError(f"expected ',' or ')' in term near {rest!r}")


def _parse_ident(text: str) -> tuple[str, str]:
    i = 0
    while i < len(text) and text[i] not in "(),":
        i += 1
    name = text[:i].strip()
    if not name:
        raise StructuralError(f"expected an identifier near {text!r}")
    return name, text[i:]


def check_term(term: Term, signature: Signature, generators: Iterable[str]) -> None:
    """Structural well-formedness: arities match, generators are declared."""
    gens = set(generators)
    def walk(t: Term) -> None:
        if t.args is None:
            if t.head not in gens:
                raise StructuralError(f"undeclared generator {t.head!r}")
            return
        if signature.arity(t.head) != len(t.args):
            raise StructuralError(
                f"symbol {t.head!r} applied to {len(t.args)} arguments"
            )
        for child in t.args:
            walk(child)
    walk(term)


def similar(t: Term, s: Term) -> bool:
    """Terms differing only in their generators.

    Two generators are always similar; composites must share the head
    symbol and have pairwise similar children.  The same symbol used at
    two different arities means a malformed term, which is an error.
    """
    if t.args is None and s.args is None:
        return True
    if t.args is None or s.args is None:
        return False
    if t.head != s.head:
        return False
    if len(t.args) != len(s.args):
        raise StructuralError(
            f"symbol {t.head!r} used at arities {len(t.args)} and {len(s.args)}"
        )
    return all(similar(a, b) for a, b in zip(t.args, s.args))


def term_distance(t: Term, s: Term, space: PseudoSpace) -> Dist:
    """The term metric over a space: generators inherit the space distance,
    dissimilar terms are infinitely far apart, similar composites take the
    maximum over their children."""
    if t.args is None and s.args is None:
        return space.dist(t.head, s.head)
    if not similar(t, s):
        return INF
    assert t.args is not None and s.args is not None
    return dist_max(term_distance(a, b, space) for a, b in zip(t.args, s.args))


def _term_key(t: Term):
    if t.args is None:
        return (0, t.head, ())
    return (t.depth(), t.head, tuple(_term_key(a) for a in t.args))


def enumerate_terms(
    signature: Signature,
    generators: Iterable[str],
    depth: int,
    max_terms: int = DEFAULT_TERM_CAP,
) -> list[Term]:
    """All terms of depth <= depth, ordered by depth, head symbol, children.

    The depth of a generator is 0; a composite adds one to the maximum
    child depth (a constant has depth 1).  Raises CapExceededError when the
    term count would pass max_terms.
    """
    if depth < 0:
        raise StructuralError("depth must be nonnegative")
    gens = sorted(set(generators))
    depth_of: dict[Term, int] = {Term(g): 0 for g in gens}
    if len(depth_of) > max_terms:
        raise CapExceededError("term enumeration", len(depth_of), max_terms)
    for d in range(1, depth + 1):
        pool = [t for t, k in depth_of.items() if k <= d - 1]
        grown = False
        for name, arity in signature.symbols:
            for children in itertools.product(pool, repeat=arity):
                candidate = Term(name, children)
                if candidate in depth_of:
                    continue
                depth_of[candidate] = 1 + max(
                    (depth_of[c] for c in children), default=0
                )
                grown = True
                if len(depth_of) > max_terms:
                    raise CapExceededError("term enumeration", len(depth_of), max_terms)
        if not grown:
            break
    return sorted(depth_of, key=_term_key)


def substitute(term: Term, assignment: Mapping[str, Term]) -> Term:
    """Replace generators by terms; unmapped generators stay themselves."""
    if term.args is None:
        return assignment.get(term.head, term)
    return Term(term.head, tuple(substitute(a, assignment) for a in term.args))


def evaluate(term: Term, algebra, assignment: Mapping[str, str]) -> str:
    """Structural recursion through the algebra's operation tables."""
    if term.args is None:
        try:
            return assignment[term.head]
        except KeyError:
            raise StructuralError(f"assignment undefined on generator {term.head!r}") from None
    children = tuple(evaluate(a, algebra, assignment) for a in term.args)
    return algebra.op(term.head, children)


def hom_distance_bounded(
    space: PseudoSpace,
    algebra,
    f1: Mapping[str, str],
    f2: Mapping[str, str],
    depth: int,
    max_terms: int = DEFAULT_TERM_CAP,
) -> Dist:
    """Distance of the two induced homomorphisms, over terms of bounded depth.

    Returns the supremum of carrier distances between the evaluations of
    every term of depth <= depth.  The extension lemma makes this equal to
    the supremum over the generators alone, at every depth; this operation
    exists so that equality can be tested.
    """
    for f, tag in ((f1, "first"), (f2, "second")):
        if any(p not in f for p in space.points):
            raise StructuralError(f"{tag} assignment is not total on the space")
        for x, y in space.point_pairs():
            if algebra.carrier.dist(f[x], f[y]) > space.dist(x, y):
                raise StructuralError(f"{tag} assignment is not nonexpanding at ({x!r}, {y!r})")
    terms = enumerate_terms(algebra.signature, space.points, depth, max_terms)
    return dist_max(
        algebra.carrier.dist(evaluate(t, algebra, f1), evaluate(t, algebra, f2))
        for t in terms
    )
