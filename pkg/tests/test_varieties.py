import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quantalg import (
    CapExceededError,
    Dist,
    Homomorphism,
    QuantAlgebra,
    QuantEquation,
    Signature,
    StructuralError,
    VarietyPresentation,
    ZERO,
    birkhoff_soundness,
    commutativity_equation,
    counterexample_demo,
    discrete_space,
    enumerate_terms,
    free_in_variety_bounded,
    generated_congruence,
    image_factorize,
    in_variety,
    make_space,
    monoid_equations,
    monoid_signature,
    op,
    quotient_algebra,
    satisfies,
    singleton_space,
    substitute,
    term_distance,
    truncated_addition_monoid,
    var,
)
from quantalg.varieties import SatisfactionResult

import strategies as G

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def max_monoid(k=3, step="1"):
    """Join on a chain: associative, commutative, unit p0, nonexpanding."""
    pts = [f"p{i}" for i in range(k)]
    gap = Fraction(step)
    sp = make_space(
        pts,
        {
            (pts[i], pts[j]): Dist(gap * (j - i))
            for i in range(k)
            for j in range(i + 1, k)
        },
    )
    tables = {
        "add": {(a, b): max(a, b) for a in pts for b in pts},
        "e": {(): "p0"},
    }
    return QuantAlgebra(sp, monoid_signature(), tables)


def left_projection_monoid(delta="1/2"):
    """x*y = x unless x is the unit; noncommutative, uniformly delta apart."""
    pts = ["a", "b", "u"]
    sp = make_space(pts, {(x, y): delta for x, y in itertools.combinations(pts, 2)})
    tables = {
        "add": {(x, y): (y if x == "u" else x) for x in pts for y in pts},
        "e": {(): "u"},
    }
    return QuantAlgebra(sp, monoid_signature(), tables)


def cyclic_monoid(k=3):
    pts = [str(i) for i in range(k)]
    sp = discrete_space(pts)
    tables = {
        "add": {(a, b): str((int(a) + int(b)) % k) for a in pts for b in pts},
        "e": {(): "0"},
    }
    return QuantAlgebra(sp, monoid_signature(), tables)


def monoid_variety(eps=None):
    eqs = monoid_equations()
    if eps is not None:
        eqs.append(commutativity_equation(eps))
    return VarietyPresentation(monoid_signature(), eqs)


def test_equation_construction():
    eq = QuantEquation(["y", "x"], op("add", var("x"), var("y")), var("x"), "1/2")
    assert eq.variables == ("x", "y")
    with pytest.raises(StructuralError):
        QuantEquation(["x"], var("x"), var("y"), 0)  # y undeclared
    with pytest.raises(StructuralError):
        QuantEquation(["x"], var("x"), var("x"), "inf")


def test_variety_checks_equations_against_signature():
    with pytest.raises(StructuralError):
        VarietyPresentation(
            Signature([("add", 2)]),
            [QuantEquation(["x"], op("add", var("x")), var("x"), 0)],
        )


def test_satisfies_trivial_cases():
    alg = max_monoid(3)
    x = var("x")
    same = QuantEquation(["x"], op("add", x, x), op("add", x, x), 0)
    assert satisfies(alg, same).ok

    one = QuantAlgebra(
        singleton_space("s"), monoid_signature(),
        {"add": {("s", "s"): "s"}, "e": {(): "s"}},
    )
    assert satisfies(one, commutativity_equation(0)).ok


def test_satisfies_witness_is_least():
    alg = left_projection_monoid("1/2")
    result = satisfies(alg, commutativity_equation("1/4"))
    assert not result.ok
    assert result.distance == Dist("1/2")
    # lexicographically least violating assignment: points are a < b < u
    assert result.witness == {"x": "a", "y": "b"}


def test_satisfies_commutative_monoid():
    assert satisfies(cyclic_monoid(2), commutativity_equation(0)).ok


def test_satisfies_cap():
    alg = max_monoid(4)
    eq = QuantEquation(
        ["x", "y", "z"],
        op("add", var("x"), op("add", var("y"), var("z"))),
        op("add", op("add", var("x"), var("y")), var("z")),
        0,
    )
    with pytest.raises(CapExceededError):
        satisfies(alg, eq, max_assignments=10)


def test_in_variety_monoid_axioms():
    report = in_variety(max_monoid(4, "1/3"), monoid_variety())
    assert report.ok
    assert len(report.per_equation) == 3

    # epsilon below the actual commutator distance fails
    eps_report = in_variety(left_projection_monoid("1/2"), monoid_variety("1/4"))
    assert not eps_report.ok

    empty = VarietyPresentation(monoid_signature(), [])
    assert in_variety(left_projection_monoid(), empty).ok


def test_epsilon_monotonicity():
    alg = left_projection_monoid("1/2")
    assert not satisfies(alg, commutativity_equation("1/4")).ok
    assert satisfies(alg, commutativity_equation("1/2")).ok
    assert satisfies(alg, commutativity_equation("3/4")).ok


def test_right_continuity_in_epsilon():
    # distances form a finite set, so satisfaction at eps equals satisfaction
    # at every rational eps' in (eps, eps + gap)
    alg = left_projection_monoid("1/2")
    eq_at = lambda e: satisfies(alg, commutativity_equation(e)).ok
    assert eq_at(Fraction(1, 2))
    for k in range(1, 6):
        assert eq_at(Fraction(1, 2) + Fraction(1, 10 ** k)) == eq_at(Fraction(1, 2))


def test_substitution_preserves_satisfaction():
    alg = max_monoid(3)
    eq = commutativity_equation(0)
    assert satisfies(alg, eq).ok
    pool = enumerate_terms(alg.signature, ["x", "y", "w"], 1, max_terms=500)
    rng = random.Random(5)
    for _ in range(10):
        sub = {"x": rng.choice(pool), "y": rng.choice(pool)}
        lhs = substitute(eq.lhs, sub)
        rhs = substitute(eq.rhs, sub)
        variables = sorted(lhs.generators() | rhs.generators())
        inst = QuantEquation(variables, lhs, rhs, eq.epsilon)
        assert satisfies(alg, inst).ok


def test_homomorphic_images_preserve_satisfaction():
    rng = random.Random(7)
    variety = monoid_variety("1/2")
    for alg in (max_monoid(3), cyclic_monoid(3), left_projection_monoid("1/2")):
        assert in_variety(alg, variety).ok
        cong = generated_congruence(alg, G.rand_constraints(rng, alg.carrier))
        _, onto = quotient_algebra(cong)
        assert onto.is_surjective()
        assert in_variety(onto.target, variety).ok


def test_quotient_maps_satisfy_universal_property():
    from quantalg import universal_property_check

    rng = random.Random(11)
    alg = max_monoid(3)
    cong = generated_congruence(alg, [("p0", "p1", "1/4")])
    _, onto = quotient_algebra(cong)
    assert onto.is_surjective()
    check = universal_property_check(cong.sub, onto.as_space_map(), onto.as_space_map())
    assert check.ok


def test_birkhoff_soundness_one_point():
    one = QuantAlgebra(
        singleton_space("s"), monoid_signature(),
        {"add": {("s", "s"): "s"}, "e": {(): "s"}},
    )
    report = birkhoff_soundness(monoid_variety("1/2"), one, one)
    assert report.ok


def test_birkhoff_soundness_commutative_monoids():
    variety = monoid_variety("1/2")
    a = max_monoid(3, "1/4")
    b = cyclic_monoid(2)
    rng = random.Random(13)
    cong = generated_congruence(a, G.rand_constraints(rng, a.carrier))
    _, onto = quotient_algebra(cong)
    report = birkhoff_soundness(variety, a, b, homs=[onto])
    assert report.ok
    labels = [c.label for c in report.checks]
    assert any("product" in lab for lab in labels)
    assert any("homomorphic image" in lab for lab in labels)


def test_free_bounded_no_equations_is_term_metric():
    empty = VarietyPresentation(monoid_signature(), [])
    m = make_space(["x", "y"], {("x", "y"): 1})
    free = free_in_variety_bounded(empty, m, 2)
    for i, t in enumerate(free.terms):
        for j, s in enumerate(free.terms):
            assert free.matrix[i][j] == term_distance(t, s, m)
    assert free.over_approximation


def test_free_bounded_epsilon_commutative():
    variety = monoid_variety("1/3")
    m = discrete_space(["x", "y"])
    free = free_in_variety_bounded(variety, m, 2)
    xy = op("add", var("x"), var("y"))
    yx = op("add", var("y"), var("x"))
    assert free.distance(xy, yx) <= Dist("1/3")
    # unit laws force distance 0 between add(x, e()) and x
    assert free.distance(op("add", var("x"), op("e")), var("x")) == ZERO


def test_free_bounded_monotone_in_depth():
    variety = monoid_variety("1/3")
    m = make_space(["x", "y"], {("x", "y"): 1})
    shallow = free_in_variety_bounded(variety, m, 1)
    deep = free_in_variety_bounded(variety, m, 2)
    for t in shallow.terms:
        for s in shallow.terms:
            assert deep.distance(t, s) <= shallow.distance(t, s)


def test_free_bounded_matrix_is_pseudometric():
    variety = monoid_variety("1/3")
    m = make_space(["x", "y"], {("x", "y"): 1})
    free = free_in_variety_bounded(variety, m, 2)
    free.as_pseudo_space()  # constructor validates the axioms


def test_demo_report():
    report = counterexample_demo(3)
    assert report.ok
    assert report.sum_violations == 0
    assert report.witness is not None
    assert report.witness.bound == Dist(1)
    assert report.witness.actual == Dist(2)
    assert report.associativity_ok and report.left_unit_ok and report.right_unit_ok
    with pytest.raises(StructuralError):
        counterexample_demo(2)


def test_demo_scales_with_n():
    report = counterexample_demo(5)
    assert report.ok and report.size == 5


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_satisfaction_transfers_along_surjections(seed):
    rng = random.Random(seed)
    alg = rng.choice([max_monoid(3), cyclic_monoid(3), left_projection_monoid("1/2")])
    eq = commutativity_equation(rng.choice(["1/2", "1", "2"]))
    if not satisfies(alg, eq).ok:
        return
    cong = generated_congruence(alg, G.rand_constraints(rng, alg.carrier))
    _, onto = quotient_algebra(cong)
    assert satisfies(onto.target, eq).ok
