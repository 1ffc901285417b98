import random
from fractions import Fraction

import pytest

from operahedra import complexes as cx
from operahedra import geometry as geo
from operahedra.errors import NotGenericError
from operahedra.skeleton import build_skeleton
from operahedra.trees import (
    PlanarTree,
    nesting_to_expression,
    parse_expression,
)


def binary_expressions(n):
    """All combination trees on n ordered arity-one generators."""
    names = [chr(ord("a") + i) for i in range(n)]

    def rec(lo, hi):
        if hi - lo == 1:
            return [parse_expression(f"{names[lo]}:1")]
        out = []
        for mid in range(lo + 1, hi):
            for left in rec(lo, mid):
                for right in rec(mid, hi):
                    from operahedra.trees import Composition

                    out.append(Composition(left, right, 1))
        return out

    return rec(0, n)


def test_loday_point_examples():
    assert geo.loday_point(parse_expression("a:1")) == ()
    assert geo.loday_point(parse_expression("(a:1 o1 b:1)")) == (1,)
    right = parse_expression("(a:1 o1 (b:1 o1 (c:1 o1 d:1)))")
    left = parse_expression("(((a:1 o1 b:1) o1 c:1) o1 d:1)")
    assert geo.loday_point(right) == (3, 2, 1)
    assert geo.loday_point(left) == (1, 2, 3)


def test_loday_sum_invariant():
    for n in range(2, 10):
        target = Fraction(n * (n - 1), 2)
        for expr in binary_expressions(n):
            assert sum(geo.loday_point(expr)) == target


def test_loday_injective():
    for n in range(2, 9):
        points = [geo.loday_point(e) for e in binary_expressions(n)]
        assert len(set(points)) == len(points)


def test_realize_linear_rejects_branching():
    sk = build_skeleton(PlanarTree.corolla(2))
    with pytest.raises(ValueError):
        geo.realize_linear(sk)


def test_decreasing_vector_matches_rewrite_orientation():
    for p in range(2, 7):
        sk = build_skeleton(PlanarTree.linear(p))
        points = geo.realize_linear(sk)
        vec = geo.decreasing_vector(p - 1)  # (p-2, ..., 1, 0)
        assert geo.induced_orientation(sk.complex, points, vec) == sk.orientation


def test_constant_vector_not_generic():
    sk = build_skeleton(PlanarTree.linear(4))
    points = geo.realize_linear(sk)
    # every vertex has coordinate sum 6, so any constant vector ties everywhere
    with pytest.raises(NotGenericError):
        geo.induced_orientation(sk.complex, points, (1, 1, 1))
    with pytest.raises(NotGenericError):
        geo.induced_orientation(sk.complex, points, (0, 0, 0))


def test_not_generic_names_an_edge():
    sk = build_skeleton(PlanarTree.linear(4))
    points = geo.realize_linear(sk)
    try:
        geo.induced_orientation(sk.complex, points, (1, 1, 1))
    except NotGenericError as exc:
        assert 0 <= exc.edge < len(sk.complex.edges)


def test_random_generic_vectors_always_certify():
    rng = random.Random(2024)
    sk = build_skeleton(PlanarTree.linear(5))
    points = geo.realize_linear(sk)
    for _ in range(100):
        vec = geo.random_generic_vector(sk.complex, points, rng)
        result = geo.polytope_morse_check(sk.complex, points, vec)
        assert isinstance(result, cx.MorseCertificate)


def test_decreasing_vector_sink_is_right_comb():
    sk = build_skeleton(PlanarTree.linear(4, labels=list("abcd")))
    points = geo.realize_linear(sk)
    cert = geo.polytope_morse_check(sk.complex, points, geo.decreasing_vector(3))
    assert isinstance(cert, cx.MorseCertificate)
    assert str(sk.expression_of(cert.global_sink)) == (
        "(a:1 o1 (b:1 o1 (c:1 o1 d:1)))"
    )


def test_generic_vector_on_spiked_octagon_finds_counterexample():
    c, points = cx.outgoingpoly()
    rng = random.Random(7)
    vec = geo.random_generic_vector(c, points, rng)
    result = geo.polytope_morse_check(c, points, vec)
    assert isinstance(result, cx.CounterexampleReport)
    assert result.condition == "disconnected_link"


def test_realization_json_round_trip():
    sk = build_skeleton(PlanarTree.linear(4))
    points = geo.realize_linear(sk)
    data = geo.realization_to_json(points)
    back = geo.realization_from_json(data)
    assert back == points


def test_realization_agrees_with_loday_on_vertices():
    sk = build_skeleton(PlanarTree.linear(5))
    points = geo.realize_linear(sk)
    for v, m in enumerate(sk.vertices):
        expr = nesting_to_expression(sk.tree, m)
        assert points[v] == geo.loday_point(expr)
