import itertools

import pytest

import oracles
from operahedra.errors import ArityError, NotMaximalError, ParseError
from operahedra.trees import (
    Composition,
    Generator,
    PlanarTree,
    enumerate_maximal_nestings,
    enumerate_nests,
    enumerate_ordered_trees,
    expression_to_nesting,
    full_nest,
    is_maximal_nesting,
    nesting_to_expression,
    nests_compatible,
    parse_expression,
    validate_maximal_nesting,
)


def test_parse_single_generator():
    e = parse_expression("k:2")
    assert e == Generator("k", 2)
    assert e.arity == 2


def test_parse_composition_arity_arithmetic():
    e = parse_expression("((a:2 o1 b:1) o2 c:1)")
    assert isinstance(e, Composition)
    assert e.arity == 2  # (2 + 1 - 1) + 1 - 1


def test_parse_slot_out_of_range():
    with pytest.raises(ArityError):
        parse_expression("(a:1 o2 b:1)")


def test_parse_is_whitespace_insensitive():
    assert parse_expression("((a:2o1b:1)o2c:1)") == parse_expression(
        "((a:2 o1 b:1) o2 c:1)"
    )


@pytest.mark.parametrize("text", ["", "k", "k:", "(a:1 o1)", "(a:1 o1 b:1) c", "a:0x"])
def test_parse_rejects_malformed(text):
    with pytest.raises((ParseError, ArityError)):
        parse_expression(text)


def test_zero_arity_generator_rejected():
    with pytest.raises(ArityError):
        parse_expression("k:0")


def test_expression_round_trip_text():
    texts = ["k:2", "((a:2 o1 b:1) o2 c:1)", "(((k:3 o1 t:1) o1 m:1) o2 n:1)"]
    for text in texts:
        e = parse_expression(text)
        assert parse_expression(str(e)) == e


def test_linear_composition_unfolds_to_chain():
    e = parse_expression("((k:1 o1 t:1) o1 m:1)")
    tree, nesting = expression_to_nesting(e)
    assert tree.children == ((1,), (2,), ())
    assert nesting == frozenset({frozenset({0, 1}), frozenset({0, 1, 2})})


def test_figure_nesting():
    # root with three children, the first carrying a fourth vertex:
    # successive grafts produce the chain of nested composites
    e = parse_expression("((((k:3 o1 t:1) o1 m:1) o2 n:1) o3 r:1)")
    tree, nesting = expression_to_nesting(e)
    assert tree.labels == ("k", "t", "m", "n", "r")
    assert nesting == frozenset(
        {
            frozenset({0, 1}),
            frozenset({0, 1, 2}),
            frozenset({0, 1, 2, 3}),
            frozenset({0, 1, 2, 3, 4}),
        }
    )


def test_single_generator_gives_point():
    tree, nesting = expression_to_nesting(parse_expression("k:3"))
    assert tree.p == 1
    assert nesting == frozenset()
    assert nesting_to_expression(tree, nesting) == Generator("k", 3)


def test_nesting_to_expression_right_comb():
    tree = PlanarTree.linear(4, labels=list("abcd"))
    nesting = frozenset(
        {frozenset({2, 3}), frozenset({1, 2, 3}), frozenset({0, 1, 2, 3})}
    )
    e = nesting_to_expression(tree, nesting)
    assert str(e) == "(a:1 o1 (b:1 o1 (c:1 o1 d:1)))"


def test_nesting_to_expression_rejects_non_maximal():
    tree = PlanarTree.linear(4)
    with pytest.raises(NotMaximalError):
        nesting_to_expression(tree, frozenset({frozenset({0, 1})}))


def test_overlapping_nests_rejected():
    tree = PlanarTree.linear(4)
    bad = frozenset(
        {frozenset({1, 2}), frozenset({0, 1}), frozenset({0, 1, 2, 3})}
    )
    with pytest.raises(NotMaximalError):
        validate_maximal_nesting(tree, bad)


def test_round_trip_all_maximal_nestings_small_trees():
    for p in range(1, 6):
        for tree in enumerate_ordered_trees(p):
            for m in enumerate_maximal_nestings(tree):
                expr = nesting_to_expression(tree, m)
                tree2, m2 = expression_to_nesting(expr)
                assert tree2.children == tree.children
                assert tree2.leaf_slots == tree.leaf_slots
                assert m2 == m


def test_enumerate_nests_linear3():
    tree = PlanarTree.linear(3)
    assert enumerate_nests(tree) == [
        frozenset({0, 1}),
        frozenset({1, 2}),
        frozenset({0, 1, 2}),
    ]


def test_enumerate_nests_corolla_excludes_disconnected():
    tree = PlanarTree.corolla(2)
    assert enumerate_nests(tree) == [
        frozenset({0, 1}),
        frozenset({0, 2}),
        frozenset({0, 1, 2}),
    ]


def test_enumerate_nests_point():
    assert enumerate_nests(PlanarTree.linear(1)) == []


def test_nests_match_brute_force():
    for p in range(1, 6):
        for tree in enumerate_ordered_trees(p):
            assert set(enumerate_nests(tree)) == set(oracles.nests_brute(tree))


def test_maximal_nesting_counts():
    assert len(enumerate_maximal_nestings(PlanarTree.linear(4))) == 5
    assert len(enumerate_maximal_nestings(PlanarTree.corolla(3))) == 6
    assert len(enumerate_maximal_nestings(PlanarTree.linear(2))) == 1


def test_maximal_nestings_match_brute_force():
    for p in range(1, 6):
        for tree in enumerate_ordered_trees(p):
            ours = set(enumerate_maximal_nestings(tree))
            brute = set(oracles.maximal_nestings_brute(tree))
            assert ours == brute


def test_linear_tree_catalan_counts():
    for p in range(1, 9):
        tree = PlanarTree.linear(p)
        assert len(enumerate_maximal_nestings(tree)) == oracles.catalan(p - 1)


def test_maximal_nesting_invariants_exhaustive():
    for p in range(1, 7):
        for tree in enumerate_ordered_trees(p):
            full = full_nest(tree)
            for m in enumerate_maximal_nestings(tree):
                assert len(m) == max(p - 1, 0)
                if p >= 2:
                    assert full in m
                assert is_maximal_nesting(tree, m)


def test_compatibility_symmetric_and_full_always_fits():
    for tree in enumerate_ordered_trees(5):
        nests = enumerate_nests(tree)
        full = full_nest(tree)
        for a, b in itertools.combinations(nests, 2):
            assert nests_compatible(a, b) == nests_compatible(b, a)
            assert nests_compatible(a, full)


def test_labels_do_not_change_combinatorics():
    a = PlanarTree.linear(4, labels=list("abcd"))
    b = PlanarTree.linear(4, labels=list("wxyz"))
    assert enumerate_maximal_nestings(a) == enumerate_maximal_nestings(b)


def test_tree_json_round_trip():
    tree = PlanarTree(
        children=[(1, 2), (), ()],
        leaf_slots=[(1, 0, 0), (1,), (2,)],
        labels=["k", None, "c"],
    )
    assert PlanarTree.from_json(tree.to_json()) == tree


def test_tree_validation_rejects_bad_preorder():
    with pytest.raises(ValueError):
        PlanarTree(children=[(2,), (), (1,)])


def test_tree_validation_rejects_zero_arity():
    with pytest.raises(ValueError):
        PlanarTree(children=[(1,), ()], leaf_slots=[(0, 0), (0,)])


def test_ordered_tree_enumeration_is_catalan():
    for p in range(1, 8):
        assert len(enumerate_ordered_trees(p)) == oracles.catalan(p - 1)
