import random

import pytest

from lamenum.errors import ParseError
from lamenum.terms import (
    Binary,
    Family,
    Kind,
    Leaf,
    Unary,
    parse,
    render,
    stats,
    validate,
)

from oracles import closed_terms, motzkin_skeletons

IDENTITY = Unary(Leaf(1))
# (\x. x x) (\y. y) as an enriched tree
FIG1_LEFT = Binary(Unary(Binary(Leaf(1), Leaf(1))), Unary(Leaf(1)))
CONST = Unary(Unary(Leaf(2)))  # \x. \y. x


def test_stats_identity():
    st = stats(IDENTITY)
    assert st.size == 2
    assert st.unary_height == 1
    assert st.unary_node_count == 1
    assert st.max_binding_length == 1


def test_stats_application_example():
    st = stats(FIG1_LEFT)
    assert st.size == 7
    assert st.unary_height == 1
    assert st.unary_node_count == 2


def test_stats_binding_length():
    st = stats(CONST)
    assert st.max_binding_length == 2
    assert st.unary_height == 2


def test_stats_profiles_sum_to_size():
    for n in range(2, 9):
        for t in closed_terms(n):
            st = stats(t)
            assert sum(st.profile_by_depth) == st.size == n
            assert sum(st.profile_by_unary_level) == n


def test_stats_inequality_chain():
    for n in range(2, 10):
        for t in closed_terms(n):
            st = stats(t)
            assert st.max_binding_length <= st.unary_height <= st.unary_node_count <= st.size


def test_size_parity_identity():
    # q unary and m binary nodes give size q + 2m + 1
    for n in range(1, 10):
        for t in motzkin_skeletons(n):
            st = stats(t)
            binaries = (st.size - st.unary_node_count - 1) // 2
            assert st.size == st.unary_node_count + 2 * binaries + 1


def test_validate_family_examples():
    assert validate(IDENTITY, Family.lambda_unary_height(1))
    assert not validate(CONST, Family.lambda_binding_length(1))
    assert not validate(Unary(Leaf(1)), Family.motzkin())
    assert validate(Unary(Leaf()), Family.motzkin())
    assert not validate(Leaf(), Family.lambda_all())  # open term
    assert not validate(Unary(Leaf(2)), Family.lambda_all())  # dangling index


def test_validate_exact_height():
    fam = Family.motzkin_height_exact(1)
    assert validate(Unary(Leaf()), fam)
    assert not validate(Binary(Unary(Leaf()), Leaf()), fam)  # one leaf at height 0
    assert validate(Binary(Unary(Leaf()), Unary(Leaf())), fam)


def test_render_debruijn_examples():
    assert render(IDENTITY) == "\\ 1"
    assert render(FIG1_LEFT) == "((\\ (1 1)) (\\ 1))"


def test_parse_debruijn_examples():
    assert parse("\\ 1") == IDENTITY
    assert parse("((\\ (1 1)) (\\ 1))") == FIG1_LEFT
    assert parse("  (  \\   1   \\ 2 ) ") == Binary(Unary(Leaf(1)), Unary(Leaf(2)))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse("(1 1")
    assert e.value.position >= 0
    with pytest.raises(ParseError):
        parse("\\")
    with pytest.raises(ParseError):
        parse("(1 2 3)")
    with pytest.raises(ParseError):
        parse("1 1")
    with pytest.raises(ParseError):
        parse("x")


def test_round_trip_exhaustive_small():
    for n in range(2, 8):
        for t in closed_terms(n):
            assert parse(render(t, "debruijn"), "debruijn") == t
            assert parse(render(t, "json"), "json") == t


def _random_term(rng: random.Random, size: int, depth_u: int = 0):
    if size == 1:
        if depth_u and rng.random() < 0.8:
            return Leaf(rng.randrange(depth_u) + 1)
        return Leaf()
    if size == 2 or rng.random() < 0.4:
        return Unary(_random_term(rng, size - 1, depth_u + 1))
    a = rng.randrange(1, size - 1)
    return Binary(_random_term(rng, a, depth_u), _random_term(rng, size - 1 - a, depth_u))


def test_round_trip_random_terms():
    rng = random.Random(1234)
    for _ in range(1000):
        t = _random_term(rng, rng.randrange(1, 40))
        assert parse(render(t, "debruijn"), "debruijn") == t
        assert parse(render(t, "json"), "json") == t


def test_render_deep_term_is_iterative():
    t = Leaf(1)
    for _ in range(50_000):
        t = Unary(t)
    text = render(t)
    assert text.startswith("\\ \\") and text.endswith("1")
    assert stats(t).unary_node_count == 50_000


def test_dot_output_shape():
    dot = render(FIG1_LEFT, "dot")
    assert dot.startswith("digraph")
    assert dot.count("style=dashed") == 3  # three bound leaves
    assert dot.count("->") == 6 + 3  # six child edges, three binder edges


def test_family_labels_round_trip():
    fams = [
        Family.lambda_all(),
        Family.motzkin(),
        Family.lambda_exact_unary(3),
        Family.motzkin_height_at_most(2),
    ]
    for fam in fams:
        assert Family.from_label(fam.label()) == fam


def test_family_validation():
    with pytest.raises(ValueError):
        Family(Kind.LAMBDA_ALL, 3)
    with pytest.raises(ValueError):
        Family(Kind.LAMBDA_EXACT_UNARY)
    with pytest.raises(ValueError):
        Family("nonsense")
    with pytest.raises(ValueError):
        Leaf(-1)


def test_parity_forbidden():
    assert Family.lambda_exact_unary(2).parity_forbidden(4)
    assert not Family.lambda_exact_unary(2).parity_forbidden(5)
    assert Family.motzkin_exact_unary(3).parity_forbidden(1001)
    assert not Family.lambda_unary_height(3).parity_forbidden(7)
