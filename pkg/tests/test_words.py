import random

import pytest
from hypothesis import given, strategies as st

from binate.words import (
    FreeWord,
    Gen,
    WordSyntaxError,
    are_conjugate,
    commutator,
    cyclic_normal_form,
    cyclically_reduce,
    evaluate,
    exponent_sum,
    parse_gen,
    parse_word,
    random_word,
    substitute,
)

X, Y, Z = Gen("x"), Gen("y"), Gen("z")
x, y, z = (FreeWord.gen(g) for g in (X, Y, Z))

letters = st.lists(st.tuples(st.sampled_from([X, Y, Z]), st.sampled_from([1, -1])), max_size=14)
words = letters.map(FreeWord.of)


def _letter_reduce(ls):
    """Stack-based free reduction on single letters (independent of syllable merging)."""
    out = []
    for g, e in ls:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return out


def _letters(w):
    return [(g, 1 if e > 0 else -1) for g, e in w.syllables for _ in range(abs(e))]


def test_basic_reduction():
    assert (x * x.inverse()).is_identity()
    assert str(x * y * y.inverse() * x) == "x^2"
    assert len(parse_word("x^3 y^-2")) == 5


def test_commutator_convention():
    assert commutator(x, y) == x * y * x.inverse() * y.inverse()
    assert str(commutator(x, y)) == "x y x^-1 y^-1"
    assert commutator(x, x).is_identity()
    assert commutator(x, FreeWord()).is_identity()


def test_exponent_sum():
    assert exponent_sum(commutator(x, y), X) == 0
    assert exponent_sum(parse_word("x^3 y x^-1"), "x") == 2


@given(letters)
def test_reduce_matches_letter_stack(ls):
    assert _letters(FreeWord.of(ls)) == _letter_reduce(ls)


@given(letters)
def test_reduce_idempotent(ls):
    w = FreeWord.of(ls)
    assert FreeWord.of(w.syllables) == w


@given(words, words, words)
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    assert (a * b).inverse() == b.inverse() * a.inverse()


@given(words, words)
def test_normal_form_conjugation_invariant(w, g):
    assert cyclic_normal_form(g * w * g.inverse()) == cyclic_normal_form(w)


def _rotations(w):
    ls = _letter_reduce(_letters(w))
    while len(ls) >= 2 and ls[0] == (ls[-1][0], -ls[-1][1]):
        ls = ls[1:-1]
    return {tuple(ls[i:] + ls[:i]) for i in range(max(1, len(ls)))}


@given(words, words)
def test_conjugacy_against_all_rotations(u, v):
    # free-group conjugacy = cyclic reductions are cyclic rotations of each other
    oracle = tuple(_letters(cyclically_reduce(v))) in _rotations(u)
    assert are_conjugate(u, v) == oracle


@given(words)
def test_normal_form_is_a_rotation(w):
    assert tuple(_letters(cyclic_normal_form(w))) in _rotations(w)


def test_normal_form_examples():
    assert str(cyclic_normal_form(parse_word("y x"))) == "x y"
    assert str(cyclic_normal_form(parse_word("x y x^-1"))) == "y"
    assert are_conjugate(parse_word("x y"), parse_word("x (x y) x^-1"))
    assert not are_conjugate(parse_word("x y"), parse_word("x y^-1"))


@given(words, words, words)
def test_commutator_expansion_identity(u, a, b):
    lhs = commutator(u, a * b)
    rhs = commutator(u, a) * commutator(u, b) * commutator(commutator(b, u), a)
    assert (lhs.inverse() * rhs).is_identity()


def test_commutator_expansion_seeded():
    rng = random.Random(7)
    for _ in range(1000):
        u, a, b = (random_word(rng, [X, Y, Z], 12) for _ in range(3))
        assert commutator(u, a * b) == commutator(u, a) * commutator(u, b) * commutator(commutator(b, u), a)


@given(words)
def test_evaluate_into_integers_is_exponent_sum(w):
    assert evaluate(w, {X: 1, Y: 0, Z: 0}, lambda a, b: a + b, lambda a: -a, 0) == exponent_sum(w, X)


def test_substitute():
    w = substitute(parse_word("x y x^-1"), {X: parse_word("y z")})
    assert w == parse_word("y z y z^-1 y^-1")


def test_parser():
    assert parse_word("[x, y]") == commutator(x, y)
    assert parse_word("x'") == x.inverse() == parse_word("x^-1")
    assert parse_word("(x y)^2") == x * y * x * y
    assert parse_word("1") == FreeWord()
    assert parse_gen("x_0_1") == Gen("x", (0, 1))
    assert str(FreeWord.gen(Gen("x", (0, 1)))) == "x_0_1"
    w = parse_word("x_1 [x_0, y']^-1")
    assert parse_word(str(w)) == w


@pytest.mark.parametrize("text,col", [("x [y, z", 8), ("x $ y", 3), ("(x y", 5), ("x )", 3)])
def test_parser_errors_carry_position(text, col):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text)
    assert info.value.line == 1
    assert info.value.column == col


def test_parser_error_line_number():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("x y\n  z $")
    assert (info.value.line, info.value.column) == (2, 5)
