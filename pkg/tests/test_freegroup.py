import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import words
from wordmaps.freegroup import (
    BasisMap,
    Generator,
    Word,
    WordParseError,
    commutator,
    conjugate,
    exponent_sums,
    goto_rewrite_neg,
    goto_rewrite_pos,
    invert,
    multiply,
    parse,
    power,
    render,
    substitute,
)

A, B = Generator.A, Generator.B
a, b = Word.gen(A), Word.gen(B)
c = a * b
C_IS_AB = BasisMap(c, b)


def syl(*pairs):
    return tuple((Generator(g), e) for g, e in pairs)


class TestParse:
    def test_commutator(self):
        w = parse("[a,b]")
        assert w.syllables == syl((A, 1), (B, 1), (A, -1), (B, -1))

    def test_six_syllables(self):
        w = parse("a^2 b a^-1 b a^-1 b^-2")
        assert [e for _, e in w.syllables] == [2, 1, -1, 1, -1, -2]

    def test_cancels_to_identity(self):
        assert parse("a a^-1").is_identity

    def test_uppercase_inverse(self):
        assert parse("A B") == parse("a^-1 b^-1")

    def test_nested_and_powers(self):
        assert parse("([a,b])^2") == commutator(a, b) * commutator(a, b)
        assert parse("[[a,b],[a^2,b^2]]") == commutator(commutator(a, b), commutator(a ** 2, b ** 2))

    def test_whitespace_ignored(self):
        assert parse(" [ a , b ] ^ -1 ") == parse("[b,a]")

    def test_confluent(self):
        assert parse("a b b^-1 a") == parse("a^2")

    @pytest.mark.parametrize("text,pos", [("a^0", 2), ("a^", 2), ("[a,b", 4), ("a c", 2), ("a)", 1)])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(WordParseError) as info:
            parse(text)
        assert info.value.position == pos

    @given(words())
    def test_render_round_trip(self, w):
        assert parse(render(w)) == w
        assert parse(render(w, ("x", "y")), ("x", "y")) == w

    def test_render_identity(self):
        assert render(Word()) == "e"
        assert render(parse("a^2 b^-1 a")) == "a^2 b^-1 a"


class TestOperations:
    def test_multiply_examples(self):
        assert multiply(a * b, ~b * a) == a ** 2
        assert multiply(Word(), parse("a b^2")) == parse("a b^2")
        assert multiply(parse("[a,b]"), parse("[b,a]")).is_identity

    def test_invert_examples(self):
        assert invert(parse("a b")) == parse("b^-1 a^-1")
        assert invert(Word()) == Word()
        assert invert(parse("a^2 b^-3")) == parse("b^3 a^-2")

    def test_conjugate_examples(self):
        assert conjugate(a, b) == parse("a b a^-1")
        assert conjugate(Word(), parse("a b")) == parse("a b")
        assert conjugate(a, a ** 2) == a ** 2

    def test_substitute_examples(self):
        assert substitute(parse("[a,b]"), BasisMap(parse("a b"), b)) == parse("a b a^-1 b^-1")
        assert substitute(a, BasisMap.swap()) == b
        assert substitute(parse("[a^2,b]"), BasisMap.identity()) == parse("[a^2,b]")

    def test_exponent_sums(self):
        assert exponent_sums(parse("[a,b]")) == (0, 0)
        assert exponent_sums(parse("a^2 b a^-1 b a^-1 b^-2")) == (0, 0)
        assert exponent_sums(parse("a^3 b^-1")) == (3, -1)

    @given(words(), words(), words())
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(words())
    def test_inverse(self, x):
        assert (x * ~x).is_identity and (~x * x).is_identity

    @given(words(), words())
    def test_stays_reduced(self, x, y):
        syllables = (x * y).syllables
        assert all(e for _, e in syllables)
        assert all(g1 != g2 for (g1, _), (g2, _) in zip(syllables, syllables[1:]))

    @given(words(max_syllables=5), st.integers(-6, 6))
    def test_power_matches_repeated_product(self, x, k):
        expected = Word()
        for _ in range(abs(k)):
            expected = expected * (x if k > 0 else ~x)
        assert power(x, k) == expected

    @given(words(), words())
    def test_exponent_sums_homomorphism(self, x, y):
        sx, sy = exponent_sums(x), exponent_sums(y)
        assert exponent_sums(x * y) == (sx[0] + sy[0], sx[1] + sy[1])

    @given(words(), words(), words(max_syllables=4), words(max_syllables=4))
    def test_substitute_is_homomorphism(self, x, y, ia, ib):
        m = BasisMap(ia, ib)
        assert substitute(x * y, m) == substitute(x, m) * substitute(y, m)
        assert substitute(~x, m) == ~substitute(x, m)

    @given(words(), words(max_syllables=4), words(max_syllables=4),
           words(max_syllables=4), words(max_syllables=4))
    def test_substitute_composes(self, w, p, q, r, s):
        inner, outer = BasisMap(p, q), BasisMap(r, s)
        assert substitute(w, inner.then(outer)) == substitute(substitute(w, inner), outer)

    @given(words(max_syllables=12, max_exp=1), words(max_syllables=12, max_exp=1),
           words(max_syllables=12, max_exp=1))
    def test_commutator_expansion(self, x, y, z):
        assert commutator(x, y * z) == commutator(x, y) * conjugate(y, commutator(x, z))
        assert commutator(x * y, z) == conjugate(x, commutator(y, z)) * commutator(x, z)


def cw(x, y):
    return commutator(x, y)


class TestBaseChangeIdentities:
    """Rewriting commutators of powers of ``a`` over ``c = ab``."""

    @pytest.mark.parametrize("n", [k for k in range(-8, 9) if k])
    @pytest.mark.parametrize("m", [k for k in range(-8, 9) if k])
    def test_conjugation_by_a(self, n, m):
        cn, bm = c ** n, b ** m
        assert conjugate(a, cw(cn, bm)) == (
            cw(c, ~b) * cw(~b, c ** (n + 1)) * cw(c ** (n + 1), b ** (m - 1)) * cw(b ** (m - 1), c))
        assert conjugate(~a, cw(cn, bm)) == (
            cw(b, c ** (n - 1)) * cw(c ** (n - 1), b ** (m + 1)) * cw(b ** (m + 1), ~c) * cw(~c, b))
        assert conjugate(a, cw(bm, cn)) == (
            cw(c, b ** (m - 1)) * cw(b ** (m - 1), c ** (n + 1)) * cw(c ** (n + 1), ~b) * cw(~b, c))
        assert conjugate(~a, cw(bm, cn)) == (
            cw(b, ~c) * cw(~c, b ** (m + 1)) * cw(b ** (m + 1), c ** (n - 1)) * cw(c ** (n - 1), b))

    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("m", range(-8, 9))
    def test_goto_rewrites(self, n, m):
        assert substitute(goto_rewrite_pos(n, m), C_IS_AB) == cw(a ** n, b ** m)
        assert substitute(goto_rewrite_neg(n, m), C_IS_AB) == cw(a ** -n, b ** m)

    def test_small_cases_literal(self):
        C, Bw = Word.gen(A), Word.gen(B)
        assert goto_rewrite_pos(1, 5) == cw(C, Bw ** 5)
        assert goto_rewrite_neg(1, 3) == cw(Bw, ~C) * cw(~C, Bw ** 4)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            goto_rewrite_pos(0, 1)
        with pytest.raises(ValueError):
            goto_rewrite_neg(-1, 1)
