import pytest
from hypothesis import given, strategies as st

from episyl.syntax import (
    All, Atom, Formula, Know, Neg, NnfTerm, ParseError, Some, Tier, check_tier,
    enumerate_modal_terms, enumerate_terms, modal_depth, negate, negate_assertoric, nnf,
    parse_formula, parse_term, print_formula, subterms, term_size,
)

A, B, C = Atom("A"), Atom("B"), Atom("C")


def K(a, g):
    return Know(a, g)


terms = st.recursive(
    st.sampled_from([A, B, Atom("Foo_1")]),
    lambda inner: st.one_of(
        inner.map(Neg),
        st.tuples(st.sampled_from(["i", "j", "agent2"]), inner).map(lambda t: Know(*t)),
    ),
    max_leaves=8,
)
formulas = st.builds(Formula, st.sampled_from(["all", "some"]), terms, terms)


def test_parse_simple():
    assert parse_formula("all A B") == All(A, B)


def test_parse_nested():
    phi = parse_formula("some (K_i B) (- (K_i (- A)))")
    assert phi == Some(K("i", B), Neg(K("i", Neg(A))))


@pytest.mark.parametrize("text,offset", [("all A", 5), ("all A B C", 8), ("every A B", 0),
                                         ("all (A) B", 5), ("all (K_ A) B", 5), ("some (- A B", 10)])
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert err.value.offset == offset
    assert err.value.expected


def test_parse_rejects_bad_names():
    with pytest.raises(ParseError):
        parse_term("a")
    with pytest.raises(ValueError):
        Atom("lower")
    with pytest.raises(ValueError):
        Know("I", A)


@given(formulas)
def test_print_parse_round_trip(phi):
    assert parse_formula(print_formula(phi)) == phi


@given(terms)
def test_term_round_trip(g):
    assert parse_term(str(g)) == g


def test_negate_examples():
    assert negate(All(A, B)) == Some(A, Neg(B))
    assert negate(Some(A, Neg(B))) == All(A, Neg(Neg(B)))
    assert negate(negate(All(A, B))) == All(A, Neg(Neg(B)))


def test_negate_assertoric_is_an_involution_on_literals():
    for phi in (All(A, B), All(A, Neg(B)), Some(A, B), Some(A, Neg(B))):
        assert negate_assertoric(negate_assertoric(phi)) == phi
    assert negate_assertoric(All(A, Neg(B))) == Some(A, B)


def test_double_negation_is_syntactic():
    assert Neg(Neg(A)) != A


def test_check_tier_examples():
    assert check_tier(All(A, K("i", B)), Tier.EAS, "i")
    assert not check_tier(All(K("i", A), B), Tier.EAS)
    assert check_tier(Some(K("i", K("j", A)), K("i", B)), Tier.NES)
    assert not check_tier(All(A, K("i", B)), Tier.EAS, "j")
    assert not check_tier(All(A, K("i", K("i", B))), Tier.EAS)
    assert not check_tier(All(A, Neg(Neg(B))), Tier.AS)


@given(formulas)
def test_tier_monotone(phi):
    if check_tier(phi, Tier.AS):
        assert check_tier(phi, Tier.EAS)
    if check_tier(phi, Tier.EAS):
        assert check_tier(phi, Tier.NES)


def test_nnf_examples():
    g = Neg(K("i", Neg(K("j", Neg(K("i", A))))))
    assert nnf(g) == NnfTerm((("dia", "i"), ("box", "j"), ("dia", "i")), False, "A")
    assert nnf(A) == NnfTerm((), True, "A")
    assert nnf(Neg(Neg(K("i", A)))) == NnfTerm((("box", "i"),), True, "A")
    assert str(nnf(g)) == "<>i []j <>i -A"


def test_term_measures():
    g = Neg(K("i", Neg(A)))
    assert term_size(g) == 4
    assert modal_depth(g) == 1
    assert list(subterms(g)) == [g, K("i", Neg(A)), Neg(A), A]


def test_enumerate_terms_order_and_count():
    ts = enumerate_terms("A", "ij", 3)
    assert ts[0] == A
    # 1 + 3 + 9 terms of sizes 1, 2, 3
    assert len(ts) == 13 and len(set(ts)) == 13
    assert [term_size(t) for t in ts] == sorted(term_size(t) for t in ts)


def test_enumerate_modal_terms_count():
    # per modal depth d: 2^d agent words, 2^(d+1) sign patterns
    ts = enumerate_modal_terms("A", "ij", 3)
    assert len(ts) == sum(2 ** d * 2 ** (d + 1) for d in range(4)) == 170
    assert len(set(ts)) == 170
    assert max(modal_depth(t) for t in ts) == 3
