import itertools
import random

import pytest

from episyl.semantics import (
    FrameClass, KripkeModel, ModelError, PointedModel, ResourceLimitError, UndeclaredSymbol,
    check_frame, enumerate_models, format_model, nnf_extension, parse_model, satisfies,
    term_extension, valid_bounded, valid_bounded_bruteforce,
)
from episyl.syntax import All, Atom, Know, Neg, Some, enumerate_terms, negate, nnf, parse_formula

import oracles

A, B, C = Atom("A"), Atom("B"), Atom("C")
T, S4, S5 = FrameClass.T, FrameClass.S4, FrameClass.S5


def K(g, a="i"):
    return Know(a, g)


def two_world():
    return KripkeModel(("w", "v"), ("i",), {"i": {("w", "w"), ("w", "v"), ("v", "v")}},
                       (0, 1), {("w", "A"): {0, 1}, ("v", "A"): {0}})


def test_check_frame_examples():
    one = KripkeModel(("w",), ("i",), {"i": {("w", "w")}}, (0,), {})
    assert check_frame(one, S5)
    m = two_world()
    assert check_frame(m, T) and check_frame(m, S4) and not check_frame(m, S5)
    bad = KripkeModel(("w", "v"), ("i",), {"i": {("w", "w"), ("w", "v")}}, (0,), {})
    assert not check_frame(bad, T)


def test_term_extension_examples():
    m = KripkeModel(("w",), ("i",), {"i": {("w", "w")}}, (0, 1), {("w", "A"): {0}})
    assert term_extension(m, "w", Neg(A)) == {1}
    m = two_world()
    assert term_extension(m, "w", K(A)) == {0}
    assert term_extension(m, "w", Neg(K(A))) == {1}


def test_empty_successor_set_gives_full_domain():
    m = KripkeModel(("w",), ("i",), {}, (0, 1), {}, ("A",))
    assert term_extension(m, "w", K(A)) == {0, 1}


def test_satisfies_examples():
    m = KripkeModel(("w",), (), {}, (0,), {}, ("A",))
    pm = PointedModel(m, "w")
    assert satisfies(pm, All(A, A))
    assert not satisfies(pm, Some(A, A))
    # the opening syllogism's hand model
    m = KripkeModel(("w", "v"), ("k",), {"k": {("w", "w"), ("w", "v"), ("v", "v")}}, (0,),
                    {("w", "C"): {0}, ("w", "B"): {0}, ("v", "A"): {0}, ("w", "A"): {0}})
    pm = PointedModel(m, "w")
    for text in ("all C B", "some C (K_k A)", "some B (K_k A)"):
        assert satisfies(pm, parse_formula(text))


def test_model_validation():
    with pytest.raises(ModelError):
        KripkeModel(("w",), (), {}, (), {})
    with pytest.raises(UndeclaredSymbol):
        KripkeModel(("w",), (), {}, (0,), {("v", "A"): {0}})
    with pytest.raises(UndeclaredSymbol):
        KripkeModel(("w",), (), {}, (0,), {("w", "A"): {5}})
    with pytest.raises(UndeclaredSymbol):
        KripkeModel(("w",), ("i",), {"i": {("w", "u")}}, (0,), {})
    with pytest.raises(UndeclaredSymbol):
        KripkeModel(("w",), (), {}, (0,), {}).masks(A)
    with pytest.raises(ModelError):
        PointedModel(KripkeModel(("w",), (), {}, (0,), {}), "v")


def test_enumerate_models_counts():
    assert len(list(enumerate_models({"A"}, {"i"}, 1, 1, T))) == 2
    assert len(list(enumerate_models(set(), {"i"}, 1, 1, T))) == 1
    assert all(check_frame(m, S5) for m in enumerate_models({"A"}, {"i"}, 3, 1, S5))


def test_enumeration_ceiling():
    with pytest.raises(ResourceLimitError):
        list(enumerate_models("ABC", "ij", 3, 3, T, ceiling=1000))


def test_valid_bounded_examples():
    cm = valid_bounded([], All(A, B), T, 1, 1)
    assert cm is not None and cm.model.domain and not satisfies(cm, All(A, B))
    assert valid_bounded([All(A, B), All(B, C)], All(A, C), T, 2, 2) is None
    cm = valid_bounded([], All(K(A), Neg(K(A))), S5, 1, 1)
    assert cm is not None and satisfies(cm, Some(K(A), K(A)))


def small_models(fc, agents=("i",), preds=("A",), worlds=2, domain=2):
    return list(enumerate_models(preds, agents, worlds, domain, fc))


TERMS = enumerate_terms("A", "i", 4)


@pytest.mark.parametrize("fc", [T, S4, S5])
def test_extension_matches_reference_evaluator(fc):
    for m in small_models(fc):
        for w in m.worlds:
            for g in TERMS:
                assert term_extension(m, w, g) == oracles.ext(m, w, g)


def test_duality_and_nnf_on_two_agents():
    terms = enumerate_terms("A", "ij", 3)
    for m in small_models(T, agents=("i", "j"), domain=1):
        for w in m.worlds:
            for g in terms:
                assert nnf_extension(m, w, nnf(g)) == term_extension(m, w, g)
            for g1, g2 in itertools.product(terms[:5], repeat=2):
                for phi in (All(g1, g2), Some(g1, g2)):
                    pm = PointedModel(m, w)
                    assert satisfies(pm, phi) != satisfies(pm, negate(phi))


def test_one_world_semantics_is_set_theoretic():
    for m in small_models(T, agents=(), preds=("A", "B"), worlds=1, domain=2):
        a, b = oracles.ext(m, m.worlds[0], A), oracles.ext(m, m.worlds[0], B)
        pm = PointedModel(m, m.worlds[0])
        assert satisfies(pm, All(A, B)) == (a <= b)
        assert satisfies(pm, All(A, Neg(B))) == (not a & b)
        assert satisfies(pm, Some(A, B)) == bool(a & b)
        assert satisfies(pm, Some(A, Neg(B))) == bool(a - b)


def _random_problems(n, seed):
    rng = random.Random(seed)
    terms = enumerate_terms("AB", "i", 3)
    for _ in range(n):
        mk = lambda: (All if rng.random() < 0.5 else Some)(rng.choice(terms), rng.choice(terms))
        yield [mk() for _ in range(rng.randint(0, 2))], mk()


@pytest.mark.parametrize("fc", [T, S4, S5])
def test_valid_bounded_agrees_with_bruteforce(fc):
    for premises, goal in _random_problems(150, seed=hash(fc.value) % 1000):
        fast = valid_bounded(premises, goal, fc, 2, 2)
        slow = valid_bounded_bruteforce(premises, goal, fc, 2, 2)
        assert (fast is None) == (slow is None), (premises, goal)
        if fast is not None:
            assert check_frame(fast.model, fc)
            assert all(satisfies(fast, p) for p in premises) and not satisfies(fast, goal)


def test_model_file_round_trip():
    pm = PointedModel(two_world(), "w")
    text = format_model(pm)
    again = parse_model(text)
    assert again.world == "w"
    for g in TERMS:
        assert {str(x) for x in term_extension(pm.model, "w", g)} == set(term_extension(again.model, "w", g))


def test_model_file_errors():
    with pytest.raises(UndeclaredSymbol):
        parse_model("worlds: w\nagents: i\ndomain: 0\nrel j: w>w\n")
    with pytest.raises(ModelError):
        parse_model("worlds: w\ndomain: 0\nbogus: 1\n")
    with pytest.raises(UndeclaredSymbol):
        parse_model("worlds: w\ndomain: 0\npred A @ v: 0\n")
    with pytest.raises(ModelError):
        parse_model("domain: 0\n")
