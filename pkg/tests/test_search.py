import pytest

from episyl.calculus import Judgement, Rule, System, check_proof, proof_height
from episyl.search import (
    DecideResult, SearchBudget, decide, default_model_bounds, is_inconsistent, prove_bounded,
    singleton_model,
)
from episyl.semantics import FrameClass, check_frame, satisfies, term_extension
from episyl.syntax import All, Atom, Know, Neg, Some, enumerate_terms, parse_formula

A, B, C = Atom("A"), Atom("B"), Atom("C")
P = parse_formula


def K(g, a="i"):
    return Know(a, g)


def test_opening_syllogism():
    j = Judgement((P("all C B"), P("some C (K_k A)")), P("some B (K_k A)"), System.S_EAS)
    proof = prove_bounded(j)
    assert proof is not None and proof.rule is Rule.DISAMIS_BOCARDO
    assert proof_height(proof) <= 2


def test_axiom_goal_is_one_node():
    proof = prove_bounded(Judgement((), All(A, A), System.T_NES))
    assert proof_height(proof) == 1


def test_some_a_a_is_not_provable():
    assert prove_bounded(Judgement((), Some(A, A), System.T_NES)) is None


def test_proofs_are_checked():
    j = Judgement((P("some A B"), P("all B C")), P("some A C"), System.T_NES)
    check_proof(prove_bounded(j), j)


def test_decide_examples():
    barbara = Judgement((P("all A B"), P("all B C")), P("all A C"), System.T_NES)
    assert decide(barbara).verdict == "PROVED"
    ax4 = P("all (K_i A) (K_i (K_i A))")
    r = decide(Judgement((), ax4, System.T_NES), FrameClass.T, model_bounds=(3, 1))
    assert r.verdict == "REFUTED" and r.exit_code == 1
    assert len(r.model.model.worlds) <= 3 and check_frame(r.model.model, FrameClass.T)
    r = decide(Judgement((), ax4, System.S4_NES))
    assert r.verdict == "PROVED" and r.exit_code == 0


def test_decide_unknown_on_a_starved_budget():
    j = Judgement((), P("all (K_i A) (K_i (K_i A))"), System.T_NES)
    r = decide(j, budget=SearchBudget(max_depth=1), model_bounds=(1, 1))
    assert r.verdict == "UNKNOWN" and r.exit_code == 3 and "depth 1" in r.detail


def test_decide_is_deterministic_across_jobs():
    j = Judgement((P("some A B"),), P("some B (K_i A)"), System.T_NES)
    results = {(r.verdict, str(r.model and r.model.model.interp)) for r in
               (decide(j, jobs=n) for n in (1, 2, 4))}
    assert len(results) == 1


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(max_depth=0)
    assert default_model_bounds(System.S_AS, 3) == (1, 8)


def test_is_inconsistent_examples():
    proof = is_inconsistent([P("all A (- B)"), P("some A B")], System.T_NES)
    assert proof is not None
    c = proof.conclusion
    assert not c.is_universal and c.predicate == Neg(c.subject)
    proof = is_inconsistent([P("some A (- A)")], System.T_NES)
    assert proof.conclusion == P("some A (- A)")
    assert is_inconsistent([], System.T_NES) is None
    assert is_inconsistent([P("all A B"), P("some A A")], System.T_NES) is None
    for system in (System.S_AS, System.S_EAS):
        assert is_inconsistent([P("all A (- B)"), P("some A B")], system) is not None


def test_singleton_model_examples():
    g = Neg(K(Neg(K(Neg(K(A)), "j"))))
    pm = singleton_model(g)
    assert term_extension(pm.model, pm.world, A) == frozenset()
    assert term_extension(pm.model, pm.world, g) == {0}
    assert term_extension(singleton_model(A).model, "w", A) == {0}
    pm = singleton_model(K(K(A, "j")))
    assert term_extension(pm.model, "w", A) == {0}


def test_singleton_model_exemplifies_every_term():
    for g in enumerate_terms("A", "ij", 5):
        pm = singleton_model(g, agents="ij")
        assert check_frame(pm.model, FrameClass.S5)
        assert term_extension(pm.model, pm.world, g) == {0}
        assert not satisfies(pm, All(g, Neg(g)))


def test_result_exit_codes():
    assert [DecideResult(v).exit_code for v in ("PROVED", "REFUTED", "UNKNOWN")] == [0, 1, 3]


def test_rejects_out_of_language_judgement():
    with pytest.raises(ValueError):
        prove_bounded(Judgement((), P("all (K_i A) A"), System.S_AS))
