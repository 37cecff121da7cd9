"""Regenerate the problem corpora shipped in ``src/episyl/corpus``.

Expectations are certified independently of ``decide``: ``invalid`` needs a
countermodel from the literal model scan, ``valid`` needs either the
region oracle (one-world problems) or a proof accepted by ``check_proof``.
Problems neither check settles are written without an expectation.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

from episyl.calculus import Judgement, System, derived_contrapositive, derived_darii, \
    derived_nonexistence, derived_theorems, dumps, Premise, check_proof
from episyl.search import SearchBudget, default_model_bounds, prove_bounded
from episyl.semantics import ResourceLimitError, KripkeModel, valid_bounded_bruteforce
from episyl.syntax import All, Atom, Neg, Some, formula_preds, parse_formula

ROOT = Path(__file__).resolve().parents[1] / "src" / "episyl" / "corpus"

S, M, P = Atom("S"), Atom("M"), Atom("P")
FIGURES = {1: ((M, P), (S, M)), 2: ((P, M), (S, M)), 3: ((M, P), (M, S)), 4: ((P, M), (M, S))}
MOODS = [
    (1, "Barbara"), (1, "Celarent"), (1, "Darii"), (1, "Ferio"), (1, "Barbari"), (1, "Celaront"),
    (2, "Cesare"), (2, "Camestres"), (2, "Festino"), (2, "Baroco"), (2, "Cesaro"), (2, "Camestrop"),
    (3, "Darapti"), (3, "Disamis"), (3, "Datisi"), (3, "Felapton"), (3, "Bocardo"), (3, "Ferison"),
    (4, "Bramantip"), (4, "Camenes"), (4, "Dimaris"), (4, "Fesapo"), (4, "Fresison"), (4, "Camenop"),
]


def sentence(letter, x, y):
    return {"A": All(x, y), "E": All(x, Neg(y)), "I": Some(x, y), "O": Some(x, Neg(y))}[letter]


def mood(figure, name):
    vowels = [c.upper() for c in name if c.lower() in "aeio"][:3]
    (a, b), (c, d) = FIGURES[figure]
    return [sentence(vowels[0], a, b), sentence(vowels[1], c, d)], sentence(vowels[2], S, P)


def region_valid(premises, goal) -> bool:
    """Exact one-world validity: every inhabited-region set of the predicates."""
    preds = sorted(set().union(*(formula_preds(f) for f in premises + [goal])))
    for r in range(1, 1 << len(preds)):
        for region in itertools.combinations(range(1 << len(preds)), r):
            interp = {(0, p): frozenset(x for x in region if x >> k & 1) for k, p in enumerate(preds)}
            m = KripkeModel((0,), (), {}, region, interp, tuple(preds))
            if all(m.holds(0, f) for f in premises) and not m.holds(0, goal):
                return False
    return True


def write(path: Path, system, premises, goal, expect=None, frame=None, comment="", extra=()):
    lines = [f"# {comment}"] if comment else []
    lines.append(f"system: {system.value}")
    if frame:
        lines.append(f"frame: {frame.value}")
    lines += [f"premise: {p}" for p in premises]
    lines.append(f"goal: {goal}")
    lines += list(extra)
    if expect:
        lines.append(f"expect: {expect}")
    path.write_text("\n".join(lines) + "\n")


def certify(system, premises, goal) -> str | None:
    j = Judgement(tuple(premises), goal, system)
    preds = set().union(*(formula_preds(f) for f in list(premises) + [goal]))
    proof = prove_bounded(j, SearchBudget())
    if proof is not None:
        check_proof(proof, j)
        return "valid", ()
    for w, d in ((1, 4), (2, 2), (3, 2), (2, 3)):
        if system is System.S_AS and w > 1:
            break
        try:
            if valid_bounded_bruteforce(premises, goal, system.frame, w, d) is not None:
                dw, dd = default_model_bounds(system, len(preds))
                extra = [f"max-worlds: {w}"] if w > dw else []
                return "invalid", extra + ([f"max-domain: {d}"] if d > dd else [])
        except ResourceLimitError:
            continue
    return None, ()


def assertoric():
    out = []
    for i, (fig, name) in enumerate(MOODS):
        premises, goal = mood(fig, name)
        expect = "valid" if region_valid(premises, goal) else "invalid"
        write(ROOT / "assertoric" / f"{i + 1:02d}-{name.lower()}.prob", System.S_AS, premises, goal,
              expect, comment=f"{name}, figure {fig}", extra=["max-worlds: 1", "max-domain: 8"])
        out.append((name, premises, goal, expect))
    return out


def derived():
    A, B, C = Atom("A"), Atom("B"), Atom("C")
    items = [
        ("darii", [Some(A, B), All(B, C)], Some(A, C),
         derived_darii(Premise(Some(A, B)), Premise(All(B, C)))),
        ("contrapositive", [All(A, B)], All(Neg(B), Neg(A)), derived_contrapositive(Premise(All(A, B)))),
        ("nonexistence", [All(A, Neg(A))], All(B, Neg(A)),
         derived_nonexistence(Premise(All(A, Neg(A))), B)),
    ]
    items += [(name.lower(), [], p.conclusion, p) for name, p in derived_theorems(A, "i")]
    for name, premises, goal, proof in items:
        check_proof(proof, Judgement(tuple(premises), goal, System.T_NES))
        write(ROOT / "derived" / f"{name}.prob", System.T_NES, premises, goal, "valid")
        (ROOT / "derived" / f"{name}.proof").write_text(dumps(proof) + "\n")


def mixed(moods):
    P_ = parse_formula
    eas = [
        (["all C B", "some C (K_k A)"], "some B (K_k A)"),
        (["all C (K_k B)", "some C A"], "some A (K_k B)"),
        (["all C B", "some C (K_k A)"], "all A (K_k B)"),
        (["all B (K_k A)"], "all B A"),
        (["some B (K_k A)"], "some B A"),
        (["some B A"], "some B (K_k A)"),
        (["all B (K_k (- A))", "some C B"], "some C (- A)"),
        (["all B (K_k A)", "all C B"], "all C (K_k A)"),
        (["all B (K_k A)", "some C B"], "some C (K_k A)"),
        (["all B A"], "all B (K_k A)"),
        (["some A (K_k B)"], "some B A"),
        (["all A (- B)", "some C (K_k A)"], "some C (- B)"),
    ]
    nes = [
        (System.T_NES, [], "all (K_i A) A"),
        (System.T_NES, [], "all (K_i A) (K_i (K_i A))"),
        (System.S4_NES, [], "all (K_i A) (K_i (K_i A))"),
        (System.S4_NES, [], "all (- (K_i A)) (K_i (- (K_i A)))"),
        (System.S5_NES, [], "all (- (K_i A)) (K_i (- (K_i A)))"),
        (System.T_NES, [], "all A (K_i A)"),
        (System.T_NES, ["all A B"], "all (- B) (- A)"),
        (System.T_NES, ["all A B"], "all (K_i A) (K_i B)"),
        (System.T_NES, ["some A B", "all B C"], "some A C"),
        (System.T_NES, ["all A (- A)"], "all B (- A)"),
        (System.T_NES, ["some A B"], "some (K_i A) B"),
        (System.T_NES, ["all (K_i A) B"], "all A B"),
        (System.T_NES, [], "all (K_i A) (K_j A)"),
        (System.S5_NES, [], "all (K_i A) (K_i (K_i A))"),
        (System.S4_NES, ["all A B"], "all (K_i (K_i A)) (K_i B)"),
        (System.T_NES, ["some (K_i A) B"], "some A B"),
        (System.T_NES, [], "all A (- (K_i (- A)))"),
        (System.S5_NES, ["some A (- (K_i B))"], "some A (K_i (- (K_i B)))"),
    ]
    i = 0
    for name, premises, goal, expect in moods[:20]:
        i += 1
        write(ROOT / "mixed" / f"{i:02d}-as-{name.lower()}.prob", System.S_AS, premises, goal, expect)
    for premises, goal in eas:
        i += 1
        prem = [P_(p) for p in premises]
        expect, extra = certify(System.S_EAS, prem, P_(goal))
        write(ROOT / "mixed" / f"{i:02d}-eas.prob", System.S_EAS, prem, P_(goal), expect, extra=extra)
    for system, premises, goal in nes:
        i += 1
        prem = [P_(p) for p in premises]
        expect, extra = certify(system, prem, P_(goal))
        write(ROOT / "mixed" / f"{i:02d}-{system.value.lower()}.prob", system, prem, P_(goal), expect,
              extra=extra)
    assert i == 50, i


if __name__ == "__main__":
    moods = assertoric()
    derived()
    mixed(moods)
    print("ok", file=sys.stderr)
