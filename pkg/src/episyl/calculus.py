"""Natural-deduction proofs for the five syllogistic systems and their checker.

Proofs are explicit trees.  ``Hypothesis`` leaves carry a string tag and are
closed by an ``raa`` node naming that tag.  Axiom schemes are checked by
matching the instance against the scheme; nothing is unified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

from .semantics import FrameClass
from .syntax import (
    All, Atom, DEFAULT_EAS_AGENT, Formula, Know, Neg, Some, Term, Tier, check_tier,
    formula_agents, is_modal, negate, negate_assertoric, parse_formula,
)

__all__ = [
    "System", "Rule", "RULE_SYSTEMS", "Premise", "Hypothesis", "Axiom", "Infer",
    "Proof", "Judgement", "RuleViolation", "check_proof", "is_valid_proof",
    "contradictory", "system_negate", "open_premises", "proof_height", "leaves",
    "derived_darii", "derived_contrapositive", "derived_nonexistence",
    "derived_theorems", "dumps", "loads", "render", "axiom_instance",
]


class System(Enum):
    S_AS = "S_AS"
    S_EAS = "S_EAS"
    T_NES = "T_NES"
    S4_NES = "S4_NES"
    S5_NES = "S5_NES"

    @property
    def tier(self) -> Tier:
        return {System.S_AS: Tier.AS, System.S_EAS: Tier.EAS}.get(self, Tier.NES)

    @property
    def frame(self) -> FrameClass:
        return {System.S4_NES: FrameClass.S4, System.S5_NES: FrameClass.S5}.get(self, FrameClass.T)

    @property
    def is_nes(self) -> bool:
        return self.tier is Tier.NES


class Rule(Enum):
    AX_ID = "ax-id"
    AX_T = "ax-t"
    AX_DN1 = "ax-dn1"
    AX_DN2 = "ax-dn2"
    AX_4 = "ax-4"
    AX_5 = "ax-5"
    BARBARA = "barbara"
    CONVERSION = "conversion"
    EXISTENCE = "existence"
    NON_EMPTINESS = "non-emptiness"
    RAA = "raa"
    K_RULE = "k"
    DARII = "darii"
    DISAMIS_BOCARDO = "disamis-bocardo"
    E_TRUTH = "e-truth"
    A_TRUTH = "a-truth"
    EXISTENCE2 = "existence2"

    @property
    def is_axiom(self) -> bool:
        return self.name.startswith("AX_")


_ALL = frozenset(System)
_NES = frozenset({System.T_NES, System.S4_NES, System.S5_NES})
_EAS = frozenset({System.S_EAS})

RULE_SYSTEMS = {
    Rule.AX_ID: _ALL,
    Rule.AX_T: _NES,
    Rule.AX_DN1: _NES,
    Rule.AX_DN2: _NES,
    Rule.AX_4: frozenset({System.S4_NES, System.S5_NES}),
    Rule.AX_5: frozenset({System.S5_NES}),
    Rule.BARBARA: _ALL,
    Rule.CONVERSION: _ALL,
    Rule.EXISTENCE: _ALL,
    Rule.NON_EMPTINESS: _NES,
    Rule.RAA: _ALL,
    Rule.K_RULE: _NES,
    Rule.DARII: _EAS,
    Rule.DISAMIS_BOCARDO: _EAS,
    Rule.E_TRUTH: _EAS,
    Rule.A_TRUTH: _EAS,
    Rule.EXISTENCE2: _EAS,
}


@dataclass(frozen=True)
class Premise:
    formula: Formula

    @property
    def conclusion(self) -> Formula:
        return self.formula


@dataclass(frozen=True)
class Hypothesis:
    tag: str
    formula: Formula

    @property
    def conclusion(self) -> Formula:
        return self.formula


@dataclass(frozen=True)
class Axiom:
    rule: Rule
    formula: Formula

    @property
    def conclusion(self) -> Formula:
        return self.formula


@dataclass(frozen=True)
class Infer:
    rule: Rule
    children: tuple
    conclusion: Formula
    discharged: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


Proof = Union[Premise, Hypothesis, Axiom, Infer]


@dataclass(frozen=True)
class Judgement:
    premises: tuple
    conclusion: Formula
    system: System

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "system", System(self.system))

    def eas_agent(self) -> str:
        agents = set()
        for phi in self.premises + (self.conclusion,):
            agents |= formula_agents(phi)
        if len(agents) > 1:
            raise ValueError(f"S_EAS is single-agent, got {sorted(agents)}")
        return agents.pop() if agents else DEFAULT_EAS_AGENT

    def well_tiered(self) -> bool:
        agent = self.eas_agent() if self.system is System.S_EAS else None
        return all(check_tier(phi, self.system.tier, agent)
                   for phi in self.premises + (self.conclusion,))


class RuleViolation(ValueError):
    def __init__(self, path: tuple, reason: str):
        self.path = tuple(path)
        self.reason = reason
        super().__init__(f"at {'/'.join(map(str, path)) or 'root'}: {reason}")


# --------------------------------------------------------------------------
# helpers shared with the search

def system_negate(phi: Formula, system: System) -> Formula:
    return negate(phi) if system.is_nes else negate_assertoric(phi)


def contradictory(a: Formula, b: Formula, system: System) -> bool:
    if system.is_nes:
        return a == negate(b) or b == negate(a)
    return a == negate_assertoric(b)


def axiom_instance(rule: Rule, phi: Formula) -> bool:
    """Whether ``phi`` instantiates the axiom scheme ``rule``."""
    if not phi.is_universal:
        return False
    s, p = phi.subject, phi.predicate
    if rule is Rule.AX_ID:
        return s == p
    if rule is Rule.AX_T:
        return isinstance(s, Know) and s.inner == p
    if rule is Rule.AX_DN1:
        return p == Neg(Neg(s))
    if rule is Rule.AX_DN2:
        return s == Neg(Neg(p))
    if rule is Rule.AX_4:
        return isinstance(s, Know) and p == Know(s.agent, s)
    if rule is Rule.AX_5:
        return (isinstance(s, Neg) and isinstance(s.inner, Know)
                and p == Know(s.inner.agent, s))
    return False


def leaves(p: Proof) -> Iterator[Proof]:
    if isinstance(p, Infer):
        for c in p.children:
            yield from leaves(c)
    else:
        yield p


def open_premises(p: Proof) -> set:
    return {leaf.formula for leaf in leaves(p) if isinstance(leaf, Premise)}


def proof_height(p: Proof) -> int:
    if isinstance(p, Infer):
        return 1 + max(proof_height(c) for c in p.children)
    return 1


def _tags(p: Proof) -> set:
    if isinstance(p, Hypothesis):
        return {p.tag}
    if isinstance(p, Infer):
        out = {p.discharged} if p.discharged else set()
        for c in p.children:
            out |= _tags(c)
        return out
    return set()


def _fresh_tag(*proofs: Proof) -> str:
    used = set().union(*(_tags(p) for p in proofs))
    n = 1
    while f"h{n}" in used:
        n += 1
    return f"h{n}"


# --------------------------------------------------------------------------
# checking

_ARITY = {
    Rule.BARBARA: 2, Rule.CONVERSION: 1, Rule.EXISTENCE: 1, Rule.NON_EMPTINESS: 1,
    Rule.RAA: 2, Rule.K_RULE: 1, Rule.DARII: 2, Rule.DISAMIS_BOCARDO: 2,
    Rule.E_TRUTH: 1, Rule.A_TRUTH: 1, Rule.EXISTENCE2: 1,
}


class _Checker:
    def __init__(self, j: Judgement):
        self.j = j
        self.system = j.system
        try:
            self.agent = j.eas_agent() if j.system is System.S_EAS else None
        except ValueError as exc:
            raise RuleViolation((), str(exc)) from None

    def fail(self, path, reason):
        raise RuleViolation(path, reason)

    def tier_ok(self, phi: Formula, path):
        if not check_tier(phi, self.system.tier, self.agent):
            self.fail(path, f"{phi} is outside the {self.system.tier.value} language")

    def run(self, p: Proof, path: tuple) -> tuple[dict, bool]:
        """Return (open hypotheses by tag, uses a premise)."""
        if isinstance(p, Premise):
            self.tier_ok(p.formula, path)
            if p.formula not in self.j.premises:
                self.fail(path, f"premise {p.formula} is not among the judgement's premises")
            return {}, True
        if isinstance(p, Hypothesis):
            self.tier_ok(p.formula, path)
            return {p.tag: p.formula}, False
        if isinstance(p, Axiom):
            self.tier_ok(p.formula, path)
            self.admissible(p.rule, path)
            if not p.rule.is_axiom:
                self.fail(path, f"{p.rule.value} is not an axiom scheme")
            if not axiom_instance(p.rule, p.formula):
                self.fail(path, f"{p.formula} is not an instance of {p.rule.value}")
            return {}, False
        if not isinstance(p, Infer):
            self.fail(path, f"unknown proof node {p!r}")
        self.tier_ok(p.conclusion, path)
        self.admissible(p.rule, path)
        if p.rule.is_axiom:
            self.fail(path, f"axiom {p.rule.value} used as an inference")
        if len(p.children) != _ARITY[p.rule]:
            self.fail(path, f"{p.rule.value} takes {_ARITY[p.rule]} premise(s)")
        hyps: dict = {}
        uses_premise = False
        child_hyps = []
        for k, c in enumerate(p.children):
            h, u = self.run(c, path + (k,))
            child_hyps.append(h)
            uses_premise |= u
            for tag, phi in h.items():
                if hyps.get(tag, phi) != phi:
                    self.fail(path, f"hypothesis tag {tag} names two different formulas")
                hyps[tag] = phi
        cs = [c.conclusion for c in p.children]
        getattr(self, "rule_" + p.rule.name.lower())(p, cs, path, hyps, uses_premise)
        if p.rule is Rule.RAA:
            hyps.pop(p.discharged, None)
        return hyps, uses_premise

    def admissible(self, rule: Rule, path):
        if self.system not in RULE_SYSTEMS[rule]:
            self.fail(path, f"rule {rule.value} is not available in {self.system.value}")

    # -- individual rules ---------------------------------------------------
    def rule_barbara(self, p, cs, path, *_):
        a, b = cs
        ok = (a.is_universal and b.is_universal and a.predicate == b.subject
              and p.conclusion == All(a.subject, b.predicate))
        if not ok:
            self.fail(path, "barbara needs all X Y, all Y g |- all X g")

    def rule_conversion(self, p, cs, path, *_):
        (a,) = cs
        if a.is_universal or p.conclusion != Some(a.predicate, a.subject):
            self.fail(path, "conversion needs some X Y |- some Y X")
        if not self.system.is_nes and not (isinstance(a.subject, Atom) and isinstance(a.predicate, Atom)):
            self.fail(path, "conversion is restricted to atomic terms here")

    def rule_existence(self, p, cs, path, *_):
        (a,) = cs
        if a.is_universal or p.conclusion != Some(a.subject, a.subject):
            self.fail(path, "existence needs some X g |- some X X")

    def rule_non_emptiness(self, p, cs, path, *_):
        (a,) = cs
        ok = (a.is_universal and a.predicate == Neg(a.subject)
              and p.conclusion == Some(a.predicate, a.predicate))
        if not ok:
            self.fail(path, "non-emptiness needs all g -g |- some -g -g")

    def rule_raa(self, p, cs, path, hyps, _):
        a, b = cs
        phi = p.conclusion
        if not contradictory(a, b, self.system):
            self.fail(path, f"raa premises {a} and {b} are not contradictory")
        if self.system is System.S_EAS and (is_modal(phi) or is_modal(a) or is_modal(b)):
            self.fail(path, "raa is restricted to non-modal formulas in S_EAS")
        if not p.discharged:
            self.fail(path, "raa must name the hypothesis tag it discharges")
        h = hyps.get(p.discharged)
        if h is not None and not contradictory(h, phi, self.system):
            self.fail(path, f"discharged hypothesis {h} is not the contradictory of {phi}")

    def rule_k_rule(self, p, cs, path, hyps, uses_premise):
        (a,) = cs
        c = p.conclusion
        ok = (a.is_universal and c.is_universal and isinstance(c.subject, Know)
              and isinstance(c.predicate, Know) and c.subject.agent == c.predicate.agent
              and c.subject.inner == a.subject and c.predicate.inner == a.predicate)
        if not ok:
            self.fail(path, "k needs |- all g1 g2 to give all K_i g1 K_i g2")
        if uses_premise or hyps:
            self.fail(path, "k is restricted to provable formulas; its subproof has open assumptions")

    def rule_darii(self, p, cs, path, *_):
        a, b = cs
        ok = (not a.is_universal and b.is_universal and a.predicate == b.subject
              and p.conclusion == Some(a.subject, b.predicate))
        if not ok:
            self.fail(path, "darii needs some X Y, all Y g |- some X g")

    def rule_disamis_bocardo(self, p, cs, path, *_):
        a, b = cs
        ok = (a.is_universal and not b.is_universal and a.subject == b.subject
              and isinstance(b.predicate, Know)
              and p.conclusion == Some(a.predicate, b.predicate))
        if not ok:
            self.fail(path, "disamis-bocardo needs all C B, some C Kg |- some B Kg")

    def rule_e_truth(self, p, cs, path, *_):
        (a,) = cs
        ok = (not a.is_universal and isinstance(a.predicate, Know)
              and p.conclusion == Some(a.subject, a.predicate.inner))
        if not ok:
            self.fail(path, "e-truth needs some X Kg |- some X g")

    def rule_a_truth(self, p, cs, path, *_):
        (a,) = cs
        ok = (a.is_universal and isinstance(a.predicate, Know)
              and p.conclusion == All(a.subject, a.predicate.inner))
        if not ok:
            self.fail(path, "a-truth needs all X Kg |- all X g")

    def rule_existence2(self, p, cs, path, *_):
        (a,) = cs
        g = a.predicate
        ok = (not a.is_universal and isinstance(g, Know) and isinstance(g.inner, Atom)
              and p.conclusion == Some(g.inner, g))
        if not ok:
            self.fail(path, "existence2 needs some B KA |- some A KA")


def check_proof(p: Proof, j: Judgement) -> None:
    """Raise :class:`RuleViolation` unless ``p`` derives ``j`` in ``j.system``."""
    checker = _Checker(j)
    hyps, _ = checker.run(p, ())
    if hyps:
        raise RuleViolation((), f"undischarged hypotheses: {', '.join(sorted(hyps))}")
    if p.conclusion != j.conclusion:
        raise RuleViolation((), f"proof concludes {p.conclusion}, not {j.conclusion}")


def is_valid_proof(p: Proof, j: Judgement) -> bool:
    try:
        check_proof(p, j)
    except RuleViolation:
        return False
    return True


# --------------------------------------------------------------------------
# derived rules and theorems of T_NES

def derived_darii(p1: Proof, p2: Proof) -> Proof:
    """some g1 g2, all g2 g3 |- some g1 g3 via Barbara, Conversion and RAA."""
    a, b = p1.conclusion, p2.conclusion
    if a.is_universal or not b.is_universal or a.predicate != b.subject:
        raise ValueError(f"darii needs some g1 g2 and all g2 g3, got {a} and {b}")
    g1, g2, g3 = a.subject, a.predicate, b.predicate
    tag = _fresh_tag(p1, p2)
    hyp = Hypothesis(tag, All(g3, Neg(g1)))
    left = Infer(Rule.BARBARA, (p2, hyp), All(g2, Neg(g1)))
    right = Infer(Rule.CONVERSION, (p1,), Some(g2, g1))
    raa = Infer(Rule.RAA, (left, right), Some(g3, g1), discharged=tag)
    return Infer(Rule.CONVERSION, (raa,), Some(g1, g3))


def derived_contrapositive(p: Proof) -> Proof:
    """all g1 g2 |- all -g2 -g1."""
    a = p.conclusion
    if not a.is_universal:
        raise ValueError(f"contrapositive needs a universal sentence, got {a}")
    g1, g2 = a.subject, a.predicate
    tag = _fresh_tag(p)
    hyp = Hypothesis(tag, Some(Neg(g2), g1))
    left = derived_darii(hyp, p)
    right = Axiom(Rule.AX_ID, All(Neg(g2), Neg(g2)))
    return Infer(Rule.RAA, (left, right), All(Neg(g2), Neg(g1)), discharged=tag)


def derived_nonexistence(p: Proof, t: Term) -> Proof:
    """all g -g |- all t -g."""
    a = p.conclusion
    if not a.is_universal or a.predicate != Neg(a.subject):
        raise ValueError(f"nonexistence needs all g -g, got {a}")
    g = a.subject
    tag = _fresh_tag(p)
    hyp = Hypothesis(tag, Some(t, Neg(Neg(g))))
    step = derived_darii(hyp, Axiom(Rule.AX_DN2, All(Neg(Neg(g)), g)))
    step = Infer(Rule.CONVERSION, (step,), Some(g, t))
    step = Infer(Rule.EXISTENCE, (step,), Some(g, g))
    left = derived_darii(step, p)
    right = Axiom(Rule.AX_ID, All(g, g))
    return Infer(Rule.RAA, (left, right), All(t, Neg(g)), discharged=tag)


def derived_theorems(g: Term = Atom("A"), agent: str = "i") -> list[tuple[str, Proof]]:
    """Closed derivations of the four theorems about ``K_i`` and its dual."""
    hat = Neg(Know(agent, Neg(g)))
    ax_t_neg = Axiom(Rule.AX_T, All(Know(agent, Neg(g)), Neg(g)))
    contra = derived_contrapositive(ax_t_neg)  # all --g -K-g
    g_to_hat = Infer(Rule.BARBARA, (Axiom(Rule.AX_DN1, All(g, Neg(Neg(g)))), contra), All(g, hat))
    k_to_hat = Infer(Rule.BARBARA, (Axiom(Rule.AX_T, All(Know(agent, g), g)), g_to_hat),
                     All(Know(agent, g), hat))
    dn_elim = Infer(Rule.K_RULE, (Axiom(Rule.AX_DN2, All(Neg(Neg(g)), g)),),
                    All(Know(agent, Neg(Neg(g))), Know(agent, g)))
    dn_intro = Infer(Rule.K_RULE, (Axiom(Rule.AX_DN1, All(g, Neg(Neg(g)))),),
                     All(Know(agent, g), Know(agent, Neg(Neg(g)))))
    return [
        ("g-to-hatK", g_to_hat),
        ("K-to-hatK", k_to_hat),
        ("K-dn-elim", dn_elim),
        ("K-dn-intro", dn_intro),
    ]


# --------------------------------------------------------------------------
# s-expression serialisation
#
#   proof := (premise "F") | (hyp TAG "F") | (axiom RULE "F")
#          | (infer RULE [(discharge TAG)] proof* "F")

def dumps(p: Proof) -> str:
    if isinstance(p, Premise):
        return f'(premise "{p.formula}")'
    if isinstance(p, Hypothesis):
        return f'(hyp {p.tag} "{p.formula}")'
    if isinstance(p, Axiom):
        return f'(axiom {p.rule.value} "{p.formula}")'
    parts = ["infer", p.rule.value]
    if p.discharged:
        parts.append(f"(discharge {p.discharged})")
    parts.extend(dumps(c) for c in p.children)
    parts.append(f'"{p.conclusion}"')
    return "(" + " ".join(parts) + ")"


_SEXP_TOKEN = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"]+))')


def _tokenize(text: str) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad proof text at offset {pos}")
        if m.group(1):
            out.append("(")
        elif m.group(2):
            out.append(")")
        elif m.group(3) is not None:
            out.append(("str", m.group(3)))
        else:
            out.append(("sym", m.group(4)))
        pos = m.end()
    return out


def _read(tokens: list, k: int):
    if tokens[k] != "(":
        return tokens[k], k + 1
    items, k = [], k + 1
    while tokens[k] != ")":
        item, k = _read(tokens, k)
        items.append(item)
    return items, k + 1


def _build(node) -> Proof:
    if not isinstance(node, list) or not node or node[0][0] != "sym":
        raise ValueError(f"malformed proof node {node!r}")
    head = node[0][1]
    args = node[1:]
    if head == "premise":
        return Premise(parse_formula(args[0][1]))
    if head == "hyp":
        return Hypothesis(args[0][1], parse_formula(args[1][1]))
    if head == "axiom":
        return Axiom(Rule(args[0][1]), parse_formula(args[1][1]))
    if head == "infer":
        rule = Rule(args[0][1])
        rest = args[1:]
        discharged = None
        if rest and isinstance(rest[0], list) and rest[0][0] == ("sym", "discharge"):
            discharged = rest[0][1][1]
            rest = rest[1:]
        concl = parse_formula(rest[-1][1])
        return Infer(rule, tuple(_build(c) for c in rest[:-1]), concl, discharged)
    raise ValueError(f"unknown proof node kind {head!r}")


def loads(text: str) -> Proof:
    tokens = _tokenize(text)
    node, k = _read(tokens, 0)
    if k != len(tokens):
        raise ValueError("trailing text after proof")
    return _build(node)


# --------------------------------------------------------------------------
# ASCII inference trees

def _block(p: Proof) -> list[str]:
    if isinstance(p, Premise):
        return [str(p.formula)]
    if isinstance(p, Hypothesis):
        return [f"[{p.formula}]^{p.tag}"]
    if isinstance(p, Axiom):
        text = str(p.formula)
        return ["-" * len(text) + f" {p.rule.value}", text]
    blocks = [_block(c) for c in p.children]
    height = max(len(b) for b in blocks)
    widths = [max(len(line) for line in b) for b in blocks]
    rows = []
    for r in range(height):
        cells = []
        for b, w in zip(blocks, widths):
            line = b[r - (height - len(b))] if r >= height - len(b) else ""
            cells.append(line.ljust(w))
        rows.append("   ".join(cells).rstrip())
    concl = str(p.conclusion)
    span = max(max(len(r) for r in rows), len(concl))
    label = p.rule.value + (f" ({p.discharged})" if p.discharged else "")
    rows.append("-" * span + " " + label)
    rows.append(concl.center(span).rstrip())
    return rows


def render(p: Proof) -> str:
    return "\n".join(_block(p)) + "\n"
