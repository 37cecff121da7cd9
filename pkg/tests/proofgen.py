"""Random well-formed derivations for the soundness fuzz.

Proofs are grown top-down: pick a conclusion, then either close it with a
leaf (axiom, open hypothesis, premise) or pick a rule that can conclude it and
recurse on the rule's premises.  Whatever premises end up at the leaves
become the judgement's premise set.
"""

from __future__ import annotations

import random

from episyl.calculus import (
    Axiom, Hypothesis, Infer, Judgement, Premise, Rule, RULE_SYSTEMS, System, axiom_instance,
    check_proof, open_premises, system_negate,
)
from episyl.syntax import All, Atom, Formula, Know, Neg, Some, is_modal

AXIOMS = [Rule.AX_ID, Rule.AX_T, Rule.AX_DN1, Rule.AX_DN2, Rule.AX_4, Rule.AX_5]


class ProofGen:
    def __init__(self, system: System, preds=("A", "B"), agents=("i", "j"), seed=0, max_term=3):
        self.system = System(system)
        self.preds = tuple(preds)
        self.agents = tuple(agents) if self.system.is_nes else tuple(agents[:1])
        self.rng = random.Random(seed)
        self.max_term = max_term
        self.tags = 0

    # -- random syntax -------------------------------------------------------
    def atom(self) -> Atom:
        return Atom(self.rng.choice(self.preds))

    def literal(self):
        a = self.atom()
        return Neg(a) if self.rng.random() < 0.4 else a

    def term(self, size=None):
        if not self.system.is_nes:
            return self.literal()
        size = self.rng.randint(1, self.max_term) if size is None else size
        g = self.atom()
        for _ in range(size - 1):
            g = Neg(g) if self.rng.random() < 0.5 else Know(self.rng.choice(self.agents), g)
        return g

    def predicate(self):
        """Predicate position term in the system's language."""
        if self.system is System.S_EAS and self.rng.random() < 0.4:
            return Know(self.agents[0], self.literal())
        return self.term()

    def subject(self):
        return self.term() if self.system.is_nes else self.atom()

    def axiom_step(self, s):
        """Terms ``m`` for which ``all s m`` is an axiom of the system."""
        out = [m for m in (Neg(Neg(s)), getattr(s, "inner", None), getattr(getattr(s, "inner", None), "inner", None))
               if m is not None]
        out += [Know(a, s) for a in self.agents]
        return [m for m in out
                if any(self.ok(r) and axiom_instance(r, All(s, m)) for r in AXIOMS[1:])]

    def formula(self) -> Formula:
        q = All if self.rng.random() < 0.5 else Some
        s = self.subject()
        if self.system.is_nes and q is All and self.rng.random() < 0.3:
            # a K-wrapped axiom chain, so the K rule and modal axioms get exercised
            p = s
            for _ in range(self.rng.randint(1, 2)):
                steps = self.axiom_step(p)
                p = self.rng.choice(steps) if steps else p
            if self.rng.random() < 0.5:
                a = self.rng.choice(self.agents)
                s, p = Know(a, s), Know(a, p)
            return All(s, p)
        return q(s, self.predicate())

    # -- proofs --------------------------------------------------------------
    def ok(self, rule):
        return self.system in RULE_SYSTEMS[rule]

    def leaf(self, phi, hyps, premises_ok):
        axioms = [r for r in AXIOMS if self.ok(r) and axiom_instance(r, phi)]
        if axioms:
            return Axiom(axioms[0], phi)
        for tag, h in hyps.items():
            if h == phi:
                return Hypothesis(tag, phi)
        return Premise(phi) if premises_ok else None

    def backward(self, phi: Formula):
        """Candidate (rule, premise formulas) pairs that could conclude ``phi``."""
        s, p, out = phi.subject, phi.predicate, []
        nes, eas = self.system.is_nes, self.system is System.S_EAS
        if phi.is_universal:
            steps = self.axiom_step(s) if nes else []
            m = self.rng.choice(steps) if steps and self.rng.random() < 0.5 else (
                self.term() if nes else self.atom())
            out.append((Rule.BARBARA, [All(s, m), All(m, p)]))
            if self.ok(Rule.K_RULE) and isinstance(s, Know) and isinstance(p, Know) and s.agent == p.agent:
                out.append((Rule.K_RULE, [All(s.inner, p.inner)]))
            if eas and not isinstance(p, Know):
                out.append((Rule.A_TRUTH, [All(s, Know(self.agents[0], p))]))
        else:
            if nes or (isinstance(s, Atom) and isinstance(p, Atom)):
                out.append((Rule.CONVERSION, [Some(p, s)]))
            if s == p:
                out.append((Rule.EXISTENCE, [Some(s, self.predicate())]))
            if nes and isinstance(s, Neg) and s == p:
                out.append((Rule.NON_EMPTINESS, [All(s.inner, s)]))
            if eas:
                b = self.atom()
                out.append((Rule.DARII, [Some(s, b), All(b, p)]))
                if isinstance(p, Know):
                    c = self.atom()
                    out.append((Rule.DISAMIS_BOCARDO, [All(c, s), Some(c, p)]))
                    if p.inner == s:
                        out.append((Rule.EXISTENCE2, [Some(self.atom(), p)]))
                else:
                    out.append((Rule.E_TRUTH, [Some(s, Know(self.agents[0], p))]))
        if not (eas and is_modal(phi)):
            out.append((Rule.RAA, None))
        return out

    def prove(self, phi, height, hyps=None, premises_ok=True):
        hyps = hyps or {}
        if height <= 1 or self.rng.random() < 0.25:
            return self.leaf(phi, hyps, premises_ok)
        rule, kids = self.rng.choice(self.backward(phi))
        if rule is Rule.RAA:
            return self.raa(phi, height, hyps, premises_ok)
        closed = rule is Rule.K_RULE
        children = []
        for k in kids:
            c = None
            for _ in range(4 if closed or not premises_ok else 1):
                c = self.prove(k, height - 1, {} if closed else hyps, premises_ok and not closed)
                if c is not None:
                    break
            if c is None:
                return self.leaf(phi, hyps, premises_ok)
            children.append(c)
        return Infer(rule, tuple(children), phi)

    def raa(self, phi, height, hyps, premises_ok):
        self.tags += 1
        tag = f"h{self.tags}"
        h = system_negate(phi, self.system)
        inner = dict(hyps, **{tag: h})
        # either refute the hypothesis itself or clash two derived sentences
        if self.rng.random() < 0.8:
            psi = h
        else:
            psi = self.formula()
            if self.system is System.S_EAS:
                psi = Formula(psi.quantifier, psi.subject, self.literal())
        left = self.prove(psi, height - 1, inner, premises_ok)
        right = self.prove(system_negate(psi, self.system), height - 1, inner, premises_ok)
        if left is None or right is None:
            return self.leaf(phi, hyps, premises_ok)
        return Infer(Rule.RAA, (left, right), phi, discharged=tag)

    def sample(self, max_height=5):
        """A checked ``(proof, judgement)`` pair, or ``None`` if the draw was rejected."""
        phi = self.formula()
        proof = self.prove(phi, self.rng.randint(1, max_height))
        if proof is None:
            return None
        j = Judgement(tuple(sorted(open_premises(proof), key=str)), phi, self.system)
        try:
            if not j.well_tiered():
                return None
            check_proof(proof, j)
        except ValueError:
            return None
        return proof, j
