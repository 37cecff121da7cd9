"""Bounded proof search, singleton models and the decide harness.

Proof search is forward chaining over a finite closure of terms.  RAA is
applied as a lemma step: a candidate sentence is derived when adding its
contradictory to the current context closes off a contradiction, searched
recursively up to ``raa_nesting`` levels.  Candidates whose contradictory is
satisfiable in a small model are skipped; by soundness no proof can exist
for them, so the pruning loses nothing.
"""

from __future__ import annotations

from collections import defaultdict, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .calculus import (
    Axiom, Hypothesis, Infer, Judgement, Premise, Proof, Rule, RULE_SYSTEMS, System,
    check_proof, derived_darii, proof_height, system_negate,
)
from .semantics import (
    FrameClass, KripkeModel, PointedModel, check_frame, satisfies, valid_bounded,
)
from .syntax import (
    All, Atom, Formula, Know, Neg, Some, Term, check_tier, formula_agents,
    formula_preds, is_modal, negate, nnf, subterms, term_agents, term_size,
)

__all__ = [
    "SearchBudget", "DecideResult", "prove_bounded", "is_inconsistent",
    "singleton_model", "decide", "default_model_bounds", "SearchBug",
]


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 12
    max_formulas: int = 5000
    raa_candidates: int = 400
    raa_nesting: int = 2
    modal_increment: int = 1

    def __post_init__(self):
        for name in ("max_depth", "max_formulas", "raa_candidates"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.raa_nesting < 0 or self.modal_increment < 0:
            raise ValueError("raa_nesting and modal_increment must be >= 0")


class SearchBug(AssertionError):
    """A search result failed re-verification."""


def default_model_bounds(system: System, preds: int = 3) -> tuple[int, int]:
    """(max_worlds, max_domain) used for pruning and countermodel search."""
    system = System(system)
    if system is System.S_AS:
        return 1, max(1, 2 ** preds)
    if system is System.S_EAS:
        return 3, 3
    return 2, 2


@dataclass
class _Entry:
    proof: Proof
    height: int
    closed: bool


def _key(phi: Formula):
    return (term_size(phi.subject) + term_size(phi.predicate), str(phi))


class _Prover:
    def __init__(self, system: System, premises: Sequence[Formula], goal: Optional[Formula],
                 budget: SearchBudget, agents: Iterable[str] = ()):
        self.system = System(system)
        self.premises = tuple(premises)
        self.goal = goal
        self.budget = budget
        everything = list(self.premises) + ([goal] if goal is not None else [])
        self.preds = sorted(set().union(*(formula_preds(f) for f in everything)) or {"A"})
        agents = set(agents).union(*(formula_agents(f) for f in everything))
        if self.system is System.S_EAS:
            self.agent = Judgement(self.premises, goal or everything[0], self.system).eas_agent() \
                if everything else "k"
            agents = {self.agent}
        else:
            self.agent = None
        self.agents = sorted(agents)
        self.rules = {r for r, ss in RULE_SYSTEMS.items() if self.system in ss}
        self.terms = self._closure(everything)
        self.subjects, self.predicates = self._positions()
        self.bounds = default_model_bounds(self.system, len(self.preds))
        self._sat_cache: dict = {}
        self._memo: dict = {}
        self.truncated = False

    # -- term closure ------------------------------------------------------
    def _closure(self, formulas) -> frozenset:
        tier = self.system.tier.value
        atoms = [Atom(p) for p in self.preds]
        if tier == "AS":
            return frozenset(atoms + [Neg(a) for a in atoms])
        if tier == "EAS":
            lits = atoms + [Neg(a) for a in atoms]
            return frozenset(lits + [Know(self.agent, l) for l in lits])
        base = set()
        for f in formulas:
            for t in (f.subject, f.predicate):
                base.update(subterms(t))
        base.update(atoms)
        out = set(base) | {Neg(s) for s in base}
        layer = set(base)
        for _ in range(self.budget.modal_increment):
            layer = {Know(a, s) for s in layer for a in self.agents}
            out |= layer | {Neg(s) for s in layer}
        return frozenset(out)

    def _positions(self):
        terms = sorted(self.terms, key=lambda t: (term_size(t), str(t)))
        if self.system.is_nes:
            return terms, terms
        return [t for t in terms if isinstance(t, Atom)], terms

    def in_language(self, phi: Formula) -> bool:
        return (phi.subject in self.terms and phi.predicate in self.terms
                and check_tier(phi, self.system.tier, self.agent))

    # -- semantic pruning ----------------------------------------------------
    def satisfiable(self, formulas: tuple) -> bool:
        key = frozenset(formulas)
        hit = self._sat_cache.get(key)
        if hit is None:
            a = Atom(self.preds[0])
            falsum = Some(a, Neg(a))
            w, d = self.bounds
            agents = self.agents if self.system.tier.value != "AS" else ()
            hit = valid_bounded(list(formulas), falsum, self.system.frame, w, d,
                                preds=self.preds, agents=agents) is not None
            self._sat_cache[key] = hit
        return hit

    # -- contexts ----------------------------------------------------------
    def _context(self, hyps: tuple, level: int) -> "_Context":
        key = (frozenset(hyps), level)
        ctx = self._memo.get(key)
        if ctx is None:
            ctx = _Context(self, hyps, level)
            ctx.run()
            self._memo[key] = ctx
        return ctx


class _Context:
    """Forward closure of premises plus a stack of RAA hypotheses."""

    def __init__(self, prover: _Prover, hyps: tuple, level: int):
        self.p = prover
        self.hyps = hyps  # tuple of (tag, formula)
        self.level = level
        self.facts: dict[Formula, _Entry] = {}
        self.by_subject = defaultdict(list)
        self.by_predicate = defaultdict(list)
        self.some_by_subject = defaultdict(list)
        self.some_by_predicate = defaultdict(list)
        self.queue: deque = deque()
        self.contradiction: Optional[tuple[Formula, Formula]] = None

    # bookkeeping
    def add(self, phi: Formula, proof: Proof, height: int, closed: bool, force: bool = False) -> None:
        if phi in self.facts or self.contradiction is not None:
            return
        if not force and (height > self.p.budget.max_depth or not self.p.in_language(phi)):
            return
        if len(self.facts) >= self.p.budget.max_formulas:
            self.p.truncated = True
            return
        self.facts[phi] = _Entry(proof, height, closed)
        if phi.is_universal:
            self.by_subject[phi.subject].append(phi)
            self.by_predicate[phi.predicate].append(phi)
        else:
            self.some_by_subject[phi.subject].append(phi)
            self.some_by_predicate[phi.predicate].append(phi)
        self.queue.append(phi)
        self._check_contradiction(phi)

    def _check_contradiction(self, phi: Formula) -> None:
        system = self.p.system
        if system is System.S_EAS and is_modal(phi):
            return
        other = system_negate(phi, system)
        if other in self.facts:
            self.contradiction = (phi, other)
            return
        if system.is_nes and isinstance(phi.predicate, Neg):
            q = "some" if phi.is_universal else "all"
            other = Formula(q, phi.subject, phi.predicate.inner)
            if other in self.facts:
                self.contradiction = (other, phi)

    def infer(self, rule: Rule, parents: Sequence[Formula], concl: Formula) -> None:
        if concl in self.facts:
            return
        es = [self.facts[f] for f in parents]
        self.add(concl, Infer(rule, tuple(e.proof for e in es), concl),
                 1 + max(e.height for e in es), all(e.closed for e in es))

    # seeding
    def seed(self) -> None:
        p = self.p
        for t in sorted(p.terms, key=lambda t: (term_size(t), str(t))):
            for rule, phi in self._axioms(t):
                if rule in p.rules:
                    self.add(phi, Axiom(rule, phi), 1, True)
        for phi in p.premises:
            self.add(phi, Premise(phi), 1, False, force=True)
        for tag, phi in self.hyps:
            self.add(phi, Hypothesis(tag, phi), 1, False, force=True)

    @staticmethod
    def _axioms(t: Term):
        yield Rule.AX_ID, All(t, t)
        if isinstance(t, Know):
            yield Rule.AX_T, All(t, t.inner)
            yield Rule.AX_4, All(t, Know(t.agent, t))
        yield Rule.AX_DN1, All(t, Neg(Neg(t)))
        if isinstance(t, Neg) and isinstance(t.inner, Neg):
            yield Rule.AX_DN2, All(t, t.inner.inner)
        if isinstance(t, Neg) and isinstance(t.inner, Know):
            yield Rule.AX_5, All(t, Know(t.inner.agent, t))

    # forward chaining
    def saturate(self) -> None:
        rules = self.p.rules
        while self.queue and self.contradiction is None:
            f = self.queue.popleft()
            s, g = f.subject, f.predicate
            if f.is_universal:
                for h in list(self.by_subject[g]):
                    self.infer(Rule.BARBARA, (f, h), All(s, h.predicate))
                for h in list(self.by_predicate[s]):
                    self.infer(Rule.BARBARA, (h, f), All(h.subject, g))
                if Rule.NON_EMPTINESS in rules and g == Neg(s):
                    self.infer(Rule.NON_EMPTINESS, (f,), Some(g, g))
                if Rule.K_RULE in rules and self.facts[f].closed:
                    for a in self.p.agents:
                        self.infer(Rule.K_RULE, (f,), All(Know(a, s), Know(a, g)))
                if Rule.DARII in rules:
                    for h in list(self.some_by_predicate[s]):
                        self.infer(Rule.DARII, (h, f), Some(h.subject, g))
                if Rule.DISAMIS_BOCARDO in rules:
                    for h in list(self.some_by_subject[s]):
                        if isinstance(h.predicate, Know):
                            self.infer(Rule.DISAMIS_BOCARDO, (f, h), Some(g, h.predicate))
                if Rule.A_TRUTH in rules and isinstance(g, Know):
                    self.infer(Rule.A_TRUTH, (f,), All(s, g.inner))
            else:
                self.infer(Rule.CONVERSION, (f,), Some(g, s))
                self.infer(Rule.EXISTENCE, (f,), Some(s, s))
                if Rule.DARII in rules:
                    for h in list(self.by_subject[g]):
                        self.infer(Rule.DARII, (f, h), Some(s, h.predicate))
                if isinstance(g, Know):
                    if Rule.DISAMIS_BOCARDO in rules:
                        for h in list(self.by_subject[s]):
                            self.infer(Rule.DISAMIS_BOCARDO, (h, f), Some(h.predicate, g))
                    if Rule.E_TRUTH in rules:
                        self.infer(Rule.E_TRUTH, (f,), Some(s, g.inner))
                    if Rule.EXISTENCE2 in rules and isinstance(g.inner, Atom):
                        self.infer(Rule.EXISTENCE2, (f,), Some(g.inner, g))

    # RAA lemmas
    def candidates(self):
        p = self.p
        out = []
        for s in p.subjects:
            for g in p.predicates:
                for q in ("all", "some"):
                    phi = Formula(q, s, g)
                    if phi in self.facts or not p.in_language(phi):
                        continue
                    if p.system is System.S_EAS and is_modal(phi):
                        continue
                    out.append(phi)
        out.sort(key=_key)
        goal = p.goal
        if goal in out:
            out.remove(goal)
            out.insert(0, goal)
        return out

    def hypotheses_for(self, phi: Formula):
        system = self.p.system
        hs = [system_negate(phi, system)]
        if system.is_nes and isinstance(phi.predicate, Neg):
            q = "some" if phi.is_universal else "all"
            alt = Formula(q, phi.subject, phi.predicate.inner)
            if alt not in hs:
                hs.append(alt)
        return hs

    def try_raa(self, phi: Formula) -> bool:
        p = self.p
        tag = f"h{len(self.hyps) + 1}"
        base = p.premises + tuple(f for _, f in self.hyps)
        for h in self.hypotheses_for(phi):
            if p.satisfiable(base + (h,)):
                continue
            sub = p._context(self.hyps + ((tag, h),), self.level - 1)
            if sub.contradiction is None:
                continue
            a, b = sub.contradiction
            ea, eb = sub.facts[a], sub.facts[b]
            proof = Infer(Rule.RAA, (ea.proof, eb.proof), phi, discharged=tag)
            height = 1 + max(ea.height, eb.height)
            closed = ea.closed and eb.closed
            self.add(phi, proof, height, closed)
            return phi in self.facts
        return False

    def run(self) -> None:
        self.seed()
        self.saturate()
        if self.level <= 0:
            return
        tried = 0
        progress = True
        while progress and self.contradiction is None and self.p.goal not in self.facts:
            progress = False
            for phi in self.candidates():
                if tried >= self.p.budget.raa_candidates:
                    self.p.truncated = True
                    return
                tried += 1
                if self.try_raa(phi):
                    self.saturate()
                    progress = True
                    if self.contradiction is not None or self.p.goal in self.facts:
                        return


def prove_bounded(j: Judgement, budget: SearchBudget = SearchBudget()) -> Optional[Proof]:
    """Search for a proof of ``j`` within ``budget``; re-checked before returning."""
    if not j.well_tiered():
        raise ValueError("judgement is outside its system's language")
    prover = _Prover(j.system, j.premises, j.conclusion, budget)
    if not prover.in_language(j.conclusion):
        return None
    if prover.satisfiable(j.premises + (system_negate(j.conclusion, j.system),)):
        return None
    ctx = prover._context((), budget.raa_nesting)
    entry = ctx.facts.get(j.conclusion)
    if entry is None:
        return None
    check_proof(entry.proof, j)
    return entry.proof


def _some_g_not_g(a: Formula, b: Formula, facts: dict, system: System) -> Optional[Proof]:
    """Turn a contradictory pair into a proof of ``some g -g``."""
    e, u = (a, b) if not a.is_universal else (b, a)
    pe, pu = facts[e].proof, facts[u].proof
    if system.is_nes:
        if u == negate(e):  # e = some g1 g2, u = all g1 -g2
            conv = Infer(Rule.CONVERSION, (pe,), Some(e.predicate, e.subject))
            return derived_darii(conv, pu)
        g1, g2 = u.subject, u.predicate  # u = all g1 g2, e = some g1 -g2
        dn = Infer(Rule.BARBARA, (pu, Axiom(Rule.AX_DN1, All(g2, Neg(Neg(g2))))),
                   All(g1, Neg(Neg(g2))))
        conv = Infer(Rule.CONVERSION, (pe,), Some(e.predicate, g1))
        return derived_darii(conv, dn)
    if system is System.S_EAS and isinstance(e.predicate, Atom):
        conv = Infer(Rule.CONVERSION, (pe,), Some(e.predicate, e.subject))
        return Infer(Rule.DARII, (conv, pu), Some(e.predicate, u.predicate))
    g = e.subject
    return Infer(Rule.RAA, (pe, pu), Some(g, Neg(g)), discharged="h0")


def is_inconsistent(premises: Sequence[Formula], system: System,
                    budget: SearchBudget = SearchBudget()) -> Optional[Proof]:
    """A checked proof of some ``some g -g`` from ``premises``, or ``None`` (unknown)."""
    system = System(system)
    premises = tuple(premises)
    if not premises:
        return None
    prover = _Prover(system, premises, None, budget)
    if prover.satisfiable(premises):
        return None
    ctx = prover._context((), budget.raa_nesting)
    target = None
    for phi in sorted(ctx.facts, key=_key):
        if not phi.is_universal and phi.predicate == Neg(phi.subject):
            target = ctx.facts[phi].proof
            break
    if target is None and ctx.contradiction is not None:
        target = _some_g_not_g(*ctx.contradiction, ctx.facts, system)
    if target is None:
        return None
    check_proof(target, Judgement(premises, target.conclusion, system))
    return target


# --------------------------------------------------------------------------

def singleton_model(g: Term, agents: Iterable[str] = (), fc: FrameClass = FrameClass.S5) -> PointedModel:
    """One world, one element, every relation a loop; the element exemplifies ``g``."""
    agents = tuple(sorted(set(agents) | term_agents(g)))
    form = nnf(g)
    interp = {("w", form.pred): frozenset({0}) if form.positive else frozenset()}
    m = KripkeModel(("w",), agents, {a: {("w", "w")} for a in agents}, (0,), interp, (form.pred,))
    assert check_frame(m, fc)
    return PointedModel(m, "w")


# --------------------------------------------------------------------------

@dataclass
class DecideResult:
    verdict: str  # "PROVED" | "REFUTED" | "UNKNOWN"
    proof: Optional[Proof] = None
    model: Optional[PointedModel] = None
    detail: str = ""

    @property
    def exit_code(self) -> int:
        return {"PROVED": 0, "REFUTED": 1, "UNKNOWN": 3}[self.verdict]


def _countermodel(j: Judgement, fc: FrameClass, max_worlds: int, max_domain: int) -> Optional[PointedModel]:
    agents = None
    if j.system is System.S_AS:
        max_worlds = 1
    return valid_bounded(list(j.premises), j.conclusion, fc, max_worlds, max_domain, agents=agents)


def decide(j: Judgement, fc: Optional[FrameClass] = None, budget: SearchBudget = SearchBudget(),
           model_bounds: Optional[tuple[int, int]] = None, jobs: int = 1) -> DecideResult:
    """Race bounded proof search against bounded countermodel search.

    A proof wins over a countermodel if both are found; soundness says that
    cannot happen, and both winners are re-verified before returning.
    """
    fc = FrameClass(fc) if fc is not None else j.system.frame
    if model_bounds is None:
        preds = set().union(*(formula_preds(f) for f in j.premises + (j.conclusion,)))
        model_bounds = default_model_bounds(j.system, len(preds))
    w, d = model_bounds
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fp = pool.submit(prove_bounded, j, budget)
            fm = pool.submit(_countermodel, j, fc, w, d)
            proof, model = fp.result(), fm.result()
    else:
        proof = prove_bounded(j, budget)
        model = None if proof is not None else _countermodel(j, fc, w, d)
    if proof is not None:
        try:
            check_proof(proof, j)
        except Exception as exc:
            raise SearchBug(f"search returned a bad proof: {exc}") from exc
        if model is not None:
            raise SearchBug("both a proof and a countermodel were found")
        return DecideResult("PROVED", proof=proof, detail=f"height {proof_height(proof)}")
    if model is not None:
        ok = (check_frame(model.model, fc) and all(satisfies(model, p) for p in j.premises)
              and not satisfies(model, j.conclusion))
        if not ok:
            raise SearchBug("countermodel failed re-verification")
        return DecideResult("REFUTED", model=model,
                            detail=f"{len(model.model.worlds)} world(s), {len(model.model.domain)} element(s)")
    return DecideResult("UNKNOWN", detail=(
        f"no proof within depth {budget.max_depth}, {budget.max_formulas} formulas, "
        f"{budget.raa_candidates} raa candidates; no countermodel with <= {w} worlds, <= {d} elements"))
