"""Finite, checkable pieces of the completeness constructions.

* complete assertoric theories, read off small one-world models;
* the three-world countermodel family for epistemic apodeictic premise sets;
* bounded saturation of possible / Delta-possible term sets into types.

Every derivability side condition is answered by the bounded prover and,
when the prover fails, by a bounded countermodel search.  Answers neither
search settles are reported as ``"unknown"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .calculus import Judgement, System
from .search import SearchBudget, _Prover, default_model_bounds, is_inconsistent, prove_bounded
from .semantics import FrameClass, KripkeModel, PointedModel, valid_bounded
from .syntax import (
    All, Atom, DEFAULT_EAS_AGENT, Formula, Know, Neg, Some, Term, check_tier,
    enumerate_terms, formula_preds, is_modal,
)

__all__ = [
    "AssertoricTheory", "EasCountermodelReport", "TypeSaturation", "DegenerateInput",
    "InconsistentInput", "ImpossibleSeed", "assertoric_sentences",
    "enumerate_assertoric_mcs", "build_eas_countermodel", "countermodel_family",
    "saturate_type", "respects_barbara", "MCS_PRED_LIMIT",
]

MCS_PRED_LIMIT = 4


class DegenerateInput(ValueError):
    pass


class InconsistentInput(ValueError):
    pass


class ImpossibleSeed(ValueError):
    pass


@dataclass(frozen=True)
class AssertoricTheory:
    preds: frozenset
    sentences: frozenset

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.sentences

    def sorted(self) -> list[Formula]:
        return sorted(self.sentences, key=str)


def assertoric_sentences(preds: Iterable[str]) -> list[Formula]:
    atoms = [Atom(p) for p in sorted(preds)]
    out = []
    for a, b in itertools.product(atoms, repeat=2):
        out += [All(a, b), All(a, Neg(b)), Some(a, b), Some(a, Neg(b))]
    return out


def enumerate_assertoric_mcs(pred_set: Iterable[str], base: Iterable[Formula] = (),
                             limit: int = MCS_PRED_LIMIT) -> list[AssertoricTheory]:
    """All complete satisfiable assertoric theories over ``pred_set`` containing ``base``.

    A one-world model's theory only depends on which of the ``2**n`` regions
    of the predicates are inhabited, so every region set is tried once.
    """
    preds = tuple(sorted(set(pred_set)))
    if len(preds) > limit:
        raise ValueError(f"{len(preds)} predicates exceed the limit {limit}")
    base = frozenset(base)
    sentences = assertoric_sentences(preds)
    profiles = range(1 << len(preds))
    seen = set()
    for r in range(1, len(profiles) + 1):
        for region in itertools.combinations(profiles, r):
            interp = {(0, p): frozenset(x for x in region if x >> k & 1) for k, p in enumerate(preds)}
            m = KripkeModel((0,), (), {}, tuple(region), interp, preds)
            theory = frozenset(phi for phi in sentences if m.holds(0, phi))
            if base <= theory:
                seen.add(theory)
    return [AssertoricTheory(frozenset(preds), t) for t in sorted(seen, key=lambda t: sorted(map(str, t)))]


# --------------------------------------------------------------------------
# the three-world family

@dataclass
class EasCountermodelReport:
    model: KripkeModel
    delta: AssertoricTheory
    sigma_k: frozenset
    satisfied: bool
    point: str = "w"
    failures: list = field(default_factory=list)
    queries: list = field(default_factory=list)  # (sentence, "proved" | "refuted" | "unknown")

    @property
    def pointed(self) -> PointedModel:
        return PointedModel(self.model, self.point)

    def manifest(self) -> str:
        lines = ["# delta"] + [f"  {phi}" for phi in self.delta.sorted()]
        lines += ["# modal premises"] + [f"  {phi}" for phi in sorted(self.sigma_k, key=str)]
        lines.append(f"# verified at {self.point}: {'yes' if self.satisfied else 'NO'}")
        for phi in self.failures:
            lines.append(f"  fails: {phi}")
        lines.append("# oracle queries")
        lines += [f"  {outcome:8} {phi}" for phi, outcome in self.queries]
        return "\n".join(lines) + "\n"


class _Oracle:
    """Derivability in S_EAS from a fixed premise set, answered three ways."""

    def __init__(self, premises, budget: SearchBudget, bounds):
        self.premises = tuple(sorted(premises, key=str))
        self.bounds = bounds
        prover = _Prover(System.S_EAS, self.premises, None, budget)
        self.facts = prover._context((), budget.raa_nesting).facts
        self.log: list = []
        self._memo: dict = {}

    def ask(self, phi: Formula) -> str:
        hit = self._memo.get(phi)
        if hit is None:
            if phi in self.facts:
                hit = "proved"
            elif valid_bounded(list(self.premises), phi, FrameClass.T, *self.bounds) is not None:
                hit = "refuted"
            else:
                hit = "unknown"
            self._memo[phi] = hit
            self.log.append((phi, hit))
        return hit

    def proves(self, phi: Formula) -> bool:
        return self.ask(phi) == "proved"


def build_eas_countermodel(delta: AssertoricTheory, sigma_k: Iterable[Formula],
                           agent: str = DEFAULT_EAS_AGENT,
                           budget: SearchBudget = SearchBudget(),
                           model_bounds: Optional[tuple[int, int]] = None) -> EasCountermodelReport:
    """Three worlds ``w, v0, v1``; ``w`` sees both and every world sees itself."""
    sigma_k = frozenset(sigma_k)
    for phi in sigma_k:
        if not check_tier(phi, "EAS", agent) or not is_modal(phi):
            raise ValueError(f"{phi} is not a modal EAS sentence for agent {agent}")
    gamma = tuple(sorted(delta.sentences | sigma_k, key=str))
    if is_inconsistent(gamma, System.S_EAS, budget) is not None:
        raise InconsistentInput("delta together with the modal premises is inconsistent")
    positives = sorted((phi for phi in delta.sentences
                        if not phi.is_universal and isinstance(phi.predicate, Atom)), key=str)
    if not positives:
        raise DegenerateInput("delta has no positive existential sentence; the domain would be empty")
    preds = sorted(delta.preds | set().union(*(formula_preds(f) for f in sigma_k)))
    bounds = model_bounds or default_model_bounds(System.S_EAS, len(preds))
    oracle = _Oracle(gamma, budget, bounds)

    def name(phi, copy=False):
        return f"{phi.subject}.{phi.predicate}" + ("'" if copy else "")

    domain = [name(phi) for phi in positives] + [name(phi, True) for phi in positives]
    K = lambda g: Know(agent, g)

    rho_w = {}
    for x in preds:
        X = Atom(x)
        rho_w[x] = {n for phi in positives if All(phi.subject, X) in delta or All(phi.predicate, X) in delta
                    for n in (name(phi), name(phi, True))}

    def known_via(g_of_x) -> set:
        out = set()
        for c in preds:
            if oracle.proves(All(Atom(c), g_of_x)):
                out |= rho_w[c]
        return out

    rho_v0, rho_v1 = {}, {}
    for x in preds:
        X = Atom(x)
        v0 = known_via(K(X))
        v0 |= {name(phi) for phi in positives
               if phi.predicate == X and oracle.proves(Some(phi.subject, K(X)))}
        rho_v0[x] = v0
        excluded = known_via(K(Neg(X)))
        excluded |= {name(phi, True) for phi in positives
                     if phi.subject == phi.predicate and oracle.proves(Some(phi.subject, K(Neg(X))))}
        rho_v1[x] = set(domain) - excluded

    interp = {}
    for world, rho in (("w", rho_w), ("v0", rho_v0), ("v1", rho_v1)):
        for x in preds:
            interp[(world, x)] = frozenset(rho[x])
    rel = {("w", "w"), ("v0", "v0"), ("v1", "v1"), ("w", "v0"), ("w", "v1")}
    model = KripkeModel(("w", "v0", "v1"), (agent,), {agent: rel}, tuple(domain), interp, tuple(preds))
    failures = [phi for phi in gamma if not model.holds("w", phi)]
    return EasCountermodelReport(model, delta, sigma_k, not failures, "w", failures, list(oracle.log))


def countermodel_family(sigma: Sequence[Formula], preds: Iterable[str] = (),
                    agent: Optional[str] = None, budget: SearchBudget = SearchBudget()):
    """Build the family for every consistent completion of the non-modal premises.

    Yields ``(delta, report_or_exception)`` in the order of
    :func:`enumerate_assertoric_mcs`.
    """
    sigma = list(sigma)
    preds = set(preds).union(*(formula_preds(f) for f in sigma))
    if agent is None:
        agent = Judgement(sigma, sigma[0], System.S_EAS).eas_agent() if sigma else DEFAULT_EAS_AGENT
    sigma_0 = [phi for phi in sigma if not is_modal(phi)]
    sigma_k = [phi for phi in sigma if is_modal(phi)]
    for delta in enumerate_assertoric_mcs(preds, sigma_0):
        try:
            yield delta, build_eas_countermodel(delta, sigma_k, agent, budget)
        except (InconsistentInput, DegenerateInput) as exc:
            yield delta, exc


# --------------------------------------------------------------------------
# type saturation

@dataclass
class TypeSaturation:
    status: str  # "saturated" | "blocked" | "inconclusive"
    terms: frozenset
    enumerated: list
    term: Optional[Term] = None
    queries: list = field(default_factory=list)

    def __contains__(self, g: Term) -> bool:
        return g in self.terms


class _TypeOracle:
    def __init__(self, delta, budget, bounds):
        self.delta = tuple(delta) if delta is not None else None
        self.budget = budget
        self.bounds = bounds
        self.log: list = []
        self._memo: dict = {}

    def _ask(self, phi: Formula, premises: tuple) -> str:
        key = (phi, premises)
        hit = self._memo.get(key)
        if hit is None:
            proof = prove_bounded(Judgement(premises, phi, System.T_NES), self.budget)
            if proof is not None:
                hit = "proved"
            elif valid_bounded(list(premises), phi, FrameClass.T, *self.bounds) is not None:
                hit = "refuted"
            else:
                hit = "unknown"
            self._memo[key] = hit
            self.log.append((phi, hit))
        return hit

    def pair(self, a: Term, b: Term) -> str:
        """"ok", "bad" or "unknown" for a pair inside one type."""
        if self.delta is None:
            ans = self._ask(All(a, Neg(b)), ())
            return {"proved": "bad", "refuted": "ok"}.get(ans, "unknown")
        ans = self._ask(Some(a, b), self.delta)
        return {"proved": "ok", "refuted": "bad"}.get(ans, "unknown")

    def entails_all(self, a: Term, b: Term) -> str:
        return self._ask(All(a, b), self.delta or ())


def _check_set(oracle: _TypeOracle, current: Sequence[Term], new: Term) -> str:
    verdict = "ok"
    for t in list(current) + [new]:
        for a, b in ((new, t), (t, new)):
            ans = oracle.pair(a, b)
            if ans == "bad":
                return "bad"
            if ans == "unknown":
                verdict = "unknown"
    return verdict


def saturate_type(seed: Iterable[Term], preds: Iterable[str], agents: Iterable[str],
                  term_depth: int, delta: Optional[Iterable[Formula]] = None,
                  budget: SearchBudget = SearchBudget(max_depth=8, raa_candidates=200),
                  model_bounds: tuple[int, int] = (2, 2)) -> TypeSaturation:
    """Extend ``seed`` one enumerated term at a time, adding the term or its negation.

    Without ``delta`` the invariant kept is "no two members are provably
    disjoint"; with ``delta`` it is "delta proves every pair co-instantiated".
    Raises :class:`ImpossibleSeed` when the seed provably violates it.
    """
    oracle = _TypeOracle(delta, budget, model_bounds)
    seed = sorted(set(seed), key=lambda t: (len(str(t)), str(t)))
    members: list[Term] = []
    for t in seed:
        ans = _check_set(oracle, members, t)
        if ans == "bad":
            raise ImpossibleSeed(f"seed is not possible: {t} clashes with {members or [t]}")
        if ans == "unknown":
            return TypeSaturation("inconclusive", frozenset(members), [], t, oracle.log)
        members.append(t)
    enumerated = enumerate_terms(preds, agents, term_depth)
    for s in enumerated:
        if s in members or Neg(s) in members:
            continue
        pending = None
        for candidate in (s, Neg(s)):
            ans = _check_set(oracle, members, candidate)
            if ans == "ok":
                members.append(candidate)
                break
            if ans == "unknown" and pending is None:
                pending = candidate
        else:
            status = "inconclusive" if pending is not None else "blocked"
            return TypeSaturation(status, frozenset(members), enumerated, s, oracle.log)
    return TypeSaturation("saturated", frozenset(members), enumerated, None, oracle.log)


def respects_barbara(result: TypeSaturation, delta: Optional[Iterable[Formula]] = None,
                     budget: SearchBudget = SearchBudget(max_depth=8, raa_candidates=200),
                     model_bounds: tuple[int, int] = (2, 2)) -> list[tuple[Term, Term]]:
    """Pairs ``(g1, g2)`` with ``g1`` a member, ``all g1 g2`` proved, ``g2`` missing."""
    oracle = _TypeOracle(delta, budget, model_bounds)
    bad = []
    for g1 in sorted(result.terms, key=str):
        for g2 in result.enumerated:
            if g2 not in result.terms and oracle.entails_all(g1, g2) == "proved":
                bad.append((g1, g2))
    return bad
