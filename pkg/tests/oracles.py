"""Independent reference implementations used to cross-check the engine.

Nothing here touches the bitmask machinery of ``KripkeModel``: extensions are
plain Python sets computed straight from the recursive definition.
"""

from __future__ import annotations

import itertools

from episyl.semantics import KripkeModel
from episyl.syntax import Atom, Know, Neg, formula_preds


def ext(m: KripkeModel, w, g) -> frozenset:
    if isinstance(g, Atom):
        return frozenset(m.interp.get((w, g.pred), frozenset()))
    if isinstance(g, Neg):
        return frozenset(m.domain) - ext(m, w, g.inner)
    assert isinstance(g, Know)
    out = set(m.domain)
    for (u, v) in m.relations.get(g.agent, ()):
        if u == w:
            out &= ext(m, v, g.inner)
    return frozenset(out)


def holds(m: KripkeModel, w, phi) -> bool:
    a, b = ext(m, w, phi.subject), ext(m, w, phi.predicate)
    return a <= b if phi.is_universal else bool(a & b)


def region_models(preds):
    """One model per non-empty set of inhabited regions (one world, no agents)."""
    preds = tuple(sorted(preds))
    for r in range(1, 1 << len(preds)):
        for region in itertools.combinations(range(1 << len(preds)), r):
            interp = {(0, p): frozenset(x for x in region if x >> k & 1) for k, p in enumerate(preds)}
            yield KripkeModel((0,), (), {}, region, interp, preds)


def region_valid(premises, goal) -> bool:
    """Exact one-world consequence for monadic sentences (small-model argument)."""
    preds = set().union(*(formula_preds(f) for f in list(premises) + [goal]))
    return not any(all(holds(m, 0, p) for p in premises) and not holds(m, 0, goal)
                   for m in region_models(preds))
