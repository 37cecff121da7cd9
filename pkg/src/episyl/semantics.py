"""Finite constant-domain Kripke models and the satisfaction relation.

Extensions are computed as bitmasks over the domain, one mask per world,
and memoised per model.  ``valid_bounded`` searches for countermodels using
the fact that, over a fixed frame, a sentence only depends on which
*profiles* (valuations of the predicates across worlds) are carried by some
element; it is exhaustive for the given bounds.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .syntax import Atom, Formula, Neg, NnfTerm, Term, formula_agents, formula_preds

__all__ = [
    "FrameClass", "KripkeModel", "PointedModel", "ModelError", "UndeclaredSymbol",
    "ResourceLimitError", "check_frame", "term_extension", "nnf_extension",
    "satisfies", "enumerate_models", "enumerate_frames", "valid_bounded",
    "valid_bounded_bruteforce", "parse_model", "format_model", "DEFAULT_CEILING",
]

DEFAULT_CEILING = 10 ** 7


class ModelError(ValueError):
    pass


class UndeclaredSymbol(ModelError):
    pass


class ResourceLimitError(RuntimeError):
    pass


class FrameClass(Enum):
    T = "T"
    S4 = "S4"
    S5 = "S5"


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """``(W, {R_i}, D, rho)`` with a constant domain.

    ``interp`` maps ``(world, pred)`` to a set of elements; missing pairs are
    empty.  ``preds`` lists the declared predicates (defaults to those that
    occur in ``interp``).
    """

    worlds: tuple
    agents: tuple
    relations: Mapping[str, frozenset]
    domain: tuple
    interp: Mapping[tuple, frozenset]
    preds: tuple = ()
    _succ: dict = field(init=False, repr=False)
    _pmask: dict = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "worlds", tuple(self.worlds))
        set_(self, "agents", tuple(self.agents))
        set_(self, "domain", tuple(self.domain))
        set_(self, "relations", {a: frozenset(r) for a, r in self.relations.items()})
        set_(self, "interp", {k: frozenset(v) for k, v in self.interp.items()})
        preds = tuple(self.preds) or tuple(sorted({p for (_, p) in self.interp}))
        set_(self, "preds", preds)
        if not self.domain:
            raise ModelError("domain must be non-empty")
        if not self.worlds:
            raise ModelError("at least one world is required")
        widx = {w: n for n, w in enumerate(self.worlds)}
        didx = {d: n for n, d in enumerate(self.domain)}
        if len(widx) != len(self.worlds) or len(didx) != len(self.domain):
            raise ModelError("duplicate world or domain names")
        for a in self.relations:
            if a not in self.agents:
                raise UndeclaredSymbol(f"relation for undeclared agent {a!r}")
        succ = {}
        for a in self.agents:
            rows = [[] for _ in self.worlds]
            for (u, v) in sorted(self.relations.get(a, ()), key=repr):
                if u not in widx or v not in widx:
                    raise UndeclaredSymbol(f"relation {a}: {u}>{v} uses undeclared world")
                rows[widx[u]].append(widx[v])
            succ[a] = tuple(tuple(sorted(set(r))) for r in rows)
        pmask = {p: [0] * len(self.worlds) for p in preds}
        for (w, p), elems in self.interp.items():
            if w not in widx:
                raise UndeclaredSymbol(f"undeclared world {w!r}")
            if p not in pmask:
                raise UndeclaredSymbol(f"undeclared predicate {p!r}")
            m = 0
            for e in elems:
                if e not in didx:
                    raise UndeclaredSymbol(f"undeclared element {e!r}")
                m |= 1 << didx[e]
            pmask[p][widx[w]] = m
        set_(self, "_succ", succ)
        set_(self, "_pmask", {p: tuple(v) for p, v in pmask.items()})
        set_(self, "_cache", {})

    @property
    def full(self) -> int:
        return (1 << len(self.domain)) - 1

    def world_index(self, w) -> int:
        try:
            return self.worlds.index(w)
        except ValueError:
            raise UndeclaredSymbol(f"undeclared world {w!r}") from None

    def masks(self, g: Term) -> tuple:
        """Extension of ``g`` at every world, as domain bitmasks."""
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            try:
                out = self._pmask[g.pred]
            except KeyError:
                raise UndeclaredSymbol(f"undeclared predicate {g.pred!r}") from None
        elif isinstance(g, Neg):
            full = self.full
            out = tuple(full ^ m for m in self.masks(g.inner))
        else:
            if g.agent not in self._succ:
                raise UndeclaredSymbol(f"undeclared agent {g.agent!r}")
            inner = self.masks(g.inner)
            full = self.full
            res = []
            for row in self._succ[g.agent]:
                m = full
                for v in row:
                    m &= inner[v]
                res.append(m)
            out = tuple(res)
        self._cache[g] = out
        return out

    def elements(self, mask: int) -> frozenset:
        return frozenset(d for n, d in enumerate(self.domain) if mask >> n & 1)

    def successors(self, agent: str, w) -> tuple:
        return tuple(self.worlds[v] for v in self._succ[agent][self.world_index(w)])

    def holds(self, w, phi: Formula) -> bool:
        n = self.world_index(w)
        a = self.masks(phi.subject)[n]
        b = self.masks(phi.predicate)[n]
        if phi.is_universal:
            return a & ~b == 0
        return a & b != 0


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    world: Hashable

    def __post_init__(self):
        if self.world not in self.model.worlds:
            raise ModelError(f"point {self.world!r} is not a world of the model")


def check_frame(m: KripkeModel, fc: FrameClass) -> bool:
    fc = FrameClass(fc)
    for a in m.agents:
        r = m.relations.get(a, frozenset())
        if any((w, w) not in r for w in m.worlds):
            return False
        if fc in (FrameClass.S4, FrameClass.S5):
            for (u, v) in r:
                for (x, y) in r:
                    if v == x and (u, y) not in r:
                        return False
        if fc is FrameClass.S5 and any((v, u) not in r for (u, v) in r):
            return False
    return True


def term_extension(m: KripkeModel, w, g: Term) -> frozenset:
    return m.elements(m.masks(g)[m.world_index(w)])


def nnf_extension(m: KripkeModel, w, t: NnfTerm) -> frozenset:
    """Evaluate a negative normal form; diamonds are unions over successors."""

    def go(k: int, wi: int) -> int:
        if k == len(t.steps):
            base = m.masks(Atom(t.pred))[wi]
            return base if t.positive else m.full ^ base
        kind, agent = t.steps[k]
        succ = m._succ[agent][wi]
        if kind == "box":
            acc = m.full
            for v in succ:
                acc &= go(k + 1, v)
        else:
            acc = 0
            for v in succ:
                acc |= go(k + 1, v)
        return acc

    return m.elements(go(0, m.world_index(w)))


def satisfies(pm: PointedModel, phi: Formula) -> bool:
    return pm.model.holds(pm.world, phi)


# --------------------------------------------------------------------------
# enumeration

@functools.lru_cache(maxsize=None)
def _relations(n: int, fc: FrameClass) -> list[frozenset]:
    diag = [(w, w) for w in range(n)]
    off = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    for bits in range(1 << len(off)):
        r = frozenset(diag + [off[k] for k in range(len(off)) if bits >> k & 1])
        probe = KripkeModel(tuple(range(n)), ("_",), {"_": r}, (0,), {})
        if check_frame(probe, fc):
            out.append(r)
    return out


def enumerate_frames(agents: Sequence[str], max_worlds: int, fc: FrameClass) -> Iterator[tuple[int, dict]]:
    """Yield ``(n_worlds, relations)`` over worlds ``0..n-1`` in canonical order."""
    agents = tuple(sorted(agents))
    for n in range(1, max_worlds + 1):
        rels = _relations(n, fc)
        for combo in itertools.product(rels, repeat=len(agents)):
            yield n, dict(zip(agents, combo))


def _count_models(preds, agents, max_worlds, max_domain, fc) -> int:
    total = 0
    for n in range(1, max_worlds + 1):
        frames = len(_relations(n, fc)) ** len(agents)
        for d in range(1, max_domain + 1):
            total += frames * (1 << d) ** (n * len(preds))
    return total


def enumerate_models(pred_set: Iterable[str], agent_set: Iterable[str], max_worlds: int,
                     max_domain: int, fc: FrameClass = FrameClass.T,
                     ceiling: int = DEFAULT_CEILING) -> Iterator[KripkeModel]:
    """Every labelled model within the bounds whose relations lie in ``fc``."""
    if max_worlds < 1 or max_domain < 1:
        raise ValueError("bounds must be >= 1")
    preds = tuple(sorted(pred_set))
    agents = tuple(sorted(agent_set))
    fc = FrameClass(fc)
    count = _count_models(preds, agents, max_worlds, max_domain, fc)
    if count > ceiling:
        raise ResourceLimitError(f"{count} models exceed the ceiling {ceiling}")
    return _enumerate(preds, agents, max_worlds, max_domain, fc)


def _enumerate(preds, agents, max_worlds, max_domain, fc):
    for n, rels in enumerate_frames(agents, max_worlds, fc):
        worlds = tuple(range(n))
        for d in range(1, max_domain + 1):
            domain = tuple(range(d))
            cells = [(w, p) for w in worlds for p in preds]
            for masks in itertools.product(range(1 << d), repeat=len(cells)):
                interp = {c: frozenset(e for e in domain if m >> e & 1) for c, m in zip(cells, masks)}
                yield KripkeModel(worlds, agents, rels, domain, interp, preds)


def _symbols(premises, goal, preds, agents):
    ps = set(preds or ())
    ags = set(agents or ())
    for phi in list(premises) + [goal]:
        ps |= formula_preds(phi)
        ags |= formula_agents(phi)
    return tuple(sorted(ps)), tuple(sorted(ags))


def valid_bounded_bruteforce(premises: Sequence[Formula], goal: Formula, fc: FrameClass,
                             max_worlds: int, max_domain: int, *, preds=None, agents=None,
                             ceiling: int = DEFAULT_CEILING) -> Optional[PointedModel]:
    """Literal scan of ``enumerate_models`` x worlds; small bounds only."""
    preds, agents = _symbols(premises, goal, preds, agents)
    for m in enumerate_models(preds, agents, max_worlds, max_domain, fc, ceiling):
        for w in m.worlds:
            if all(m.holds(w, p) for p in premises) and not m.holds(w, goal):
                return PointedModel(m, w)
    return None


def _universal_model(n: int, rels: dict, preds: tuple, agents: tuple) -> KripkeModel:
    key = (n, tuple(sorted((a, tuple(sorted(r))) for a, r in rels.items())), preds, agents)
    um = _UNIVERSAL.get(key)
    if um is None:
        if len(_UNIVERSAL) > 4096:
            _UNIVERSAL.clear()
        um = _UNIVERSAL[key] = _build_universal(n, rels, preds, agents)
    return um


_UNIVERSAL: dict = {}


def _build_universal(n: int, rels: dict, preds: tuple, agents: tuple) -> KripkeModel:
    # domain = every profile; bit (w * |P| + k) of a profile: pred k true at w
    width = n * len(preds)
    profiles = tuple(range(1 << width))
    interp = {}
    for w in range(n):
        for k, p in enumerate(preds):
            bit = w * len(preds) + k
            interp[(w, p)] = frozenset(x for x in profiles if x >> bit & 1)
    return KripkeModel(tuple(range(n)), agents, rels, profiles, interp, preds)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cover(requirements: list[int], ok: int, max_domain: int) -> Optional[list[int]]:
    """Choose at most ``max_domain`` profiles from ``ok`` hitting every requirement."""
    classes: dict[tuple, int] = {}
    for b in _bits(ok):
        sig = tuple(bool(r >> b & 1) for r in requirements)
        classes.setdefault(sig, b)
    sigs = sorted(classes, key=lambda s: classes[s])
    for size in range(1, max_domain + 1):
        for combo in itertools.combinations(sigs, size):
            if all(any(s[k] for s in combo) for k in range(len(requirements))):
                return sorted(classes[s] for s in combo)
    return None


def _materialise(n, rels, preds, agents, profiles) -> KripkeModel:
    interp = {}
    for w in range(n):
        for k, p in enumerate(preds):
            bit = w * len(preds) + k
            interp[(w, p)] = frozenset(e for e, x in enumerate(profiles) if x >> bit & 1)
    return KripkeModel(tuple(range(n)), agents, rels, tuple(range(len(profiles))), interp, preds)


def valid_bounded(premises: Sequence[Formula], goal: Formula, fc: FrameClass = FrameClass.T,
                  max_worlds: int = 2, max_domain: int = 2, *, preds=None, agents=None,
                  ceiling: int = DEFAULT_CEILING) -> Optional[PointedModel]:
    """First countermodel within the bounds, or ``None``.

    ``None`` is inconclusive in general: it only says no model with at most
    ``max_worlds`` worlds and ``max_domain`` elements refutes the inference.
    """
    if max_worlds < 1 or max_domain < 1:
        raise ValueError("bounds must be >= 1")
    fc = FrameClass(fc)
    preds, agents = _symbols(premises, goal, preds, agents)
    work = sum(len(_relations(n, fc)) ** len(agents) * (1 << n * len(preds))
               for n in range(1, max_worlds + 1))
    if work > ceiling:
        raise ResourceLimitError(f"{work} frame profiles exceed the ceiling {ceiling}")
    universals = [p for p in premises if p.is_universal]
    existentials = [p for p in premises if not p.is_universal]
    for n, rels in enumerate_frames(agents, max_worlds, fc):
        um = _universal_model(n, rels, preds, agents)
        full = um.full
        for w in range(n):
            ok = full
            for phi in universals:
                ok &= (full ^ um.masks(phi.subject)[w]) | um.masks(phi.predicate)[w]
            a, b = um.masks(goal.subject)[w], um.masks(goal.predicate)[w]
            reqs = []
            if goal.is_universal:
                reqs.append(a & ~b & full)
            else:
                ok &= full ^ (a & b)
            reqs = [ok & r for r in reqs]
            for phi in existentials:
                reqs.append(ok & um.masks(phi.subject)[w] & um.masks(phi.predicate)[w])
            if not reqs:
                reqs.append(ok)
            if any(r == 0 for r in reqs):
                continue
            chosen = _cover(reqs, ok, max_domain)
            if chosen is None:
                continue
            m = _materialise(n, rels, preds, agents, chosen)
            pm = PointedModel(m, w)
            assert all(satisfies(pm, p) for p in premises) and not satisfies(pm, goal)
            return pm
    return None


# --------------------------------------------------------------------------
# model files

def parse_model(text: str) -> PointedModel:
    """Read the line-based model format; ``#`` starts a comment."""
    worlds = agents = domain = None
    preds: list[str] = []
    rels: dict[str, set] = {}
    interp: dict[tuple, frozenset] = {}
    point = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelError(f"line {lineno}: missing ':'")
        head, items = head.strip(), rest.split()
        if head == "worlds":
            worlds = items
        elif head == "agents":
            agents = items
        elif head == "domain":
            domain = items
        elif head == "preds":
            preds.extend(items)
        elif head == "point":
            if len(items) != 1:
                raise ModelError(f"line {lineno}: point takes one world")
            point = items[0]
        elif head.startswith("rel "):
            a = head[4:].strip()
            if agents is None or a not in agents:
                raise UndeclaredSymbol(f"line {lineno}: undeclared agent {a!r}")
            pairs = rels.setdefault(a, set())
            for it in items:
                u, gt, v = it.partition(">")
                if not gt:
                    raise ModelError(f"line {lineno}: bad edge {it!r}")
                pairs.add((u, v))
        elif head.startswith("pred "):
            p, at, w = head[5:].partition("@")
            p, w = p.strip(), w.strip()
            if not at:
                raise ModelError(f"line {lineno}: expected 'pred P @ w'")
            if p not in preds:
                preds.append(p)
            interp[(w, p)] = frozenset(items)
        else:
            raise ModelError(f"line {lineno}: unknown field {head!r}")
    if worlds is None or domain is None:
        raise ModelError("model needs 'worlds:' and 'domain:' lines")
    m = KripkeModel(tuple(worlds), tuple(agents or ()), rels, tuple(domain), interp, tuple(preds))
    return PointedModel(m, point if point is not None else m.worlds[0])


def format_model(pm: PointedModel) -> str:
    m = pm.model
    lines = [
        "worlds: " + " ".join(map(str, m.worlds)),
        "agents: " + " ".join(m.agents),
        "domain: " + " ".join(map(str, m.domain)),
        "preds: " + " ".join(m.preds),
    ]
    for a in m.agents:
        edges = sorted(m.relations.get(a, ()), key=lambda e: (m.worlds.index(e[0]), m.worlds.index(e[1])))
        lines.append(f"rel {a}: " + " ".join(f"{u}>{v}" for u, v in edges))
    for w in m.worlds:
        for p in m.preds:
            ext = term_extension(m, w, Atom(p))
            if ext:
                elems = sorted(ext, key=m.domain.index)
                lines.append(f"pred {p} @ {w}: " + " ".join(map(str, elems)))
    lines.append(f"point: {pm.world}")
    return "\n".join(lines) + "\n"
