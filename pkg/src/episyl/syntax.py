"""Terms, sentences and their concrete text syntax.

A term is a unary chain built from a predicate atom with negation and
agent-indexed knowledge operators::

    g ::= A | (- g) | (K_i g)

A sentence is ``all g g`` or ``some g g``.  Top-level atoms may be written
without parentheses, compound terms always carry them.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

__all__ = [
    "Atom", "Neg", "Know", "Term", "Formula", "All", "Some", "Tier",
    "NnfTerm", "ParseError", "parse_formula", "parse_term", "print_formula",
    "print_term", "negate", "negate_assertoric", "check_tier", "nnf",
    "term_preds", "term_agents", "formula_preds", "formula_agents",
    "is_modal", "modal_depth", "term_size", "enumerate_terms", "enumerate_modal_terms", "subterms",
    "AGENT_RE", "PRED_RE", "DEFAULT_EAS_AGENT",
]

AGENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
PRED_RE = re.compile(r"[A-Z][a-zA-Z0-9_]*\Z")
DEFAULT_EAS_AGENT = "k"


@dataclass(frozen=True)
class Atom:
    pred: str

    def __post_init__(self):
        if not PRED_RE.match(self.pred):
            raise ValueError(f"bad predicate name {self.pred!r}")

    def __str__(self):
        return self.pred


@dataclass(frozen=True)
class Neg:
    inner: "Term"

    def __str__(self):
        return f"(- {self.inner})"


@dataclass(frozen=True)
class Know:
    agent: str
    inner: "Term"

    def __post_init__(self):
        if not AGENT_RE.match(self.agent):
            raise ValueError(f"bad agent name {self.agent!r}")

    def __str__(self):
        return f"(K_{self.agent} {self.inner})"


Term = Union[Atom, Neg, Know]


@dataclass(frozen=True)
class Formula:
    quantifier: str  # "all" | "some"
    subject: Term
    predicate: Term

    def __post_init__(self):
        if self.quantifier not in ("all", "some"):
            raise ValueError(f"bad quantifier {self.quantifier!r}")

    @property
    def is_universal(self) -> bool:
        return self.quantifier == "all"

    def __str__(self):
        return f"{self.quantifier} {self.subject} {self.predicate}"


def All(subject: Term, predicate: Term) -> Formula:
    return Formula("all", subject, predicate)


def Some(subject: Term, predicate: Term) -> Formula:
    return Formula("some", subject, predicate)


class Tier(Enum):
    AS = "AS"
    EAS = "EAS"
    NES = "NES"


# --------------------------------------------------------------------------
# printing and parsing

def print_term(g: Term) -> str:
    return str(g)


def print_formula(phi: Formula) -> str:
    return str(phi)


class ParseError(ValueError):
    """Raised on malformed input; carries the byte offset and expected tokens."""

    def __init__(self, text: str, offset: int, expected: Iterable[str]):
        self.text = text
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        shown = text[offset:offset + 12] or "end of input"
        super().__init__(
            f"syntax error at offset {offset} near {shown!r}: "
            f"expected one of {', '.join(self.expected)}"
        )


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(-)|K_([A-Za-z0-9_]*)|([A-Za-z][A-Za-z0-9_]*))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        if self.pos >= len(self.text):
            return None, self.pos
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            return ("bad", self.text[self.pos]), self.pos
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            return ("(", "("), start
        if m.group(2):
            return (")", ")"), start
        if m.group(3):
            return ("-", "-"), start
        if m.group(4) is not None:
            return ("K", m.group(4)), start
        return ("name", m.group(5)), start

    def _advance(self):
        m = _TOKEN.match(self.text, self.pos)
        self.pos = m.end()

    def expect_end(self):
        tok, at = self._peek()
        if tok is not None:
            raise ParseError(self.text, at, ["end of input"])

    def formula(self) -> Formula:
        tok, at = self._peek()
        if tok is None or tok[0] != "name" or tok[1] not in ("all", "some"):
            raise ParseError(self.text, at, ["all", "some"])
        self._advance()
        subject = self.term()
        predicate = self.term()
        return Formula(tok[1], subject, predicate)

    def term(self) -> Term:
        tok, at = self._peek()
        if tok is not None and tok[0] == "name" and PRED_RE.match(tok[1]):
            self._advance()
            return Atom(tok[1])
        if tok is None or tok[0] != "(":
            raise ParseError(self.text, at, ["PRED", "("])
        self._advance()
        tok, at = self._peek()
        if tok is not None and tok[0] == "-":
            self._advance()
            result: Term = Neg(self.term())
        elif tok is not None and tok[0] == "K":
            if not AGENT_RE.match(tok[1]):
                raise ParseError(self.text, at, ["K_AGENT"])
            self._advance()
            result = Know(tok[1], self.term())
        else:
            raise ParseError(self.text, at, ["-", "K_AGENT"])
        tok, at = self._peek()
        if tok is None or tok[0] != ")":
            raise ParseError(self.text, at, [")"])
        self._advance()
        return result


def parse_formula(text: str) -> Formula:
    """Parse ``all t g`` / ``some t g``; raises :class:`ParseError`."""
    p = _Parser(text)
    phi = p.formula()
    p.expect_end()
    return phi


def parse_term(text: str) -> Term:
    p = _Parser(text)
    g = p.term()
    p.expect_end()
    return g


# --------------------------------------------------------------------------
# negation and term structure

def negate(phi: Formula) -> Formula:
    """Contradictory of a sentence; pushes a syntactic ``-`` onto the predicate."""
    if phi.is_universal:
        return Some(phi.subject, Neg(phi.predicate))
    return All(phi.subject, Neg(phi.predicate))


def negate_assertoric(phi: Formula) -> Formula:
    """Contradictory that cancels a leading negation on the predicate.

    Used where the language only has literals in predicate position, so
    ``not (all A -B)`` is ``some A B`` rather than ``some A --B``.
    """
    q = "some" if phi.is_universal else "all"
    if isinstance(phi.predicate, Neg):
        return Formula(q, phi.subject, phi.predicate.inner)
    return Formula(q, phi.subject, Neg(phi.predicate))


def term_preds(g: Term) -> str:
    while not isinstance(g, Atom):
        g = g.inner
    return g.pred


def term_agents(g: Term) -> set[str]:
    out = set()
    while not isinstance(g, Atom):
        if isinstance(g, Know):
            out.add(g.agent)
        g = g.inner
    return out


def formula_preds(phi: Formula) -> set[str]:
    return {term_preds(phi.subject), term_preds(phi.predicate)}


def formula_agents(phi: Formula) -> set[str]:
    return term_agents(phi.subject) | term_agents(phi.predicate)


def is_modal(x: Union[Term, Formula]) -> bool:
    if isinstance(x, Formula):
        return is_modal(x.subject) or is_modal(x.predicate)
    return bool(term_agents(x))


def modal_depth(g: Term) -> int:
    n = 0
    while not isinstance(g, Atom):
        n += isinstance(g, Know)
        g = g.inner
    return n


def term_size(g: Term) -> int:
    """Number of constructors; an atom has size 1."""
    n = 1
    while not isinstance(g, Atom):
        n += 1
        g = g.inner
    return n


def subterms(g: Term) -> Iterator[Term]:
    yield g
    while not isinstance(g, Atom):
        g = g.inner
        yield g


def _is_literal(g: Term) -> bool:
    return isinstance(g, Atom) or (isinstance(g, Neg) and isinstance(g.inner, Atom))


def check_tier(phi: Formula, tier: Tier, agent: str | None = None) -> bool:
    """Whether ``phi`` belongs to the language of ``tier``.

    For EAS a single agent is allowed; pass ``agent`` to pin it, otherwise
    any one agent is accepted for the sentence.
    """
    tier = Tier(tier)
    if tier is Tier.NES:
        return True
    if not isinstance(phi.subject, Atom):
        return False
    g = phi.predicate
    if tier is Tier.AS:
        return _is_literal(g)
    if _is_literal(g):
        return True
    if isinstance(g, Know) and _is_literal(g.inner):
        return agent is None or g.agent == agent
    return False


# --------------------------------------------------------------------------
# negative normal form

@dataclass(frozen=True)
class NnfTerm:
    """Modal prefix of ``("box"|"dia", agent)`` steps ending in a signed atom."""
    steps: tuple[tuple[str, str], ...]
    positive: bool
    pred: str

    def __str__(self):
        prefix = "".join(("[]" if k == "box" else "<>") + f"{a} " for k, a in self.steps)
        return f"{prefix}{'+' if self.positive else '-'}{self.pred}"


def nnf(g: Term) -> NnfTerm:
    steps = []
    positive = True
    while not isinstance(g, Atom):
        if isinstance(g, Neg):
            positive = not positive
        else:
            steps.append(("box" if positive else "dia", g.agent))
        g = g.inner
    return NnfTerm(tuple(steps), positive, g.pred)


# --------------------------------------------------------------------------
# enumeration

def enumerate_terms(preds: Iterable[str], agents: Iterable[str], max_size: int) -> list[Term]:
    """All terms with at most ``max_size`` constructors, by size then text."""
    preds = sorted(preds)
    agents = sorted(agents)
    layer: list[Term] = [Atom(p) for p in preds]
    out = list(layer)
    for _ in range(max_size - 1):
        nxt: list[Term] = []
        for g in layer:
            nxt.append(Neg(g))
            nxt.extend(Know(a, g) for a in agents)
        nxt.sort(key=str)
        out.extend(nxt)
        layer = nxt
    return out


def enumerate_modal_terms(preds: Iterable[str], agents: Iterable[str], max_modal_depth: int) -> list[Term]:
    """Terms up to a modal depth with at most one negation at each position."""
    out = []
    for p in sorted(preds):
        for d in range(max_modal_depth + 1):
            for ags in itertools.product(sorted(agents), repeat=d):
                for signs in itertools.product((False, True), repeat=d + 1):
                    g: Term = Atom(p)
                    if signs[0]:
                        g = Neg(g)
                    for a, s in zip(reversed(ags), signs[1:]):
                        g = Know(a, g)
                        if s:
                            g = Neg(g)
                    out.append(g)
    return out
