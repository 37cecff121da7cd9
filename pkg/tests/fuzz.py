"""Soundness fuzz driver shared by the unit and acceptance tests."""

from __future__ import annotations

import random
from dataclasses import dataclass

from episyl.calculus import System
from episyl.semantics import FrameClass, enumerate_models

from proofgen import ProofGen

PREDS = ("A", "B")
AGENTS = ("i", "j")


@dataclass
class FuzzReport:
    system: System
    proofs: int = 0
    models_checked: int = 0
    vacuous: int = 0  # judgements whose premises no sampled model satisfied
    violations: list = None

    def __post_init__(self):
        self.violations = []


def model_pool(system: System):
    """Every pointed model of the system's frame class within 2 worlds / 2 elements."""
    system = System(system)
    if system is System.S_AS:
        models = enumerate_models(PREDS, (), 1, 2, FrameClass.T)
    elif system is System.S_EAS:
        models = enumerate_models(PREDS, AGENTS[:1], 2, 2, FrameClass.T)
    else:
        models = enumerate_models(PREDS, AGENTS, 2, 2, system.frame)
    return [(m, w) for m in models for w in m.worlds]


def soundness_fuzz(system: System, n_proofs=1000, n_models=200, max_height=5, seed=0,
                   max_draws=5000) -> FuzzReport:
    system = System(system)
    gen = ProofGen(system, PREDS, AGENTS, seed=seed)
    rng = random.Random(seed + 1)
    pool = model_pool(system)
    report = FuzzReport(system)
    while report.proofs < n_proofs:
        drawn = gen.sample(max_height)
        if drawn is None:
            continue
        proof, j = drawn
        report.proofs += 1
        found = 0
        for _ in range(max_draws):
            m, w = pool[rng.randrange(len(pool))]
            if all(m.holds(w, p) for p in j.premises):
                found += 1
                if not m.holds(w, j.conclusion):
                    report.violations.append((j, m, w))
                if found == n_models:
                    break
        report.models_checked += found
        report.vacuous += found == 0
    return report
