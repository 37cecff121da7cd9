"""Command-line front end.

Problem files are line oriented::

    # comment
    system: T_NES
    frame: T
    premise: all A B
    premise: some C A
    goal: some C B
    max-depth: 12
    max-worlds: 2
    max-domain: 2
    expect: valid

Exit codes: 0 proved/true, 1 refuted/false, 3 unknown, 2 malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import calculus
from .calculus import Judgement, System, render
from .canonical import countermodel_family
from .search import (
    DecideResult, SearchBudget, _countermodel, decide, default_model_bounds, prove_bounded,
)
from .semantics import (
    FrameClass, ModelError, PointedModel, check_frame, format_model, parse_model, satisfies,
)
from .syntax import ParseError, formula_preds, parse_formula

__all__ = ["Problem", "ProblemError", "parse_problem", "load_problem", "main", "bundled_corpus"]


class ProblemError(ValueError):
    pass


@dataclass
class Problem:
    system: System
    frame: FrameClass
    premises: list
    goal: object
    budget: SearchBudget = field(default_factory=SearchBudget)
    model_bounds: Optional[tuple[int, int]] = None
    expect: Optional[str] = None
    name: str = ""

    @property
    def judgement(self) -> Judgement:
        return Judgement(tuple(self.premises), self.goal, self.system)

    def bounds(self) -> tuple[int, int]:
        if self.model_bounds is not None:
            return self.model_bounds
        preds = set().union(*(formula_preds(f) for f in self.premises + [self.goal]))
        return default_model_bounds(self.system, len(preds))


_INT_KEYS = ("max-depth", "max-worlds", "max-domain")


def parse_problem(text: str, name: str = "") -> Problem:
    fields: dict = {"premise": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip().lower(), value.strip()
        if not sep:
            raise ProblemError(f"line {lineno}: expected 'key: value'")
        try:
            if key == "premise":
                fields["premise"].append(parse_formula(value))
            elif key == "goal":
                fields["goal"] = parse_formula(value)
            elif key == "system":
                fields["system"] = System(value.upper())
            elif key == "frame":
                fields["frame"] = FrameClass(value.upper())
            elif key in _INT_KEYS:
                fields[key] = int(value)
                if fields[key] < 1:
                    raise ValueError("must be positive")
            elif key == "expect":
                if value not in ("valid", "invalid"):
                    raise ValueError("expected 'valid' or 'invalid'")
                fields["expect"] = value
            else:
                raise ProblemError(f"line {lineno}: unknown key {key!r}")
        except ParseError as exc:
            raise ProblemError(f"line {lineno}: {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, ProblemError):
                raise
            raise ProblemError(f"line {lineno}: bad {key!r}: {exc}") from exc
    if "goal" not in fields:
        raise ProblemError("missing 'goal:'")
    system = fields.get("system", System.T_NES)
    frame = fields.get("frame", system.frame)
    if system is not System.S_AS and frame is not system.frame:
        raise ProblemError(f"frame {frame.value} does not match system {system.value}")
    budget = SearchBudget(max_depth=fields.get("max-depth", SearchBudget.max_depth))
    bounds = None
    if "max-worlds" in fields or "max-domain" in fields:
        dw, dd = default_model_bounds(system, 3)
        bounds = (fields.get("max-worlds", dw), fields.get("max-domain", dd))
    problem = Problem(system, frame, fields["premise"], fields["goal"], budget, bounds,
                      fields.get("expect"), name)
    try:
        ok = problem.judgement.well_tiered()
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    if not ok:
        raise ProblemError(f"a sentence lies outside the language of {system.value}")
    return problem


def load_problem(path) -> Problem:
    path = Path(path)
    return parse_problem(path.read_text(), path.stem)


def bundled_corpus(name: str) -> Path:
    """Directory of a corpus shipped with the package ("assertoric", "derived", "mixed")."""
    return Path(str(resources.files("episyl") / "corpus" / name))


# --------------------------------------------------------------------------
# commands

def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text)


def _emit(result: DecideResult, args) -> None:
    if result.proof is not None:
        print(render(result.proof))
        _write(getattr(args, "emit_proof", None), calculus.dumps(result.proof) + "\n")
    if result.model is not None:
        print(format_model(result.model), end="")
        _write(getattr(args, "emit_model", None), format_model(result.model))


def cmd_check(args) -> int:
    pm = parse_model(Path(args.model).read_text())
    phi = parse_formula(args.formula)
    if args.frame and not check_frame(pm.model, FrameClass(args.frame.upper())):
        print(f"warning: model is not a {args.frame.upper()} frame", file=sys.stderr)
    value = satisfies(pm, phi)
    print("true" if value else "false")
    return 0 if value else 1


_BUDGET_FLAGS = ("max_depth", "max_formulas", "raa_candidates", "raa_nesting", "modal_increment")


def _budget(problem: Problem, args) -> SearchBudget:
    given = {k: getattr(args, k) for k in _BUDGET_FLAGS if getattr(args, k, None) is not None}
    return dataclasses.replace(problem.budget, **given)


def _bounds(problem: Problem, args) -> tuple[int, int]:
    w, d = problem.bounds()
    return (getattr(args, "max_worlds", None) or w, getattr(args, "max_domain", None) or d)


def cmd_prove(args) -> int:
    problem = load_problem(args.problem)
    proof = prove_bounded(problem.judgement, _budget(problem, args))
    if proof is None:
        print(f"UNKNOWN\nno proof within depth {_budget(problem, args).max_depth}")
        return 3
    result = DecideResult("PROVED", proof=proof)
    print("PROVED")
    _emit(result, args)
    return 0


def cmd_countermodel(args) -> int:
    problem = load_problem(args.problem)
    w, d = _bounds(problem, args)
    pm = _countermodel(problem.judgement, problem.frame, w, d)
    if pm is None:
        print(f"UNKNOWN\nno countermodel with <= {w} worlds, <= {d} elements")
        return 3
    print("REFUTED")
    _emit(DecideResult("REFUTED", model=pm), args)
    return 1


def cmd_decide(args) -> int:
    problem = load_problem(args.problem)
    result = decide(problem.judgement, problem.frame, _budget(problem, args),
                    _bounds(problem, args), jobs=args.jobs)
    print(result.verdict)
    if result.verdict == "UNKNOWN":
        print(result.detail)
    _emit(result, args)
    return result.exit_code


def cmd_corpus(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        named = bundled_corpus(args.dir)
        if not named.is_dir():
            raise ProblemError(f"no corpus directory {args.dir!r}")
        root = named
    files = sorted(root.glob("*.prob"))
    if not files:
        raise ProblemError(f"no .prob files in {root}")
    mismatches = 0
    counts: dict = {}
    print(f"{'problem':28} {'expected':9} {'outcome':9} {'time':>8}")
    for path in files:
        problem = load_problem(path)
        t0 = time.perf_counter()
        result = decide(problem.judgement, problem.frame, problem.budget, problem.bounds(), jobs=args.jobs)
        dt = time.perf_counter() - t0
        counts[result.verdict] = counts.get(result.verdict, 0) + 1
        want = {"valid": "PROVED", "invalid": "REFUTED"}.get(problem.expect)
        flag = ""
        if want is not None and result.verdict != want:
            mismatches += 1
            flag = "  MISMATCH"
        print(f"{path.stem:28} {problem.expect or '-':9} {result.verdict:9} {dt:7.2f}s{flag}")
    summary = ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
    print(f"{len(files)} problems: {summary}; {mismatches} mismatch(es)")
    return 1 if mismatches else 0


def cmd_appendix_demo(args) -> int:
    preds = [p.strip() for p in args.preds.split(",") if p.strip()]
    sigma = [parse_formula(s) for s in args.premise] if args.premise else [
        parse_formula("all C B"), parse_formula(f"some C (K_{args.agent} A)")]
    goal = parse_formula(args.goal or f"all A (K_{args.agent} B)")
    built = verified = refuting = 0
    first_refuter: Optional[PointedModel] = None
    for delta, report in countermodel_family(sigma, preds, args.agent):
        # universal links between distinct predicates tell the members apart
        label = "; ".join(str(f) for f in sorted(delta.sentences, key=str)
                          if f.is_universal and f.subject != f.predicate
                          and f.subject != getattr(f.predicate, "inner", None)) or "no universal links"
        if isinstance(report, Exception):
            print(f"skip  [{label}]  {report}")
            continue
        built += 1
        verified += report.satisfied
        falsifies = not satisfies(report.pointed, goal)
        refuting += falsifies
        if falsifies and first_refuter is None:
            first_refuter = report.pointed
        status = "ok  " if report.satisfied else "FAIL"
        print(f"{status}  [{label}]  goal {'false' if falsifies else 'true'}")
        if args.verbose:
            print(report.manifest())
    print(f"{built} model(s) built, {verified} satisfy the premises at w, {refuting} falsify {goal}")
    if first_refuter is not None:
        print(format_model(first_refuter), end="")
        _write(args.emit_model, format_model(first_refuter))
    return 0 if built and verified == built else 1


# --------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="episyl", description="Epistemic syllogistic prover and model checker.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate a sentence in a model file")
    c.add_argument("--model", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--frame", help="warn if the model is not in this frame class")
    c.set_defaults(func=cmd_check)

    for name, func, help_ in (("prove", cmd_prove, "search for a proof"),
                              ("countermodel", cmd_countermodel, "search for a countermodel"),
                              ("decide", cmd_decide, "run both searches")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("problem")
        for flag in _BUDGET_FLAGS:
            s.add_argument("--" + flag.replace("_", "-"), type=int, metavar="N")
        s.add_argument("--max-worlds", type=int, metavar="N")
        s.add_argument("--max-domain", type=int, metavar="N")
        s.add_argument("--emit-proof")
        s.add_argument("--emit-model")
        if name == "decide":
            s.add_argument("--jobs", type=int, default=1)
        s.set_defaults(func=func)

    c = sub.add_parser("corpus", help="decide every problem in a directory")
    c.add_argument("dir", help="directory, or a bundled corpus name")
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_corpus)

    c = sub.add_parser("appendix-demo", help="build the three-world countermodel family")
    c.add_argument("--preds", default="A,B,C")
    c.add_argument("--agent", default="k")
    c.add_argument("--premise", action="append", help="premise (repeatable); default: all C B, some C (K_k A)")
    c.add_argument("--goal", help="sentence to test against the family")
    c.add_argument("--emit-model")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_appendix_demo)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ProblemError, ModelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
