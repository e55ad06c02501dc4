"""Command-line front end: ``negarith check|show-types|extract|eval|verify|bench``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Iterable, Optional

from .dialectica import tau
from .extraction import ExtractionError, InductionMode, Kind, Variant, assemble, extract, size_report
from .logic import ProofError, check_proof
from .sexpr import Document, ParseError, parse_document, show_formula, show_term
from .terms import FuelExhausted, KernelError, free_var_types, infer_type
from .runtime.bench import BENCH_VARIANTS, bench_average, bench_induction
from .runtime.corpus import corpus_dir, entry as corpus_entry
from .runtime.evaluator import EvalConfig, evaluate
from .runtime.model import FiniteModel, ModelError, enumerate_values
from .runtime.verify import Verifier

SCHEMA = 1
CSV_COLUMNS = ["entry", "variant", "mode", "n", "K", "tc_checks", "rec_unfolds",
               "beta_steps", "verdict"]


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output

def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


def emit(records: Iterable[dict], fmt: str, columns: Optional[list[str]] = None) -> None:
    records = list(records)
    out = sys.stdout
    if fmt == "json":
        for r in records:
            out.write(json.dumps({"schema": SCHEMA, **_jsonable(r)}, sort_keys=False) + "\n")
    elif fmt == "csv":
        cols = columns or list(dict.fromkeys(k for r in records for k in r))
        w = csv.DictWriter(out, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: _jsonable(r.get(k, "")) for k in cols})
    else:
        for r in records:
            r = {k: v for k, v in r.items() if v != ""}
            width = max((len(k) for k in r), default=0)
            for k, v in r.items():
                text = str(v)
                if "\n" in text:
                    out.write(f"{k}:\n{text}\n")
                else:
                    out.write(f"{k.ljust(width)}  {text}\n")
            if len(records) > 1:
                out.write("\n")


# --------------------------------------------------------------------------
# inputs

def resolve(path: str) -> Path:
    """A file path, or the name of a bundled corpus entry."""
    p = Path(path)
    if p.exists():
        return p
    bundled = corpus_dir() / f"{path}.naw"
    if bundled.exists():
        return bundled
    raise UsageError(f"no such file or corpus entry: {path}")


def load_document(path: str) -> tuple[str, Document]:
    p = resolve(path)
    return p.stem, parse_document(p.read_text())


def load_model(args) -> FiniteModel:
    model = FiniteModel.load(args.model) if getattr(args, "model", None) else FiniteModel()
    if getattr(args, "seed", None) is not None:
        model.seed = args.seed
    return model


def variant_of(args) -> Variant:
    return Variant(Kind(args.variant), InductionMode(args.induction), args.reversed)


def need_proof(doc: Document):
    if doc.proof is None:
        raise UsageError("expected a (proof ...) file")
    return doc.proof


# --------------------------------------------------------------------------
# commands

def cmd_check(args) -> int:
    name, doc = load_document(args.file)
    if doc.proof is None:
        ty = infer_type(doc.term, doc.free)
        emit([{"file": name, "status": "ok", "type": str(ty)}], args.out)
        return 0
    try:
        a = check_proof(doc.proof, doc.free)
    except ProofError as e:
        emit([{"file": name, "status": "error", "error": f"{type(e).__name__}: {e}"}], args.out)
        return 1
    emit([{"file": name, "status": "ok", "conclusion": show_formula(a)}], args.out)
    return 0


def cmd_show_types(args) -> int:
    name, doc = load_document(args.file)
    a = check_proof(need_proof(doc), doc.free)
    plain, marked = tau(a), tau(a, True)
    if args.out == "pretty":
        print(show_formula(a))
        print(f"quasilinear: tau+ = {plain.plus} ; tau- = {plain.minus} ; tau* = {plain.star}")
        print(f"marked: tau+ = {marked.plus} ; tau- = {marked.minus} ; tau* = {marked.star}"
              f" ; tau_marked = {marked.marked}")
        return 0
    rows = [{"file": name, "variant": v, "formula": show_formula(a), "plus": str(t.plus),
             "minus": str(t.minus), "star": str(t.star),
             "marked": "" if t.marked is None else str(t.marked)}
            for v, t in (("quasilinear", plain), ("marked", marked))]
    emit(rows, args.out)
    return 0


def cmd_extract(args) -> int:
    name, doc = load_document(args.file)
    proof = need_proof(doc)
    v = variant_of(args)
    res = extract(proof, v)
    asm = assemble(res)
    t = tau(res.formula, v.marked)
    row = {"file": name, "variant": v.name, "formula": show_formula(res.formula),
           "tau+": str(t.plus), "tau-": str(t.minus), **size_report(proof, res),
           "full": show_term(asm.full), "plus": show_term(asm.plus)}
    for u, t in asm.minus.items():
        row[f"minus[{u}]"] = show_term(t)
    emit([row], args.out)
    return 0


def cmd_eval(args) -> int:
    name, doc = load_document(args.file)
    model = load_model(args)
    cfg = EvalConfig(fuel=args.fuel)
    if doc.term is not None:
        value, stats = evaluate(doc.term, model, cfg)
        emit([{"file": name, "value": _show_value(value), **stats.as_dict()}], args.out)
        return 0
    # a proof: run its extracted witnesses at the challenge from the model
    v = variant_of(args)
    res = extract(need_proof(doc), v)
    asm = assemble(res)
    targets = {"plus": asm.plus, **{f"minus[{u}]": t for u, t in asm.minus.items()}}
    env, inputs = {}, {}
    for t in targets.values():
        inputs.update(free_var_types(t))
    for var, ty in inputs.items():
        if var in doc.free:
            continue
        b = model.binding(var, ty)
        env[var] = b if b is not None else enumerate_values(ty, model)[0]
    rows = []
    for label, t in targets.items():
        value, stats = evaluate(t, model, cfg, env)
        rows.append({"file": name, "variant": v.name, "witness": label,
                     "value": _show_value(value), **stats.as_dict()})
    emit(rows, args.out)
    return 0


def _show_value(v):
    if isinstance(v, tuple):
        return "(" + ", ".join(str(_show_value(x)) for x in v) + ")"
    if isinstance(v, str) and v.startswith("m"):
        return v[1:] if v != "mbot" else "bot"
    return v


def cmd_verify(args) -> int:
    name, doc = load_document(args.file)
    model = load_model(args)
    variants = [variant_of(args)] if args.variant != "both" else [
        Variant(Kind.QUASILINEAR, InductionMode(args.induction), args.reversed),
        Variant(Kind.MARKED, InductionMode(args.induction), args.reversed)]
    rows, failed, replay = [], False, []
    for v in variants:
        ver = Verifier(need_proof(doc), v, doc.free, EvalConfig(fuel=args.fuel))
        s = ver.run(model, args.budget)
        failed |= bool(s.failures)
        replay += [{"schema": SCHEMA, "file": name, **_jsonable(f.as_dict())} for f in s.failures]
        rows.append({"entry": name, "variant": v.kind.value,
                     "mode": v.induction.value + ("-reversed" if v.reversed else ""),
                     "n": "", "K": "", "instances": s.instances, "premise_held": s.premise_held,
                     "failures": len(s.failures), "tc_checks": "", "rec_unfolds": "",
                     "beta_steps": "", "verdict": s.verdict})
    emit(rows, args.out, CSV_COLUMNS if args.out == "csv" else None)
    if args.replay and replay:
        Path(args.replay).write_text("".join(json.dumps(r) + "\n" for r in replay))
    return 1 if failed else 0


def cmd_bench(args) -> int:
    e = corpus_entry(Path(args.entry).stem)
    modes = args.modes.split(",") if args.modes else list(BENCH_VARIANTS)
    for m in modes:
        if m not in BENCH_VARIANTS:
            raise UsageError(f"unknown mode {m!r}; choose from {', '.join(BENCH_VARIANTS)}")
    if args.trials:
        rows = [bench_average(e, args.n, args.trials, args.dist, args.seed or 0, BENCH_VARIANTS[m])
                for m in modes]
        emit(rows, args.out)
        return 0
    ks = [None if k in ("none", "") else int(k) for k in args.k.split(",")]
    rows = []
    for k in ks:
        for m in modes:
            r = bench_induction(e, args.n, k, BENCH_VARIANTS[m], cfg=EvalConfig(fuel=args.fuel))
            row = r.row(e.name)
            row["result"] = _show_value(r.value)
            rows.append(row)
    emit(rows, args.out, CSV_COLUMNS if args.out == "csv" else None)
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=["json", "csv", "pretty"], default="pretty")
    common.add_argument("--fuel", type=int, default=10 ** 7, help="evaluation step budget")

    def variant_flags(p, both=False):
        p.add_argument("--variant", choices=["quasilinear", "marked"] + (["both"] if both else []),
                       default="quasilinear")
        p.add_argument("--induction", choices=["naive", "simultaneous", "flagged"],
                       default="simultaneous")
        p.add_argument("--reversed", action="store_true",
                       help="prefer the first counterexample instead of the last")

    ap = argparse.ArgumentParser(prog="negarith", parents=[common],
                                 description="Proof checking and program extraction.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="type-check a proof or term file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("show-types", parents=[common], help="computational types of the conclusion")
    p.add_argument("file")
    p.set_defaults(fn=cmd_show_types)

    p = sub.add_parser("extract", parents=[common], help="print the extracted program")
    p.add_argument("file")
    variant_flags(p)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term, or a proof's witnesses")
    p.add_argument("file")
    p.add_argument("--model")
    p.add_argument("--seed", type=int)
    variant_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("verify", parents=[common], help="check soundness instance by instance")
    p.add_argument("file")
    p.add_argument("--model")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=1000, help="samples when not exhaustive")
    p.add_argument("--replay", help="write failing instances to this JSON-lines file")
    variant_flags(p, both=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="counter benchmarks on a search entry")
    p.add_argument("entry")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--k", default="none", help="comma-separated first counterexample positions")
    p.add_argument("--trials", type=int, default=0, help="average over random positions")
    p.add_argument("--dist", choices=["uniform", "geometric"], default="uniform")
    p.add_argument("--seed", type=int)
    p.add_argument("--modes", help=f"comma-separated subset of {','.join(BENCH_VARIANTS)}")
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ParseError, ModelError, KeyError, ValueError, OSError) as e:
        print(f"negarith: error: {e}", file=sys.stderr)
        return 2
    except (ProofError, ExtractionError, KernelError, FuelExhausted) as e:
        print(f"negarith: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
