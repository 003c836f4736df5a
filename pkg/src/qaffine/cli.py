"""Batch driver: verify relation families, straighten expressions, list the catalogue.

Exit codes: 0 all verdicts pass, 1 some relation fails, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .algebra import RULESETS, Algebra, parse_element, render_element, straighten
from .dynkin import CartanDatum, DynkinError, cartan, load_config, parse_orientation
from .fock import (FockRep, Mutation, RepConfig, default_weights, verify_body,
                   verify_instance, verify_renormalized)
from .heisenberg import pq_oracle_suite
from .laurent import qpow
from .presentations import (DEFAULT_WINDOW, PresentationError, Window, enumerate_instances,
                            get_family, manifest, resolve)

WORKERS_ENV = "QAFFINE_WORKERS"
PQ_SUITE = "pq-oracle"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunSpec:
    datum: CartanDatum
    level: int = 1
    truncation: int = 8
    suite: tuple[str, ...] = ()
    window: Window = DEFAULT_WINDOW
    out: str | None = None
    mutate: bool = False
    workers: int = 1
    config_path: str | None = None
    families: tuple[str, ...] = field(default=())


# run assembly -----------------------------------------------------------------

def parse_window(text: str, base: Window = DEFAULT_WINDOW) -> Window:
    """'lo:hi' or 'key=value,...' over the Window fields."""
    text = text.strip()
    if ":" in text and "=" not in text:
        lo, _, hi = text.partition(":")
        return replace(base, lo=int(lo), hi=int(hi))
    kw = {}
    for part in text.split(","):
        k, _, v = part.partition("=")
        k = k.strip()
        if k not in Window.__dataclass_fields__:
            raise ConfigError(f"unknown window field {k!r}")
        kw[k] = int(v)
    return replace(base, **kw)


def _datum(type_: str | None, rank: int | None, orientation: str | None, base: CartanDatum | None):
    if type_ is None and rank is None and orientation is None and base is not None:
        return base
    name = type_ or (base.kind if base else "A")
    if not name[-1].isdigit():
        name = f"{name}{rank if rank is not None else (base.rank if base else 1)}"
    elif rank is not None and int("".join(ch for ch in name if ch.isdigit())) != rank:
        raise ConfigError(f"type {name} contradicts rank {rank}")
    orient = parse_orientation(orientation) if orientation else (base.orientation if base else None)
    return cartan(name, orient)


def build_spec(args) -> RunSpec:
    try:
        cfg = load_config(args.config) if args.config else None
        datum = _datum(args.type, args.rank, args.orientation, cfg.datum if cfg else None)
        level = args.level if args.level is not None else (cfg.level if cfg else 1)
        trunc = args.N if args.N is not None else (cfg.truncation if cfg else 8)
    except (DynkinError, ValueError, KeyError, FileNotFoundError) as exc:
        raise ConfigError(str(exc)) from exc
    if level < 1:
        raise ConfigError("level must be a positive integer")
    if trunc < 1:
        raise ConfigError("truncation must be positive")
    window = parse_window(args.window) if args.window else DEFAULT_WINDOW
    suite = tuple(s.strip() for s in ",".join(args.suite).split(",") if s.strip())
    fams: list[str] = []
    for sel in suite:
        if sel == PQ_SUITE:
            continue
        try:
            fams.extend(f for f in resolve(sel) if f not in fams)
        except PresentationError as exc:
            raise ConfigError(str(exc)) from exc
    if fams and level != 1:
        raise ConfigError("the Fock evaluator is level one; use --suite pq-oracle at higher level")
    try:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer") from None
    return RunSpec(datum, level, trunc, suite, window, args.out, args.mutate, max(1, workers),
                   args.config, tuple(fams))


# verification -----------------------------------------------------------------

MUTATION_FACTOR = qpow(1)


def _cli_mutation(fid: str) -> Mutation:
    return Mutation("first term times q", fid, lambda w, c: True, MUTATION_FACTOR)


def _check(rep: FockRep, fid: str, inst, mutate: bool):
    if mutate:
        if inst.claim is not None or len(inst.body.terms) < 2:
            return None
        return verify_body(rep, _cli_mutation(fid).apply(inst.body))
    if fid.startswith("renorm."):
        return verify_renormalized(rep, inst)
    return verify_instance(rep, inst)


def run_family(spec: RunSpec, fid: str) -> list[dict]:
    rep = FockRep(RepConfig(datum=spec.datum, truncation=spec.truncation))
    alg = Algebra(spec.datum, 1)
    recs = []
    for inst in enumerate_instances(fid, alg, spec.window, default_weights(rep)):
        v = _check(rep, fid, inst, spec.mutate)
        if v is None:
            continue
        rec = {"kind": "instance", "family": fid, "instance": inst.describe(),
               "weight": str(inst.weight)}
        rec.update(v.as_dict())
        recs.append(rec)
    return recs


def run_pq(spec: RunSpec) -> list[dict]:
    return [{"kind": "pq-oracle", "level": spec.level, "N": spec.truncation, **r}
            for r in pq_oracle_suite(spec.datum, spec.level, spec.truncation)]


def cmd_verify(spec: RunSpec) -> tuple[int, list[dict]]:
    t0 = time.perf_counter()
    recs: list[dict] = []
    if PQ_SUITE in spec.suite:
        recs.extend(run_pq(spec))
    if spec.workers > 1 and len(spec.families) > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            chunks = list(pool.map(run_family, [spec] * len(spec.families), spec.families))
    else:
        chunks = [run_family(spec, f) for f in spec.families]
    for chunk in chunks:
        recs.extend(chunk)
    per_family = {}
    for f, chunk in zip(spec.families, chunks):
        per_family[f] = {"instances": len(chunk), "failures": sum(not r["ok"] for r in chunk),
                         "active": sum(bool(r.get("active")) for r in chunk),
                         "expected": get_family(f).expected}
    failures = sum(not r["ok"] for r in recs)
    summary = {"kind": "summary", "type": f"{spec.datum.kind}{spec.datum.rank}",
               "orientation": sorted(list(e) for e in spec.datum.orientation),
               "level": spec.level, "N": spec.truncation, "suite": list(spec.suite),
               "mutate": spec.mutate, "records": len(recs), "failures": failures,
               "families": per_family, "ok": failures == 0 and bool(recs),
               "seconds": round(time.perf_counter() - t0, 3)}
    recs.append(summary)
    return (0 if summary["ok"] else 1), recs


def _emit(recs: list[dict], out: str | None, stream) -> None:
    text = "".join(json.dumps(r, sort_keys=True, default=str) + "\n" for r in recs)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        stream.write(json.dumps(recs[-1], sort_keys=True, default=str) + "\n")
    else:
        stream.write(text)


# normalize ------------------------------------------------------------------------

def _parse_term(alg: Algebra, text: str):
    """A product of segments 'letters 1[weight]', with an optional leading coefficient."""
    from .algebra import multiply
    text = text.strip()
    coef = None
    if text.startswith("("):
        depth = 0
        for k, ch in enumerate(text):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                coef, text = text[:k + 1], text[k + 1:].strip()
                break
    segs, buf = [], ""
    for tok in text.split():
        buf = f"{buf} {tok}".strip()
        if tok.startswith("1["):
            segs.append(buf)
            buf = ""
    if buf or not segs:
        raise ValueError(f"every factor must end in an idempotent 1[...]: {text!r}")
    out = parse_element(alg, f"{coef} {segs[0]}" if coef else segs[0])
    for seg in segs[1:]:
        out = multiply(out, parse_element(alg, seg))
    return out


def parse_expression(alg: Algebra, text: str):
    """Sum of terms separated by ' + ' at bracket depth zero."""
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        depth += ch in "(["
        depth -= ch in ")]"
        if ch == "+" and depth == 0:
            parts.append(text[start:k])
            start = k + 1
    parts.append(text[start:])
    out = alg.zero()
    for p in parts:
        if p.strip() != "0":
            out = out + _parse_term(alg, p)
    return out


def cmd_normalize(alg: Algebra, text: str, rules: str, budget: int) -> tuple[str, bool]:
    res = straighten(parse_expression(alg, text), rules, budget)
    return render_element(res.element), res.normalized


# entry point ------------------------------------------------------------------

def _add_datum_flags(p):
    p.add_argument("--config", help="key-value config file ([datum] and [run] sections)")
    p.add_argument("--type", help="Cartan type, e.g. A1 or A with --rank")
    p.add_argument("--rank", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--orientation", help="edges such as '1->2,3->2'")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qaffine", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="evaluate relation families on the Fock module")
    _add_datum_flags(v)
    v.add_argument("-N", type=int, help="truncation degree (default 8)")
    v.add_argument("--suite", action="append", default=[],
                   help=f"family ids or prefixes, '<prefix>:holding', 'all', or '{PQ_SUITE}'")
    v.add_argument("--window", help="index window, 'lo:hi' or 'key=value,...'")
    v.add_argument("--out", help="write JSON lines here; the summary still goes to stdout")
    v.add_argument("--mutate", action="store_true", help="scale one coefficient per instance by q")

    n = sub.add_parser("normalize", help="straighten an expression")
    _add_datum_flags(n)
    n.add_argument("expression")
    n.add_argument("--rules", default="reduced", choices=sorted(RULESETS))
    n.add_argument("--budget", type=int, default=100_000)

    m = sub.add_parser("manifest", help="print the family catalogue as JSON")
    m.add_argument("--out")
    return ap


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        if args.cmd == "manifest":
            text = json.dumps(manifest(), indent=2) + "\n"
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                stdout.write(text)
            return 0
        if args.cmd == "normalize":
            try:
                cfg = load_config(args.config) if args.config else None
                datum = _datum(args.type, args.rank, args.orientation, cfg.datum if cfg else None)
            except (DynkinError, ValueError, FileNotFoundError) as exc:
                raise ConfigError(str(exc)) from exc
            level = args.level or (cfg.level if cfg else 1)
            try:
                text, done = cmd_normalize(Algebra(datum, level), args.expression, args.rules, args.budget)
            except ValueError as exc:
                raise ConfigError(f"parse error: {exc}") from exc
            stdout.write(text + ("" if done else "  # budget exhausted, not normalized") + "\n")
            return 0 if done else 1
        if not args.suite:
            args.suite = ["all:holding"]
        spec = build_spec(args)
        code, recs = cmd_verify(spec)
        _emit(recs, spec.out, stdout)
        return code
    except (ConfigError, OSError) as exc:
        sys.stderr.write(f"qaffine: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
