"""Command-line interface. Output is ``key=value`` lines on stdout.

Elements and locations are 1-based on the command line and in files.
Exit codes: 0 ok, 1 failed/refuted, 2 parse error, 3 retries exhausted,
4 budget exceeded, 5 matching infeasible, 6 inconclusive, 7 wrong strategy.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import boolfunc as bf
from . import kernels
from .config import Budget, default_budget, parse_budget
from .errors import (BudgetExceeded, FormatError, Inconclusive, MatchingInfeasible,
                     RetriesExhausted, SetTooLarge, WrongStrategy)
from .fileformats import (memory_to_text, parse_memory, parse_scheme, parse_witness,
                          probe_map_to_text, read_text, scheme_fingerprint, scheme_to_text,
                          witness_to_text, write_text)
from .lowerlab import Layout, Verdict, check_witness, find_witness, min_space_search
from .schemes import (build_adaptive_scheme, build_nonadaptive_scheme, characteristic_scheme,
                      grid_scheme_n1, table_hex, verify_scheme)

EXIT_CODES = {
    FormatError: 2,
    RetriesExhausted: 3,
    BudgetExceeded: 4,
    MatchingInfeasible: 5,
    Inconclusive: 6,
    WrongStrategy: 7,
}


def emit(out, **pairs):
    for key, val in pairs.items():
        print(f"{key}={val}", file=out)


def _budget(args) -> Budget:
    budget = default_budget()
    if getattr(args, "budget", None):
        budget = parse_budget(args.budget, budget)
    return budget


def _elements(tokens, m) -> set[int]:
    out = set()
    for tok in tokens:
        for part in str(tok).split(","):
            if part:
                u = int(part)
                if not 1 <= u <= m:
                    raise FormatError(f"element {u} outside [1, {m}]")
                out.add(u - 1)
    return out


def _hex_table(text: str, t: int) -> int:
    try:
        table = int(text, 16)
    except ValueError:
        raise FormatError(f"malformed hex function {text!r}") from None
    if table >> (1 << t):
        raise FormatError(f"function {text} too wide for t={t}")
    return table


def _load_scheme(path):
    sch = parse_scheme(read_text(path))
    if isinstance(sch, tuple):
        raise FormatError("expected a scheme, got a probe map")
    return sch


# ----------------------------------------------------------------- commands

def cmd_classify(args, out):
    if args.all:
        for fc in bf.all_classes():
            emit(out, class_id=fc.class_id, canonical=bf.to_hex(fc.canonical_table),
                 representative=bf.to_hex(fc.representative), name=fc.name,
                 strategy=fc.strategy.value, class_size=fc.class_size,
                 height=bf.decision_tree_height(fc.canonical_table))
        return 0
    if args.function is None:
        raise FormatError("give a function (two hex digits) or --all")
    try:
        table = bf.parse_hex(args.function)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    fc = bf.classify(table)
    emit(out, function=bf.to_hex(table), class_id=fc.class_id,
         canonical=bf.to_hex(fc.canonical_table), name=fc.name, strategy=fc.strategy.value,
         class_size=fc.class_size, height=bf.decision_tree_height(table))
    return 0


def cmd_build(args, out):
    budget = _budget(args)
    if args.kind == "grid":
        sch = grid_scheme_n1(args.m)
    elif args.kind == "characteristic":
        sch = characteristic_scheme(args.m)
    elif args.kind == "nonadaptive":
        sch = build_nonadaptive_scheme(args.m, args.n, args.t, args.s, args.seed,
                                       args.max_retries, budget)
    else:
        sch = build_adaptive_scheme(args.m, args.n, args.t, args.s, args.seed,
                                    args.max_retries, budget)
    text = scheme_to_text(sch)
    if args.out:
        write_text(args.out, text)
    rep = sch.inner.report if args.kind == "adaptive" else sch.report
    emit(out, kind=args.kind, m=sch.m, n=sch.n, space=sch.memory_length,
         fingerprint=scheme_fingerprint(sch))
    if args.kind == "adaptive":
        emit(out, t1=sch.inner.t1, t2=sch.inner.t2, s=sch.inner.s)
    else:
        emit(out, t=sch.t, s=sch.s)
    if rep is not None:
        emit(out, retries=rep.retries)
    if not args.out:
        out.write(text)
    return 0


def cmd_encode(args, out):
    sch = _load_scheme(args.scheme)
    S = _elements(args.elements, sch.m)
    if len(S) > sch.n:
        raise SetTooLarge(f"|S| = {len(S)} exceeds n = {sch.n}")
    mem = sch.encode(S)
    text = memory_to_text(mem, scheme_fingerprint(sch))
    if args.out:
        write_text(args.out, text)
        emit(out, length=len(mem), ones=int(mem.bits.sum()))
    else:
        out.write(text)
    return 0


def cmd_query(args, out):
    sch = _load_scheme(args.scheme)
    mem, fp = parse_memory(read_text(args.memory))
    if fp != scheme_fingerprint(sch):
        raise FormatError("memory was written for a different scheme")
    if len(mem) != sch.memory_length:
        raise FormatError("memory length does not match the scheme")
    u = _elements([args.element], sch.m).pop()
    emit(out, element=u + 1, answer=sch.query(mem, u))
    return 0


def cmd_verify(args, out):
    sch = _load_scheme(args.scheme)
    rep = verify_scheme(sch, args.n_check, _budget(args))
    if rep.ok:
        emit(out, result="pass", sets_checked=rep.sets_checked)
        return 0
    emit(out, result="fail", sets_checked=rep.sets_checked,
         failing_set=",".join(str(u + 1) for u in rep.failing_set),
         failing_element="" if rep.failing_element is None else rep.failing_element + 1,
         reason=rep.reason)
    return 1


def cmd_search(args, out):
    budget = _budget(args)
    layout = Layout(args.layout)
    if args.all_functions:
        best = None
        for table in range(1 << (1 << args.t)):
            res = min_space_search(args.m, args.n, args.t, table, layout, args.s_max, budget)
            emit(out, function=table_hex(table, args.t), s="none" if res is None else res.s)
            if res is not None and (best is None or res.s < best.s):
                best = res
    else:
        table = None
        if args.function is not None:
            table = _hex_table(args.function, args.t)
        best = min_space_search(args.m, args.n, args.t, table, layout, args.s_max, budget)
    if best is None:
        emit(out, min_s="none")
        return 1
    emit(out, min_s=best.s, function=table_hex(best.table, args.t))
    if args.out:
        write_text(args.out, probe_map_to_text(best.probe_map, best.table))
    return 0


def cmd_witness(args, out):
    parsed = parse_scheme(read_text(args.map))
    if not isinstance(parsed, tuple):
        raise FormatError("expected a probe-map file")
    pm, file_table = parsed
    table = _hex_table(args.function, 3) if args.function else file_table
    if table is None:
        raise FormatError("no query function given")
    fc = bf.classify(table)
    w = find_witness(pm, table, args.n, _budget(args))
    emit(out, function=bf.to_hex(table), strategy=fc.strategy.value)
    if w is None:
        emit(out, witness="none")
        return 0
    emit(out, witness=w.kind.value, s0=",".join(str(u + 1) for u in sorted(w.s0)),
         s1=",".join(str(u + 1) for u in sorted(w.s1)))
    if args.out:
        write_text(args.out, witness_to_text(w, pm))
    return 0


def cmd_check(args, out):
    w, pm = parse_witness(read_text(args.witness))
    verdict = check_witness(pm, w, _budget(args))
    emit(out, witness=w.kind.value, verdict=verdict.value)
    return 0 if verdict is Verdict.CONFIRMED else 1


def cmd_bench(args, out):
    """Time construction, encoding, querying and the exhaustive kernels on
    every available backend and write CSV rows."""
    rows = []
    saved = kernels.backend()
    sizes = [16, 32] if args.quick else [16, 32, 64, 128]
    try:
        for name in sorted(kernels.BACKENDS):
            kernels.set_backend(name)
            # warm up compiled kernels so timings exclude compilation
            verify_scheme(grid_scheme_n1(4))
            min_space_search(2, 1, 1, 0b10)
            for m in sizes:
                sch = grid_scheme_n1(m)
                t0 = time.perf_counter()
                rep = verify_scheme(sch)
                rows.append((name, "grid_verify", m, time.perf_counter() - t0, sch.memory_length, rep.ok))
            for m in ([10, 12] if args.quick else [10, 12, 14]):
                t0 = time.perf_counter()
                sch = build_nonadaptive_scheme(m, 1, 5, seed=args.seed)
                rows.append((name, "build_nonadaptive", m, time.perf_counter() - t0, sch.memory_length, True))
                t0 = time.perf_counter()
                rep = verify_scheme(sch)
                rows.append((name, "verify_nonadaptive", m, time.perf_counter() - t0, sch.memory_length, rep.ok))
            t0 = time.perf_counter()
            res = min_space_search(4, 2, 2, None)
            rows.append((name, "min_space_search_4_2_2", 4, time.perf_counter() - t0, res.s, True))
            t0 = time.perf_counter()
            res = min_space_search(3, 1, 3, bf.MAJ)
            rows.append((name, "min_space_search_3_1_3_maj", 3, time.perf_counter() - t0, res.s, True))
            from .lowerlab import ProbeMap, find_memory
            for bits in ([16, 20] if args.quick else [16, 20, 22]):
                pm = ProbeMap(bits + 1, bits, np.array([[i, (i + 1) % bits, (i + 2) % bits]
                                                       for i in range(bits)] + [[0, 1, 2]]),
                              Layout.SINGLE_ARRAY)
                t0 = time.perf_counter()
                # duplicate triple: no memory separates the last two elements
                mem = find_memory(pm, 0x96, {bits}, set(range(bits)), Budget(bits=24))
                rows.append((name, "scan_memories", bits, time.perf_counter() - t0, bits, mem is None))
    finally:
        kernels.set_backend(saved)
    target = open(args.out, "w", newline="") if args.out else out
    try:
        writer = csv.writer(target)
        writer.writerow(["backend", "operation", "size", "seconds", "space", "ok"])
        for r in rows:
            writer.writerow([r[0], r[1], r[2], f"{r[3]:.6f}", r[4], r[5]])
    finally:
        if args.out:
            target.close()
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bitprobe", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--budget", help="enumeration budget, e.g. 'bits=20,subsets=100000'")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="equivalence class and prover of a function")
    c.add_argument("function", nargs="?")
    c.add_argument("--all", action="store_true")

    b = sub.add_parser("build", help="construct a scheme")
    b.add_argument("--kind", choices=["nonadaptive", "adaptive", "grid", "characteristic"],
                   default="nonadaptive")
    b.add_argument("-m", type=int, required=True)
    b.add_argument("-n", type=int, default=1)
    b.add_argument("-t", type=int, default=3)
    b.add_argument("-s", type=int, default=None, help="block size (default: size heuristic)")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--max-retries", type=int, default=1000)
    b.add_argument("--out")

    e = sub.add_parser("encode", help="encode a set into a memory file")
    e.add_argument("scheme")
    e.add_argument("elements", nargs="*")
    e.add_argument("--out")

    q = sub.add_parser("query", help="answer one membership query")
    q.add_argument("scheme")
    q.add_argument("memory")
    q.add_argument("element")

    v = sub.add_parser("verify", help="exhaustively verify a scheme")
    v.add_argument("scheme")
    v.add_argument("--n-check", type=int, default=None)

    s = sub.add_parser("search", help="exhaustive minimum-space search")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-t", type=int, required=True)
    s.add_argument("--function", "--fn", dest="function")
    s.add_argument("--all-functions", action="store_true")
    s.add_argument("--layout", choices=[l.value for l in Layout], default="single")
    s.add_argument("--s-max", type=int, default=None)
    s.add_argument("--out")

    w = sub.add_parser("witness", help="find an impossibility witness for a probe map")
    w.add_argument("map")
    w.add_argument("--function", "--fn", dest="function")
    w.add_argument("-n", type=int, required=True)
    w.add_argument("--out")

    k = sub.add_parser("check", help="independently check a witness file")
    k.add_argument("witness")

    h = sub.add_parser("bench", help="timing sweep over both kernel backends (CSV)")
    h.add_argument("--out")
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--quick", action="store_true")
    return p


COMMANDS = {
    "classify": cmd_classify, "build": cmd_build, "encode": cmd_encode, "query": cmd_query,
    "verify": cmd_verify, "search": cmd_search, "witness": cmd_witness, "check": cmd_check,
    "bench": cmd_bench,
}


def _apply_config(parser, argv):
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        try:
            defaults = json.loads(Path(pre.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read config: {exc}") from None
        for action in parser._subparsers._group_actions[0].choices.values():
            action.set_defaults(**{k.replace("-", "_"): v for k, v in defaults.items()})
        parser.set_defaults(**{k: v for k, v in defaults.items() if k == "budget"})


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except tuple(EXIT_CODES) as exc:
        code = next(c for cls, c in EXIT_CODES.items() if isinstance(exc, cls))
        print(f"error={exc}", file=sys.stderr)
        if isinstance(exc, FormatError) and exc.line is not None:
            print(f"line={exc.line}", file=sys.stderr)
        if isinstance(exc, MatchingInfeasible):
            print("certificate=" + ",".join(str(u + 1) for u in sorted(exc.certificate)),
                  file=sys.stderr)
        return code
    except (SetTooLarge, ValueError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error={exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
