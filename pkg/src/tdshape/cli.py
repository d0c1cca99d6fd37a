"""Command-line front end: ``tdshape <command> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors (bad flags or inputs the core rejects).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field as dc_field
from math import comb

from . import models, reduction, tensor, words
from .errors import TdShapeError
from .exactla import format_scalar, matrix_sum, parse_field
from .sequences import default_pair

FORMATS = ("text", "json", "csv")


@dataclass
class Report:
    data: dict = dc_field(default_factory=dict)
    text: str | None = None
    rows: list | None = None  # first row is the header
    ok: bool = True


def emit(report, fmt: str = "text") -> str:
    """Render a report; identical input gives identical output."""
    if isinstance(report, dict):
        report = Report(report)
    if fmt == "json":
        return json.dumps(report.data, separators=(",", ":"))
    if fmt == "csv":
        rows = report.rows
        if rows is None:
            rows = [["key", "value"]] + [[k, json.dumps(v, separators=(",", ":"))
                                          if isinstance(v, (dict, list)) else v]
                                         for k, v in report.data.items()]
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue().rstrip("\n")
    if report.text is not None:
        return report.text
    if not report.data:
        return "{}"
    return "\n".join(f"{k}: {v}" for k, v in report.data.items())


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _check_block(d, s, t):
    for name, v in (("s", s), ("t", t)):
        if not 0 <= v <= d:
            raise TdShapeError(f"--{name} must lie in 0..{d}")


def cmd_tables(a) -> Report:
    _check_block(a.d, a.s, a.t)
    kinds = ["zigzag", "sign", "weight"] if a.kind == "all" else [a.kind]
    data = {"d": a.d, "s": a.s, "t": a.t, "tables": {}}
    texts = []
    for kind in kinds:
        cells = tensor.table_cells(a.d, a.s, a.t, kind)
        data["tables"][kind] = {f"{i},{j}": v for (i, j), v in sorted(cells.items())}
        texts.append(f"{kind} table, d={a.d}, (s,t)=({a.s},{a.t})\n"
                     + tensor.render_table(a.d, a.s, a.t, kind))
    rows_m, cols_m = tensor.table_margins(a.d, a.s, a.t)
    data["row_margin"], data["col_margin"] = list(rows_m), list(cols_m)
    rows = list(csv.reader(io.StringIO(tensor.table_csv(a.d, a.s, a.t))))
    return Report(data, "\n\n".join(texts), rows)


def cmd_census(a) -> Report:
    blocks = ([(a.s, a.t)] if a.s is not None and a.t is not None
              else [(s, t) for s in range(a.d + 1) for t in range(a.d + 1)])
    for s, t in blocks:
        _check_block(a.d, s, t)
    results = []
    for s, t in blocks:
        c = tensor.block_census(a.d, s, t)
        ordered = {k: c[k] for k in ("zigzag", "row_positive", "col_negative", "r_right",
                                     "r_left", "closed_form", "d", "s", "t")}
        ordered["match"] = tensor.census_matches(c)
        results.append(ordered)
    ok = all(r["match"] for r in results)
    lines = [f"({r['s']},{r['t']}): zigzag {r['zigzag']}, rRight {r['r_right']}, "
             f"rLeft {r['r_left']}, row+ {' '.join(map(str, r['row_positive']))}, "
             f"col- {' '.join(map(str, r['col_negative']))}; "
             f"{'matches' if r['match'] else 'MISMATCH'}" for r in results]
    rows = [["s", "t", "zigzag", "r_right", "r_left", "match"]] + [
        [r["s"], r["t"], r["zigzag"], r["r_right"], r["r_left"], r["match"]] for r in results]
    data = results[0] if len(results) == 1 else {"d": a.d, "blocks": results, "all_match": ok}
    return Report(data, "\n".join(lines), rows, ok)


def cmd_enumerate_words(a) -> Report:
    begin = words.parse_generator(a.begin)
    end = words.parse_generator(a.end) if a.end else None
    for g in (begin, end):
        if g is not None and g.index > a.d:
            raise TdShapeError(f"{g} is out of range for d={a.d}")
    found = (words.enumerate_zigzag_words if a.zigzag_only else words.enumerate_words)(
        a.d, a.n, begin, end)
    entries = []
    for w in found:
        zig = words.is_zigzag(w)
        peak = words.peak_index(w) if zig and not words.is_constant(w) else None
        entries.append({"word": str(w), "indices": list(w.indices), "zigzag": zig,
                        "peak": peak})
    lines = [f"{e['word']}  {'zigzag' if e['zigzag'] else '-'}"
             + (f"  p={e['peak']}" if e["peak"] is not None else "") for e in entries]
    nz = sum(e["zigzag"] for e in entries)
    lines.append(f"count {len(entries)}, zigzag {nz}")
    rows = [["word", "zigzag", "peak"]] + [[e["word"], e["zigzag"], e["peak"]] for e in entries]
    return Report({"d": a.d, "n": a.n, "count": len(entries), "zigzag_count": nz,
                   "words": entries}, "\n".join(lines), rows)


def cmd_lifting(a) -> Report:
    found = words.enumerate_nonredundant_lifting(a.d, a.s, start_starred=a.starred)
    entries = []
    round_trip = True
    for w in found:
        subset = sorted(words.subset_bijection(w))
        back = words.inverse_bijection(a.d, subset, a.starred)
        round_trip &= back == w
        entries.append({"word": str(w), "indices": list(w.indices), "subset": subset})
    expected = comb(a.d, a.s)
    ok = round_trip and len(entries) == expected
    lines = [f"{e['word']}  ->  {{{', '.join(map(str, e['subset']))}}}" for e in entries]
    lines.append(f"count {len(entries)} (C({a.d},{a.s}) = {expected})"
                 + ("" if round_trip else "; bijection round trip FAILED"))
    rows = [["word", "subset"]] + [[e["word"], " ".join(map(str, e["subset"]))] for e in entries]
    return Report({"d": a.d, "s": a.s, "count": len(entries), "binomial": expected,
                   "round_trip": round_trip, "words": entries}, "\n".join(lines), rows, ok)


def cmd_verify_basis(a) -> Report:
    pair = default_pair(a.family, a.d, a.field, q=a.q)
    results = []
    for s in range(a.d + 1):
        for t in range(a.d + 1):
            if a.rank in ("3", "both"):
                results.append({"rank": 3, **tensor.verify_block_basis3(s, t, pair.primal).to_json()})
            if a.rank in ("4", "both"):
                results.append({"rank": 4, **tensor.verify_block_basis4(a.d, s, t, pair).to_json()})
    ok = all(r["is_basis"] for r in results)
    bad = [f"rank {r['rank']} block ({r['s']},{r['t']})" for r in results if not r["is_basis"]]
    text = (f"{len(results)} blocks checked for d={a.d}, {a.family}: "
            + ("all bases" if ok else "FAILED at " + ", ".join(bad)))
    header = ["rank", "s", "t", "count_r", "rank_r", "count_zigzag", "rank_union", "is_basis"]
    rows = [header] + [[r[k] for k in header] for r in results]
    return Report({"d": a.d, "family": a.family, "ok": ok, "blocks": results}, text, rows, ok)


def cmd_reduce(a) -> Report:
    pair = default_pair(a.family, a.d, a.field, q=a.q)
    if a.word:
        w = words.Word.parse(a.d, a.word)
        if len(w) == 4:
            res = reduction.reduce_word4(*w.indices, pair, start_starred=w.start_starred)
        elif len(w) == 3:
            seq = pair.primal if w.start_starred else pair.dual
            res = reduction.reduce_word3(*w.indices, seq, start_starred=w.start_starred)
        else:
            raise TdShapeError("only words of length 3 or 4 can be reduced")
        data = res.to_json()
        text = f"{w} = " + (" + ".join(f"({format_scalar(c)}) {z}" for c, z in res.combination)
                            or "0")
        return Report(data, text)
    try:
        s, t, i, j = (int(x) for x in a.cell.split(","))
    except ValueError:
        raise TdShapeError("--cell expects s,t,i,j") from None
    for v in (s, t, i, j):
        if not 0 <= v <= a.d:
            raise TdShapeError(f"cell index {v} out of range 0..{a.d}")
    cert = reduction.reduce_cell(s, t, i, j, pair)
    ok = cert.verify(pair) and cert.weights_decrease()
    data = cert.to_json()
    data["verified"] = ok
    lines = [f"cell ({i},{j}) of block ({s},{t}), class {tensor.classify_cell(s, t, i, j, a.d)}"]
    for st in cert.steps:
        kids = ", ".join(f"({x},{y})" for x, y in st.children) or "none"
        lines.append(f"  step ({st.cell[0]},{st.cell[1]}) weight {st.weight} "
                     f"[{st.identity}] -> {kids}")
    zz = " + ".join(f"({format_scalar(c)})[{x},{y}]" for (x, y), c in sorted(cert.zigzag_part.items()))
    lines.append(f"zigzag part: {zz or '0'}")
    lines.append(f"R terms: {len(cert.r_part)}; {'verified' if ok else 'FAILED'}")
    rows = [["i", "j", "coef"]] + [[x, y, format_scalar(c)]
                                   for (x, y), c in sorted(cert.zigzag_part.items())]
    return Report(data, "\n".join(lines), rows, ok)


def _load_model(a):
    if a.input:
        with open(a.input, encoding="utf-8") as fh:
            return models.model_from_json(json.load(fh))
    if a.d is None:
        raise TdShapeError("model needs --d or --input")
    return models.build_model(a.family, a.d, a.field, q=a.q)


def _cross_check(m, cases: int, seed: int) -> dict:
    rng = random.Random(seed)
    d, failures = m.d, []
    for _ in range(cases):
        starred = rng.random() < 0.5
        idx = [rng.randint(0, d) for _ in range(4)]
        if rng.random() < 0.5:
            res = reduction.reduce_word4(*idx, m.eigen, start_starred=starred)
        else:
            seq = m.eigen.primal if starred else m.eigen.dual
            res = reduction.reduce_word3(idx[0], idx[1], idx[2], seq, start_starred=starred)
        lhs = models.word_image(m, res.word)
        rhs = matrix_sum([models.word_image(m, w).scale(c) for c, w in res.combination]) \
            if res.combination else lhs.scale(0)
        if lhs != rhs:
            failures.append(str(res.word))
    return {"cases": cases, "seed": seed, "failures": failures}


def cmd_model(a) -> Report:
    m = _load_model(a)
    head = f"{m.name}, d={m.d}"
    if a.action == "build":
        return Report(m.to_json(), head + "\n" + json.dumps(m.to_json()))
    if a.action == "validate":
        rep = models.validate_tdsystem(m)
        lines = [head] + [f"  {k}: {'pass' if v['pass'] else 'FAIL'}" for k, v in rep.checks.items()]
        rows = [["check", "pass"]] + [[k, v["pass"]] for k, v in rep.checks.items()]
        return Report(rep.to_json(), "\n".join(lines), rows, rep.ok)
    if a.action == "verify-span":
        results = []
        for n in range(1, a.n + 1):
            for b in [words.Generator(st, i) for st in (False, True) for i in range(m.d + 1)]:
                for e in [words.Generator(st, i) for st in (False, True) for i in range(m.d + 1)]:
                    if e.starred != (b.starred if n % 2 else not b.starred):
                        continue
                    r = models.span_ranks(m, n, b, e)
                    r["equal"] = r["rank_all"] == r["rank_zigzag"] and r["outside"] == 0
                    results.append(r)
        ok = all(r["equal"] for r in results)
        text = f"{head}: {len(results)} (n, begin, end) spans checked up to n={a.n}; " \
               + ("PASS" if ok else "FAIL")
        header = ["n", "begin", "end", "words", "zigzag_words", "rank_all", "rank_zigzag", "equal"]
        rows = [header] + [[r[k] for k in header] for r in results]
        return Report({"ok": ok, "spans": results}, text, rows, ok)
    if a.action == "verify-shape":
        rep = models.verify_shape_bound(m)
        return Report(rep.to_json(), rep.summary(), None, rep.ok)
    if a.action == "eddde":
        results = [models.eDDDe_ranks(m, n) for n in range(1, a.n + 1)]
        ok = all(r["rank_full"] == r["rank_thin"] for r in results)
        text = "; ".join(f"n={r['n']}: {r['rank_full']} vs {r['rank_thin']}" for r in results)
        return Report({"ok": ok, "ranks": results}, text + ("; PASS" if ok else "; FAIL"), None, ok)
    if a.action == "probe":
        rep = models.probe_independence(m, a.n, a.mode, start_starred=a.starred)
        text = (f"{a.mode} words up to n={a.n}: count {rep['count']}, rank {rep['rank']} "
                f"(ambient {rep['ambient']})")
        return Report(rep, text)  # a rank deficit here is evidence, not a failure
    if a.action == "cross-check":
        rep = _cross_check(m, a.cases, a.seed)
        ok = not rep["failures"]
        text = f"{rep['cases']} reduced words pushed through the model: " + ("PASS" if ok else
                                                                             "FAIL")
        return Report(rep, text, None, ok)
    raise TdShapeError(f"unknown action {a.action}")


def cmd_dims(a) -> Report:
    pair = default_pair(a.family, a.d, a.field, q=a.q) if a.brute else None
    dims = tensor.space_dimensions(a.d, pair)
    ok = dims["sum_per_block"] == dims["dim_r4"]
    if pair is not None:
        ok = ok and dims["brute_dim_r4"] == dims["dim_r4"]
    text = f"dim R = {dims['dim_r4']}, codim = {dims['codim_r4']}"
    if pair is not None:
        text += f" (rank sweep {dims['brute_dim_r4']})"
    return Report(dims, text, None, ok)


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def _field_arg(text):
    try:
        return parse_field(text)
    except (ValueError, TdShapeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    env_fmt = os.environ.get("TDSHAPE_FORMAT", "text")
    common.add_argument("--format", choices=FORMATS,
                        default=env_fmt if env_fmt in FORMATS else "text")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--field", type=_field_arg, default=parse_field("rational"),
                        help="rational (default) or fp:<prime>")
    common.add_argument("--seed", type=int, default=0)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=("linear", "geometric", "qracah"), default="linear")
    fam.add_argument("--q", type=int, default=2)

    p = argparse.ArgumentParser(prog="tdshape", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("tables", parents=[common], help="zigzag, sign and weight grids")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--kind", choices=("zigzag", "sign", "weight", "all"), default="all")
    c.set_defaults(func=cmd_tables)

    c = sub.add_parser("census", parents=[common], help="cell counts per block")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--s", type=int)
    c.add_argument("--t", type=int)
    c.set_defaults(func=cmd_census)

    c = sub.add_parser("enumerate-words", parents=[common], help="list words of one length")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--begin", required=True, help="first letter, e.g. e_0 or e*_2")
    c.add_argument("--end", help="last letter")
    c.add_argument("--zigzag-only", action="store_true")
    c.set_defaults(func=cmd_enumerate_words)

    c = sub.add_parser("lifting", parents=[common], help="nonredundant lifting words")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--starred", action="store_true", help="words start with a starred letter")
    c.set_defaults(func=cmd_lifting)

    c = sub.add_parser("verify-basis", parents=[common, fam], help="basis sweep over blocks")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--rank", choices=("3", "4", "both"), default="both")
    c.set_defaults(func=cmd_verify_basis)

    c = sub.add_parser("reduce", parents=[common, fam], help="reduction certificate")
    c.add_argument("--d", type=int, required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--cell", help="s,t,i,j")
    g.add_argument("--word", help="word of length 3 or 4, e.g. 'e*_1 e_3 e*_0 e_2'")
    c.set_defaults(func=cmd_reduce)

    c = sub.add_parser("model", parents=[common], help="matrix-model checks")
    c.add_argument("--family", choices=("krawtchouk", "qracah"), default="krawtchouk")
    c.add_argument("--d", type=int)
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--input", help="model JSON with d, A, Astar")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--mode", choices=("zigzag", "nonrepeatingZigzag"), default="zigzag")
    c.add_argument("--starred", action="store_true")
    c.add_argument("--cases", type=int, default=200)
    c.add_argument("action", choices=("build", "validate", "verify-span", "verify-shape",
                                      "eddde", "probe", "cross-check"))
    c.set_defaults(func=cmd_model)

    c = sub.add_parser("dims", parents=[common], help="dimensions of R")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--brute", action="store_true", help="confirm by per-block ranks")
    c.add_argument("--family", choices=("linear", "geometric"), default="linear")
    c.add_argument("--q", type=int, default=2)
    c.set_defaults(func=cmd_dims)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "d", None) is not None and args.d < 0:
        print("tdshape: --d must be nonnegative", file=stderr)
        return 2
    try:
        report = args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"tdshape: {exc}", file=stderr)
        return 2
    out = emit(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out, file=stdout)
    return 0 if report.ok else 1


def main() -> None:
    sys.exit(run())
