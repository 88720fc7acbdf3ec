"""Command-line entry point: ``lsb2adic <command> [options]``.

Exit codes: 0 when every check passes, 1 on a mathematical mismatch, 2 on a
usage or resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, _kernels
from .autocorr import BRUTE_CAP, DEFAULT_SEED, ac_at, acb_vector, predicted_ac, table1, verify_theorem1
from .errors import InvalidArgument, ResourceLimit, UnsupportedPrime
from .gf import field_for
from .numtheory import is_prime, odd_primes
from .seq import MAX_PERIOD, bit_component, lsb_of, m_sequence
from .twoadic import MAX_BITS, SUPPORTED, conjecture_check, two_adic_report

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
BETA_DEFAULTS = {17: 3, 31: 3}


class UsageError(Exception):
    pass


def resolve_beta(p: int, beta: int | None) -> tuple[int | None, str | None]:
    if beta is not None:
        return beta, None
    if p in BETA_DEFAULTS:
        return BETA_DEFAULTS[p], f"beta defaulted to {BETA_DEFAULTS[p]} for p={p}"
    return None, None


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def _check_pn(p: int, n: int):
    if p < 3 or not is_prime(p):
        raise UsageError(f"--p must be an odd prime, got {p}")
    if n < 1:
        raise UsageError(f"--n must be positive, got {n}")


def _config(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _envelope(args, body: dict, ctx=None) -> dict:
    out = {"tool": "lsb2adic", "version": __version__, "backend": _kernels.BACKEND,
           "config": _config(args)}
    if ctx is not None:
        out["field"] = ctx.to_json()
    out.update(body)
    out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class Output:
    """What a command produced, in each of the three formats."""

    def __init__(self, payload: dict, header=(), rows=(), text=(), code: int = EXIT_OK):
        self.payload = payload
        self.header = list(header)
        self.rows = [list(r) for r in rows]
        self.text = list(text)
        self.code = code

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            return _csv(self.header, self.rows)
        return "\n".join(self.text) + "\n"


# -- commands -------------------------------------------------------------------


def cmd_table1(args) -> Output:
    p_max = args.p_max if args.p_max is not None else 100
    if p_max < 7:
        raise UsageError(f"--p-max {p_max}: no prime >= 7 in range (AC_b(I) is empty below 7)")
    rows = table1(p_max)
    diffs = []
    for r in rows:
        for b in r.mismatched_betas:
            diffs.append({"p": r.p, "beta": b, "expected": list(r.expected),
                          "computed": list(r.acb_I[b])})
    text = [r.format() for r in rows]
    for d in diffs:
        text.append(f"DIFF p={d['p']} beta={d['beta']}: table {tuple(d['expected'])} "
                    f"computed {tuple(d['computed'])}")
    text.append(f"# {len(rows)} rows, {len(diffs)} diffs")
    csv_rows = [[r.p, " ".join(map(str, r.betas)), " ".join(map(str, r.acb_I[r.betas[0]])),
                 "ok" if r.ok else "diff"] for r in rows]
    payload = _envelope(args, {"rows": [r.to_json() for r in rows], "diffs": diffs})
    return Output(payload, ["p", "betas", "acb_I", "status"], csv_rows, text,
                  EXIT_MISMATCH if diffs else EXIT_OK)


def cmd_ac(args) -> Output:
    _need(args, "p", "n")
    _check_pn(args.p, args.n)
    if args.n < 2:
        raise UsageError("the closed form needs --n >= 2")
    beta, note = resolve_beta(args.p, args.beta)
    ctx = field_for(args.p, args.n, beta)
    header = [f"# p={ctx.p} n={ctx.n} N={ctx.N} M={ctx.M} beta={ctx.beta} "
              f"modulus={list(ctx.modulus_poly)}"]
    if note:
        header.append(f"# {note}")
    if args.tau is not None:
        if not 0 < args.tau < ctx.N:
            raise UsageError(f"--tau must lie in [1, {ctx.N})")
        s = lsb_of(ctx)
        got = ac_at(s, args.tau)
        want = predicted_ac(ctx, acb_vector(ctx.p, ctx.beta), args.tau)
        ok = got == want
        payload = _envelope(args, {"tau": args.tau, "brute": got, "predicted": want,
                                   "ok": ok, "notes": [note] if note else []}, ctx)
        return Output(payload, ["tau", "brute", "predicted", "ok"], [[args.tau, got, want, ok]],
                      header + [f"{args.tau} {got} {want} {'ok' if ok else 'MISMATCH'}"],
                      EXIT_OK if ok else EXIT_MISMATCH)
    if ctx.N > args.brute_cap and not args.sampled:
        raise ResourceLimit(f"N={ctx.N} exceeds --brute-cap {args.brute_cap}; pass --sampled")
    rep = verify_theorem1(ctx, args.brute_cap, sampled=ctx.N > args.brute_cap, seed=args.seed)
    s = lsb_of(ctx)
    acb = acb_vector(ctx.p, ctx.beta)
    if rep.mode == "full":
        taus = range(1, ctx.N)
    else:
        taus = sorted(set(range(ctx.M, ctx.N, ctx.M)) | set(rep.mismatches))
    rows = []
    for t in taus:
        got, want = ac_at(s, t), predicted_ac(ctx, acb, t)
        rows.append([t, got, want, got == want])
    text = header + [f"# mode={rep.mode} checked={rep.checked} mismatches={len(rep.mismatches)}"]
    if rep.corollary_checked and rep.corollary_mismatches:
        text.append(f"# explicit table disagrees at tau/M in "
                    f"{sorted({t // ctx.M for t in rep.corollary_mismatches})} (informational)")
    text += [f"{t} {g} {w} {'ok' if k else 'MISMATCH'}" for t, g, w, k in rows]
    body = rep.to_json()
    body["notes"] = [note] if note else []
    body["acb_I"] = list(acb.acb_I)
    payload = _envelope(args, {"report": body}, ctx)
    return Output(payload, ["tau", "brute", "predicted", "ok"], rows, text,
                  EXIT_OK if rep.ok else EXIT_MISMATCH)


def _twoadic_cell(p, n, beta, max_bits, brute_cap, seed, c_cap, with_theorem1=True) -> dict:
    """One grid cell; plain dict so it pickles across worker processes."""
    N = p**n - 1
    row = {"p": p, "n": n, "N": N}
    if N > max_bits or N > MAX_PERIOD:
        row.update(verdict="skipped", reason=f"N={N} over budget")
        return row
    beta_used, note = resolve_beta(p, beta)
    ctx = field_for(p, n, beta_used)
    s = lsb_of(ctx)
    rep = two_adic_report(s, p, n, ctx.beta, max_bits)
    conj = conjecture_check(s, p, n, c_cap, max_bits)
    row.update(rep.to_json())
    row["field"] = ctx.to_json()
    if note:
        row["notes"].append(note)
    row["conjecture"] = conj.to_json()
    ok = rep.verdict != "fail"
    if with_theorem1 and n >= 2:
        t1 = verify_theorem1(ctx, brute_cap, seed=seed)
        row["theorem1"] = {"mode": t1.mode, "checked": t1.checked,
                           "mismatches": t1.mismatches, "ok": t1.ok}
        ok = ok and t1.ok
    if rep.verdict == "exploratory":
        row["verdict"] = "exploratory"
    else:
        row["verdict"] = "pass" if ok else "fail"
    return row


def _twoadic_text(row: dict) -> list[str]:
    out = [f"p={row['p']} n={row['n']} N={row['N']} beta={row.get('beta')}"]
    if row["verdict"] == "skipped":
        return out + [f"  skipped: {row['reason']}"]
    out.append(f"  phi2_exact={row['phi2_exact']} bound={row['bound_value']} slack={row['slack']}")
    if row.get("gcd_ok") is not None:
        out.append(f"  g_plus={int(row['g_plus'], 16)} (predicted {int(row['predicted_plus'], 16)}) "
                   f"g_minus bits={int(row['g_minus'], 16).bit_length()} gcd_ok={row['gcd_ok']}")
    c = row["conjecture"]
    out.append(f"  conjecture: main={c['main']} slack={c['slack']} cap={c['cap']} "
               f"({c['cap_source']}) ok={c['ok']}")
    out += [f"  note: {x}" for x in row.get("notes", [])]
    out.append(f"  verdict: {row['verdict']}")
    return out


_SUMMARY = ["p", "n", "N", "phi2_exact", "bound", "slack", "verdict", "beta", "conjecture_slack"]


def _summary_row(row: dict) -> list:
    c = row.get("conjecture", {})
    return [row["p"], row["n"], row["N"], row.get("phi2_exact", ""), row.get("bound_value") or "",
            "" if row.get("slack") is None else row["slack"], row["verdict"],
            row.get("beta") or "", c.get("slack", "")]


def cmd_twoadic(args) -> Output:
    _need(args, "p", "n")
    _check_pn(args.p, args.n)
    if args.p ** args.n - 1 > args.max_bits:
        raise ResourceLimit(f"N={args.p ** args.n - 1} exceeds --max-bits {args.max_bits}")
    row = _twoadic_cell(args.p, args.n, args.beta, args.max_bits, args.brute_cap, args.seed,
                        args.c_cap, with_theorem1=False)
    payload = _envelope(args, {"report": row})
    code = EXIT_MISMATCH if row["verdict"] == "fail" else EXIT_OK
    return Output(payload, _SUMMARY, [_summary_row(row)], _twoadic_text(row), code)


def cmd_verify(args) -> Output:
    p_max = args.p_max if args.p_max is not None else 31
    n_max = args.n_max if args.n_max is not None else 3
    if p_max < 3 or n_max < 2:
        raise UsageError("--p-max must be >= 3 and --n-max >= 2")
    cells = [(p, n) for p in odd_primes(3, p_max) for n in range(2, n_max + 1)]
    jobs = [(p, n, args.beta if p == args.p else None, args.max_bits, args.brute_cap,
             args.seed, args.c_cap) for p, n in cells]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_twoadic_cell, *zip(*jobs)))
    else:
        rows = [_twoadic_cell(*j) for j in jobs]
    counts = {}
    for r in rows:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    text = []
    for r in rows:
        text += _twoadic_text(r)
    text.append("# " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    payload = _envelope(args, {"cells": rows, "counts": counts})
    out = Output(payload, _SUMMARY, [_summary_row(r) for r in rows], text,
                 EXIT_MISMATCH if counts.get("fail") else EXIT_OK)
    out.jsonl = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    return out


def cmd_conjecture(args) -> Output:
    if args.p is not None:
        _need(args, "n")
        _check_pn(args.p, args.n)
        cells = [(args.p, args.n)]
    else:
        p_max = args.p_max if args.p_max is not None else 31
        n_max = args.n_max if args.n_max is not None else 3
        cells = [(p, n) for p in odd_primes(3, p_max) for n in range(1, n_max + 1)]
    rows, text, code = [], [], EXIT_OK
    for p, n in cells:
        N = p**n - 1
        if N > args.max_bits or N > MAX_PERIOD:
            rows.append({"p": p, "n": n, "N": N, "verdict": "skipped"})
            text.append(f"p={p} n={n} N={N} skipped (over budget)")
            continue
        beta, _ = resolve_beta(p, args.beta if args.p is not None else None)
        ctx = field_for(p, n, beta)
        rep = conjecture_check(lsb_of(ctx), p, n, args.c_cap, args.max_bits)
        d = rep.to_json()
        d["beta"] = ctx.beta
        rows.append(d)
        if not rep.ok and rep.cap_source != "heuristic":
            code = EXIT_MISMATCH
        text.append(f"p={p} n={n} N={N} beta={ctx.beta} phi2={rep.phi2} main={rep.main} "
                    f"slack={rep.slack} cap={rep.cap} ({rep.cap_source}) "
                    f"{'pass' if rep.ok else 'FAIL'}")
    header = ["p", "n", "N", "beta", "phi2", "main", "slack", "cap", "cap_source", "ok"]
    csv_rows = [[r.get(k, "") for k in header] for r in rows]
    return Output(_envelope(args, {"cells": rows}), header, csv_rows, text, code)


def cmd_export_seq(args) -> Output:
    _need(args, "p", "n")
    _check_pn(args.p, args.n)
    beta, _ = resolve_beta(args.p, args.beta)
    ctx = field_for(args.p, args.n, beta)
    a = m_sequence(ctx)
    s = bit_component(a, args.bit, zero_as_p=not args.zero_as_zero)
    bits = s.bits
    out = Output(s.to_json(), ["t", "bit"], [[t, int(b)] for t, b in enumerate(bits)],
                 ["".join(map(str, bits))])
    out.raw = s.to_raw()
    return out


COMMANDS = {
    "table1": (cmd_table1, "recompute the AC_b(I) table and diff it"),
    "ac": (cmd_ac, "brute-force vs closed-form autocorrelation of an LSB sequence"),
    "twoadic": (cmd_twoadic, "exact 2-adic complexity, gcd identities and bound for one (p, n)"),
    "verify": (cmd_verify, "run the 2-adic checks over a (p, n) grid"),
    "conjecture": (cmd_conjecture, "slack against the conjectured main term"),
    "export-seq": (cmd_export_seq, "write an LSB or bit-component sequence"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lsb2adic", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (func, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--p", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--p-max", type=int)
        sp.add_argument("--n-max", type=int)
        sp.add_argument("--beta", type=int)
        sp.add_argument("--max-bits", type=int, default=MAX_BITS)
        sp.add_argument("--brute-cap", type=int, default=BRUTE_CAP)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        formats = ["json", "csv", "text", "raw"] if name == "export-seq" else ["json", "csv", "text"]
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--out", type=Path)
        if name == "ac":
            sp.add_argument("--tau", type=int)
            sp.add_argument("--sampled", action="store_true",
                            help="allow sampled verification when N exceeds --brute-cap")
        if name in ("twoadic", "verify", "conjecture"):
            sp.add_argument("--c-cap", type=int, help="override the conjecture constant")
        if name == "verify":
            sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        if name == "export-seq":
            sp.add_argument("--bit", type=int, default=1, help="bit-component index, 1 = LSB")
            sp.add_argument("--zero-as-zero", action="store_true",
                            help="encode 0 as 0 instead of the bits of p (experiments only)")
    return ap


def _write(args, out: Output) -> None:
    if args.format == "raw":
        if args.out is None:
            raise UsageError("--format raw needs --out")
        args.out.write_bytes(out.raw)
        return
    text = out.render(args.format)
    if args.out is None:
        sys.stdout.write(text)
        return
    args.out.parent.mkdir(parents=True, exist_ok=True)
    jsonl = getattr(out, "jsonl", None)
    if jsonl is not None:
        # grids: JSON-lines cells plus a CSV summary next to the requested path
        args.out.with_suffix(".jsonl").write_text(jsonl)
        args.out.with_suffix(".csv").write_text(_csv(out.header, out.rows))
        if args.out.suffix not in (".jsonl", ".csv"):
            args.out.write_text(text)
    else:
        args.out.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
        _write(args, out)
    except (UsageError, InvalidArgument, UnsupportedPrime) as exc:
        print(f"lsb2adic {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"lsb2adic {args.command}: resource limit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return out.code


if __name__ == "__main__":
    sys.exit(main())
