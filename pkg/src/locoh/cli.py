"""Command line entry point: ``locoh {h1loc,classify,scan,verify,criterion}``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .classify import classify
from .cohomology import h1_loc
from .config import RunConfig, load_config
from .criteria import ASSERTED_CONDITIONS, IsogenyBoundInput, isogeny_criterion
from .errors import CapExceeded, LocohError
from .groupfile import load_group
from .oracle import brute_force_h1
from .ring import is_prime
from .scan import MAX_SCAN_PRIME, ScanSpec, enumerate_subgroups

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

SCAN_NOTES = {
    7: "p = 7 enumerates GL_2(F_7) (2016 elements); expect several seconds",
}


class UsageError(Exception):
    pass


def _emit_json(payload: dict, path: str | None, out):
    text = json.dumps(payload, indent=2, sort_keys=False)
    if path == "-":
        out.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    return cfg.override(closure_cap=getattr(args, "max_order", None), jobs=getattr(args, "jobs", None),
                        output=getattr(args, "json", None))


def _group_line(G) -> str:
    s = G.spec
    return f"group: order {len(G)} over GR({s.p}^{s.n}, {s.b}), {len(G.generators)} generator(s)"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_h1loc(args, out) -> int:
    cfg = _config(args)
    G = load_group(args.group_file, cap=cfg.closure_cap)
    r = h1_loc(G, cap=cfg.unknown_cap)
    p, n = G.spec.p, G.spec.n
    payload = {"group": G.to_dict(), "report": r.to_dict()}
    lines = [_group_line(G),
             f"z1_order: {r.z1_order}",
             f"b1_order: {r.b1_order}",
             f"h1_invariants: {r.h1_invariants}",
             f"h1loc_invariants: {r.h1loc_invariants}",
             f"witnesses: {json.dumps(r.witnesses)}"]
    status = EXIT_OK
    if args.oracle:
        o = brute_force_h1(G, max_group=cfg.oracle_max_group, max_module=cfg.oracle_max_module)
        agree = o.h1_invariants == r.h1_invariants and o.h1loc_invariants == r.h1loc_invariants
        lines += [f"oracle h1_invariants: {o.h1_invariants}",
                  f"oracle h1loc_invariants: {o.h1loc_invariants}",
                  f"oracle agrees: {'yes' if agree else 'NO'}"]
        payload["oracle"] = {"h1_invariants": o.h1_invariants, "h1loc_invariants": o.h1loc_invariants,
                             "agrees": agree}
        status = EXIT_OK if agree else EXIT_FAIL
    if r.h1loc_trivial:
        text = (f"H^1_loc is trivial, so a point that is divisible by {p}^{n} locally at every place "
                f"is divisible by {p}^{n} globally")
        lines.append(f"interpretation: {text}")
        payload["interpretation"] = text
    _finish(lines, payload, cfg.output, out)
    return status


def cmd_classify(args, out) -> int:
    cfg = _config(args)
    G = load_group(args.group_file, cap=cfg.closure_cap)
    rep = classify(G)
    d = rep.to_dict()
    lines = [_group_line(G)]
    for key in ("contains_nontrivial_scalar", "projective_order", "projective_type", "borel", "eigenvector",
                "det_image_order"):
        lines.append(f"{key}: {json.dumps(d[key])}")
    lines.append(f"sylow: {json.dumps(d['sylow'])}")
    lines.append(f"semisimple_generator: {json.dumps(d['semisimple_generator'])}")
    cert = rep.borel_certificate
    if cert is None:
        lines.append("borel_certificate: not applicable (det image is not F_p^*)")
    else:
        lines.append(f"borel_certificate: {'pass' if cert.passed else 'fail'} ({cert.reason})")
        if cert.passed:
            lines.append(f"  N order {cert.sylow_order}, g = {cert.g_matrix}, ord(g) = {cert.g_order}, "
                         f"ord(det g) = {cert.g_det_order}")
    _finish(lines, {"group": G.to_dict(), "classification": d}, cfg.output, out)
    return EXIT_OK


def scan_fingerprint(G) -> str:
    """Short stable digest of the canonical conjugate's ambient index tuple."""
    raw = ",".join(map(str, G.ambient_indices.tolist())).encode()
    return hashlib.blake2b(raw, digest_size=6).hexdigest()


def scan_rows(p: int, gens: int = 2, det_filter: bool = True, jobs: int = 1, cfg: RunConfig | None = None,
              max_order: int | None = None):
    cfg = cfg or RunConfig()
    scan = ScanSpec(p, max_generators=gens, max_order=max_order, det_filter=det_filter)
    groups = enumerate_subgroups(scan, jobs=jobs)
    rows = []
    for G in groups:
        r = h1_loc(G, cap=cfg.unknown_cap)
        rep = classify(G, with_certificate=True)
        full_det = G.det_order == p - 1
        cert = rep.borel_certificate
        applies = p >= 5 and full_det
        violation = applies and bool(r.h1loc_invariants) and not cert.passed
        rows.append({
            "fingerprint": scan_fingerprint(G),
            "order": len(G),
            "generators": [G.element(s).tolist() for s in G.generators],
            "det_image_order": G.det_order,
            "h1loc_invariants": r.h1loc_invariants,
            "projective_type": rep.projective_type,
            "certificate": ("pass" if cert.passed else "fail") if applies else "n/a",
            "violation": violation,
        })
    return rows


def cmd_scan(args, out) -> int:
    cfg = _config(args)
    p = args.p
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if p > MAX_SCAN_PRIME:
        raise UsageError(f"p = {p} is out of reach: |GL_2(F_{p})| = {(p * p - 1) * (p * p - p)} elements and "
                         f"a 2-generated subgroup search over all pairs; scans support p <= {MAX_SCAN_PRIME}")
    if p in SCAN_NOTES:
        print(f"note: {SCAN_NOTES[p]}", file=sys.stderr)
    rows = scan_rows(p, args.gens, not args.no_det_filter, cfg.jobs, cfg, args.max_order)
    violations = sum(r["violation"] for r in rows)
    lines = [f"scan p={p} generators<={args.gens} det_filter={'off' if args.no_det_filter else 'on'}",
             f"{'fingerprint':<14}{'order':>6}{'det':>5}  {'h1loc':<10}{'type':<15}{'certificate':<12}generators"]
    for r in rows:
        lines.append(f"{r['fingerprint']:<14}{r['order']:>6}{r['det_image_order']:>5}  "
                     f"{str(r['h1loc_invariants']):<10}{r['projective_type']:<15}{r['certificate']:<12}"
                     f"{json.dumps(r['generators'])}")
    if p < 5:
        lines.append("rows are informational: the Borel certificate needs p >= 5")
    lines.append(f"groups: {len(rows)}  with H^1_loc != 0: {sum(bool(r['h1loc_invariants']) for r in rows)}  "
                 f"violations: {violations}")
    payload = {"p": p, "max_generators": args.gens, "det_filter": not args.no_det_filter, "rows": rows,
               "violations": violations}
    _finish(lines, payload, cfg.output, out)
    return EXIT_FAIL if violations else EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import CHECKS, VerifySuiteReport, run_suite

    cfg = _config(args)
    only = [c for item in (args.only or []) for c in item.split(",") if c]
    unknown = [c for c in only if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    quiet = cfg.output == "-"

    def progress(rec):
        if not quiet:
            out.write("\n".join(VerifySuiteReport([rec]).lines()) + "\n")
            out.flush()

    start = time.perf_counter()
    report = run_suite(only or None, cfg, progress)
    if not quiet:
        out.write(f"{'all checks passed' if report.passed else 'FAILURES'} in {time.perf_counter() - start:.1f}s\n")
    if cfg.output:
        _emit_json(report.to_dict(), cfg.output, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_criterion(args, out) -> int:
    cfg = _config(args)
    held = set(ASSERTED_CONDITIONS) if args.assume_all else set()
    for item in args.assume or []:
        for k in item.split(","):
            k = int(k)
            if k not in ASSERTED_CONDITIONS:
                raise UsageError(f"condition {k} is computed, not asserted; assertable: "
                                 f"{sorted(ASSERTED_CONDITIONS)}")
            held.add(k)
    inp = IsogenyBoundInput(args.d, args.p, args.lam, args.norm_p, {k: k in held for k in ASSERTED_CONDITIONS},
                            args.principally_polarized)
    rep = isogeny_criterion(inp)
    lines = [f"d={inp.d} p={inp.p} lambda={inp.lam} N(P)={inp.norm_p}",
             f"C = {rep.C}"]
    t = rep.threshold
    lines.append(f"threshold = {t.exact}" if t.exact is not None else f"threshold > 2^{t.log2_lower}")
    for c in rep.conditions:
        lines.append(f"condition {c.id}: {c.status} ({c.detail})")
    lines.append(f"verdict: {rep.verdict}")
    _finish(lines, rep.to_dict(), cfg.output, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _finish(lines, payload, json_path, out):
    if json_path != "-":
        out.write("\n".join(lines) + "\n")
    if json_path:
        _emit_json(payload, json_path, out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="locoh", description="Local cohomology of GL_2 Galois modules.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--config", help="config file (default: $LOCOH_CONFIG)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, closure=True):
        sp.add_argument("--json", metavar="PATH", help="write a JSON report to PATH ('-' for stdout only)")
        if closure:
            sp.add_argument("--max-order", type=int, metavar="N", help="cap on group closure size")

    sp = sub.add_parser("h1loc", help="H^1 and H^1_loc of a group on its natural module")
    sp.add_argument("group_file")
    sp.add_argument("--oracle", action="store_true", help="also run the brute-force enumeration")
    common(sp)
    sp.set_defaults(func=cmd_h1loc)

    sp = sub.add_parser("classify", help="classification report for a level-one group")
    sp.add_argument("group_file")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("scan", help="scan subgroups of GL_2(F_p) up to conjugacy")
    sp.add_argument("p", type=int)
    sp.add_argument("--no-det-filter", action="store_true", help="keep groups whose det image is not F_p^*")
    sp.add_argument("--gens", type=int, default=2, help="generators per subgroup (default 2)")
    sp.add_argument("--jobs", type=int, help="worker threads (output is identical for any value)")
    sp.add_argument("--max-order", type=int, metavar="N", help="drop subgroups larger than N")
    common(sp, closure=False)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("verify", help="run the verification suite")
    sp.add_argument("--only", action="append", metavar="CHECK", help="run only these checks (repeatable or comma list)")
    common(sp, closure=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("criterion", help="evaluate the norm criterion")
    sp.add_argument("d", type=int)
    sp.add_argument("p", type=int)
    sp.add_argument("lam", type=int, metavar="lambda")
    sp.add_argument("norm_p", type=int, metavar="normP")
    sp.add_argument("--assume", action="append", metavar="K", help="assert condition(s) K (from 1,2,4,5,6)")
    sp.add_argument("--assume-all", action="store_true", help="assert conditions 1, 2, 4, 5 and 6")
    sp.add_argument("--principally-polarized", action="store_true")
    common(sp, closure=False)
    sp.set_defaults(func=cmd_criterion)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, LocohError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
