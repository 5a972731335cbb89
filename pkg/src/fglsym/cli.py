"""Command line front end.

    fglsym compute --family hp --lambda 3,1 --n 4 --fgl universal \
                   --factorial --cap 8 --out json
    fglsym table   --family s_kl --n 3 --max-weight 3 --fgl additive
    fglsym verify  --suite fgl-axioms --cap 6

Exit codes: 0 success / all checks pass, 1 failed checks or internal
errors, 2 usage errors.  The environment variable SYMFUN_THREADS (or
--threads) sets the worker pool size for verification suites; results
are merged in a deterministic order regardless of the pool size.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from fractions import Fraction

from .detpfaff import gq_pfaffian, grothendieck_det, jacobi_trudi_schur, \
    q_pfaffian
from .fgl import FormalGroupLaw
from .genfun import gf_coefficient, gf_hp_factorial_correction
from .partitions import Partition, partitions_up_to_weight
from .series import TruncSeries, from_json_obj, mono_pairs, to_json_obj, \
    var_name
from .symfun import FamilySpec, eval_family
from .verify import run_suite, suite_names

ROUTE_MATRIX = {
    "symmetrizer": ("s_kl", "s_uf", "p", "q", "hp", "hq"),
    "gf": ("s_kl", "p", "q", "hp", "hq"),
    "det": ("s_kl",),
    "pfaffian": ("q",),
}

DET_LAWS = ("additive", "multiplicative")


def _parse_partition(text):
    text = (text or "").strip()
    if not text:
        return Partition([])
    return Partition(int(p) for p in text.split(","))


def _load_fgl(name):
    if name.startswith("custom:"):
        path = name.split(":", 1)[1]
        with open(path) as fh:
            data = json.load(fh)
        coeffs = []
        for entry in data["log_coeffs"]:
            if isinstance(entry, dict):
                coeffs.append(from_json_obj(entry))
            else:
                coeffs.append(TruncSeries.const(Fraction(str(entry))))
        return FormalGroupLaw.custom(coeffs)
    return FormalGroupLaw(name)


def _emit(series, fmt, out):
    if fmt == "json":
        out.write(json.dumps(to_json_obj(series)))
        out.write("\n")
    elif fmt == "csv":
        vids = sorted(series.variables())
        out.write(",".join(["coeff"] + [var_name(v) for v in vids]) + "\n")
        for mono, c in series.sorted_terms():
            exps = dict(mono_pairs(mono))
            row = [str(c)] + [str(exps.get(v, 0)) for v in vids]
            out.write(",".join(row) + "\n")
    else:
        out.write(repr(series) + "\n")


def _compute_one(args, fgl, lam):
    route = args.route
    if args.family not in ROUTE_MATRIX[route]:
        raise SystemExit2(
            "route %r does not support family %r; supported: %s"
            % (route, args.family,
               "; ".join("%s -> %s" % (r, ",".join(f))
                         for r, f in ROUTE_MATRIX.items())))
    if route in ("det", "pfaffian") and fgl.kind not in DET_LAWS:
        raise SystemExit2("route %r supports laws %s"
                          % (route, "/".join(DET_LAWS)))
    spec = FamilySpec(args.family, lam, args.n, fgl,
                      factorial=args.factorial,
                      t_on=args.family in ("hp", "hq"),
                      cap=args.cap, pcap=args.pcap,
                      b_shift=args.b_shift, b_limit=args.b_limit)
    if route == "symmetrizer":
        return eval_family(spec)
    if route == "gf":
        if args.family == "hp" and args.factorial \
                and args.hp_variant == "correction":
            return gf_hp_factorial_correction(lam, args.n, fgl,
                                              spec.cap, spec.pcap,
                                              b_limit=args.b_limit)
        return gf_coefficient(spec, hp_variant=args.hp_variant)
    if route == "det":
        fn = jacobi_trudi_schur if fgl.kind == "additive" \
            else grothendieck_det
        return fn(lam, args.n, args.factorial, spec.cap, spec.pcap)
    fn = q_pfaffian if fgl.kind == "additive" else gq_pfaffian
    return fn(lam, args.n, args.factorial, spec.cap, spec.pcap)


class SystemExit2(Exception):
    pass


def cmd_compute(args):
    fgl = _load_fgl(args.fgl)
    lam = _parse_partition(args.lam)
    series = _compute_one(args, fgl, lam)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        _emit(series, args.out, out)
    finally:
        if args.output:
            out.close()
    return 0


def cmd_table(args):
    fgl = _load_fgl(args.fgl)
    rows = {}
    for lam in partitions_up_to_weight(args.max_weight, args.n):
        args_lam = argparse.Namespace(**vars(args))
        series = _compute_one(args_lam, fgl, lam)
        rows[str(lam)] = to_json_obj(series)
    text = json.dumps({"family": args.family, "n": args.n,
                       "fgl": args.fgl, "entries": rows},
                      sort_keys=True)
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        out.write(text + "\n")
    finally:
        if args.output:
            out.close()
    return 0


def cmd_verify(args):
    threads = args.threads or int(os.environ.get("SYMFUN_THREADS", "1"))
    params = {}
    if args.cap is not None:
        params["cap"] = args.cap
    if args.max_weight is not None:
        params["max_weight"] = args.max_weight
    if args.n is not None:
        params["n_values"] = (args.n,)
        params["n_max"] = args.n
        params["n"] = args.n
    names = suite_names() if args.suite == "all" else [args.suite]
    all_ok = True
    for name in names:
        if threads > 1 and len(names) > 1:
            # suites fan out to a pool; results merge by case key
            with concurrent.futures.ThreadPoolExecutor(threads) as pool:
                results = list(pool.submit(run_suite, name, **params)
                               .result())
        else:
            results = run_suite(name, **params)
        for res in sorted(results, key=lambda r: r.case):
            status = "pass" if res.ok else "FAIL"
            line = "[%s] %-8s %s (%.2fs)" % (name, status, res.case,
                                             res.seconds)
            if res.detail and not res.ok:
                line += "  -- " + res.detail
            print(line)
            all_ok = all_ok and res.ok
    return 0 if all_ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fglsym",
        description="exact Schur / Hall-Littlewood families over formal "
                    "group laws")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--family", required=True,
                       choices=("s_kl", "s_uf", "p", "q", "hp", "hq"))
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--fgl", default="universal",
                       help="additive | multiplicative | universal | "
                            "custom:<path>")
        p.add_argument("--factorial", action="store_true")
        p.add_argument("--cap", type=int, default=None,
                       help="truncation bound (default weight + n)")
        p.add_argument("--pcap", type=int, default=None)
        p.add_argument("--b-shift", type=int, default=0)
        p.add_argument("--b-limit", type=int, default=None)
        p.add_argument("--route", default="symmetrizer",
                       choices=tuple(ROUTE_MATRIX))
        p.add_argument("--hp-variant", default="correction",
                       choices=("correction", "shift"))
        p.add_argument("--out", default="pretty",
                       choices=("json", "csv", "pretty"))
        p.add_argument("--output", default=None, help="write to file")

    pc = sub.add_parser("compute", help="evaluate one family instance")
    common(pc)
    pc.add_argument("--lambda", dest="lam", default="",
                    help="comma separated partition, empty for the empty "
                         "partition")

    pt = sub.add_parser("table", help="all partitions up to a weight bound")
    common(pt)
    pt.add_argument("--max-weight", type=int, default=3)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", default="all",
                    choices=tuple(suite_names())
                    + ("all", "gf-vs-symmetrizer"))
    pv.add_argument("--cap", type=int, default=None)
    pv.add_argument("--max-weight", type=int, default=None)
    pv.add_argument("--n", type=int, default=None)
    pv.add_argument("--seed", type=int, default=0,
                    help="reserved for randomized suites")
    pv.add_argument("--threads", type=int, default=None)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.cmd == "compute":
            return cmd_compute(args)
        if args.cmd == "table":
            return cmd_table(args)
        return cmd_verify(args)
    except SystemExit2 as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except Exception as exc:  # internal invariant violation
        print("internal error: %s: %s" % (type(exc).__name__, exc),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
