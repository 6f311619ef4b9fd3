"""Command-line entry point: every computation as a subcommand printing a JSON run manifest."""
import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import binquad, lattice3, narrow, vinberg
from .parallel import default_workers

DEFAULT_CACHE = os.path.join(os.path.expanduser("~"), ".cache", "hyperlat", "classnumbers.txt")


def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if hasattr(x, "p") and hasattr(x, "q"):  # sympy Rational
        return _jsonable(Fraction(int(x.p), int(x.q)))
    return x


def parse_lattice(text):
    """u:<k> or diag:<n1>,<n2>,<n3>[:e1,e2,e3]."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "u":
            return vinberg.UPlus(int(rest))
        if kind == "diag":
            ns, _, eps = rest.partition(":")
            n1, n2, n3 = (int(x) for x in ns.split(","))
            glue = tuple(int(x) for x in eps.split(",")) if eps else (0, 0, 0)
            if len(glue) != 3:
                raise ValueError
            return vinberg.Diag(n1, n2, n3, glue)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad lattice {text!r}: {exc}") from None
    raise argparse.ArgumentTypeError(f"bad lattice {text!r}; use u:<k> or diag:<n1>,<n2>,<n3>[:e1,e2,e3]")


def verdict_json(v):
    out = {"tag": v.tag}
    if isinstance(v, vinberg.Elliptic):
        out.update(p_m=[r.render() for r in v.p_m], gram=v.gram)
    elif isinstance(v, vinberg.Hyperbolic):
        out.update(weyl=list(v.weyl), period=v.period)
    elif isinstance(v, vinberg.NotReflective):
        out["witness"] = list(v.witness) if isinstance(v.witness, tuple) else v.witness
    else:
        out["height_reached"] = v.height_reached
    return _jsonable(out)


def _triplet_rows(rows):
    return [{"d": d, "eta": eta, "h": h} for d, eta, h in rows]


# Subcommands return (result, counts)

def cmd_hclass(args):
    c = binquad.genus_counts(binquad.GenusLabel(args.D, args.mu), strict=args.strict)
    res = {"hrI": c.hrI, "hrII": c.hrII, "hnr": c.hnr}
    return res, res


def cmd_hnr(args):
    h = lattice3.hnr(args.d, args.eta)
    return [{"d": args.d, "eta": args.eta, "h": h}], {"hnr": h}


def cmd_refh3(args):
    rows = lattice3.enumerate_low_hnr(args.max_d, args.hmax, exact=args.exact, workers=args.workers)
    counts = {"table3_count": len(rows), "max_d": max((r[0] for r in rows), default=0)}
    return _triplet_rows(rows), counts


def cmd_fund(args):
    tag = args.type.upper()
    if args.emit_records:
        stats = narrow.EnumStats()
        with open(args.emit_records, "w", encoding="utf-8") as fh:
            for rec in narrow.iter_records(tag):
                stats.add(rec)
                fh.write(json.dumps(rec.to_json()) + "\n")
        args.outputs.append(args.emit_records)
    else:
        stats, _ = narrow.enumerate_narrow(tag, workers=args.workers)
    res = stats.to_json()
    return res, dict(res)


def cmd_fund_main(args):
    trips = narrow.enumerate_II0_main(workers=args.workers, double_rule=args.double_rule)
    rows = [(t.d, t.eta, t.h) for t in trips]
    return _triplet_rows(rows), {"nII0": len(rows)}


def _vinberg_result(L, height, hnr=None):
    roots = vinberg.enumerate_roots(L, height)
    chains = vinberg.build_chains(L, roots)
    verdict = vinberg.classify_reflectivity(L, height, hnr=hnr, roots=roots)
    res = {
        "lattice": L.describe(),
        "roots": [r.render() for r in roots],
        "chains": {"e": [r.render() for r in chains.e.roots],
                   "f": [r.render() for r in chains.f.roots] if chains.f else None},
        "grams": {"e": chains.e.gram, "f": chains.f.gram if chains.f else None},
        "orphans": [r.render() for r in chains.orphans],
        "verdict": verdict_json(verdict),
    }
    return _jsonable(res), {"roots": len(roots), "verdict": verdict.tag}


def cmd_vinberg(args):
    return _vinberg_result(args.lattice, args.height)


def cmd_classify(args):
    if args.hnr is not None:
        h = args.hnr
    elif args.d is not None and args.eta is not None:
        h = lattice3.hnr(args.d, args.eta)
    else:
        raise ValueError("classify needs --hnr or both --d and --eta")
    res, counts = _vinberg_result(args.lattice, args.height, hnr=h)
    res["hnr"] = h
    counts["hnr"] = h
    return res, counts


# Published-number suite

# (d, eta, h) with h <= 1 that no II0 narrow place of a main lattice reaches
NO_NARROW_PLACE = [
    (57, 1, 1), (65, 3, 1), (71, 0, 1), (119, 3, 1), (161, 1, 1), (182, 3, 1),
    (194, 0, 1), (246, 0, 1), (259, 3, 1), (266, 0, 1), (266, 3, 1), (285, 1, 1),
    (299, 3, 1), (326, 0, 1), (335, 0, 1), (354, 2, 1), (386, 0, 1), (407, 0, 1),
    (506, 0, 1), (530, 0, 1), (534, 0, 1), (546, 2, 0), (602, 3, 1), (645, 6, 1),
    (714, 6, 1), (777, 6, 1), (854, 3, 1), (897, 5, 1), (897, 7, 1), (935, 6, 1),
    (966, 2, 1), (1106, 1, 1), (1254, 4, 1), (1394, 3, 1), (1659, 2, 1), (2210, 6, 1),
    (3311, 1, 1), (3990, 4, 1), (4466, 1, 1),
]


def _check_class_numbers():
    for D in range(-3, -20001, -1):
        if binquad.is_fundamental(D) and binquad.class_number(D) != binquad.class_number_forms(D):
            return False, f"D={D}"
    return True, "|D| <= 20000"


def _check_hnr_spots():
    got = [lattice3.hnr(114, 2), lattice3.hnr(3990, 4), lattice3.hnr(57, 1)]
    return got == [0, 1, 1], str(got)


def _check_refh3(workers):
    rows = lattice3.enumerate_low_hnr(5000, 1, workers=workers)
    return len(rows) == 206 and rows[-1][0] == 4466, f"{len(rows)} pairs, max d {rows[-1][0]}"


H2_TAIL = [(4290, 1), (4326, 2), (4902, 4), (4991, 7), (5226, 0), (5334, 2), (6006, 2),
           (7590, 8), (10374, 2), (29526, 2)]


def _check_h2_tail(workers):
    rows = lattice3.enumerate_low_hnr(30000, 2, exact=True, workers=workers)
    tail = [(d, eta) for d, eta, _ in rows[-10:]]
    return tail == H2_TAIL, str(tail[-3:])


NARROW_COUNTS = {
    "I1": (272, 3528, 543, 181),
    "I0": (2998, 69192, 10209, 89),
    "II1": (9818, 47432, 10965, 487),
    "II0": (376208, 995316, 238569, 283),
    "III": (200539, 324900, 26565, 907),
}


def _check_narrow(tag, workers):
    stats, _ = narrow.enumerate_narrow(tag, workers=workers)
    return stats.as_tuple() == NARROW_COUNTS[tag], str(stats.as_tuple())


def _check_ii0_main(workers):
    trips = narrow.enumerate_II0_main(workers=workers)
    table = {(d, eta) for d, eta, _ in lattice3.enumerate_low_hnr(5000, 1, workers=workers)}
    excluded = {(d, eta) for d, eta, _ in NO_NARROW_PLACE}
    ok = len(trips) == 132 and all((t.d, t.eta) in table and (t.d, t.eta) not in excluded
                                   for t in trips)
    return ok, f"{len(trips)} triplets"


def _check_vinberg_114():
    L = vinberg.UPlus(57)
    v = vinberg.classify_reflectivity(L, 50000)
    ok = isinstance(v, vinberg.Hyperbolic) and v.weyl == (95, 19, -6)
    return ok, v.tag


def _check_vinberg_3990():
    L = vinberg.Diag(30, 38, 14, (1, 1, 0))
    v = vinberg.classify_reflectivity(L, 500000, hnr=1)
    return isinstance(v, vinberg.NotReflective), v.tag


def cmd_repro(args):
    w = args.workers
    checks = [
        ("class numbers", _check_class_numbers),
        ("hnr spot values", _check_hnr_spots),
        ("refh3 d<=5000 h<=1", lambda: _check_refh3(w)),
        ("h=2 tail d<=30000", lambda: _check_h2_tail(w)),
    ]
    checks += [(f"narrow {t}", lambda t=t: _check_narrow(t, w)) for t in narrow.TYPES]
    if args.with_ii0_main:
        checks.append(("II0 main filter", lambda: _check_ii0_main(w)))
    checks.append(("vinberg u:57", _check_vinberg_114))
    if args.with_vinberg_3990:
        checks.append(("vinberg diag:30,38,14:1,1,0", _check_vinberg_3990))
    rows = []
    for name, fn in checks:
        t0 = time.perf_counter()
        ok, detail = fn()
        rows.append({"check": name, "status": "PASS" if ok else "FAIL", "detail": detail,
                     "seconds": round(time.perf_counter() - t0, 1)})
        print(f"{rows[-1]['status']}  {name}  ({detail})", file=sys.stderr)
    failed = sum(r["status"] == "FAIL" for r in rows)
    return rows, {"passed": len(rows) - failed, "failed": failed}


# Parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the result artifact to this path")
    common.add_argument("--workers", type=int, default=default_workers())

    p = argparse.ArgumentParser(prog="hyperlat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hclass", parents=[common], help="ambiguous/non-ambiguous class counts of a genus")
    s.add_argument("-D", type=int, required=True)
    s.add_argument("--mu", type=int, required=True)
    s.add_argument("--strict", action="store_true", help="reject genera that do not exist")
    s.set_defaults(fn=cmd_hclass)

    s = sub.add_parser("hnr", parents=[common], help="non-reflective central symmetry count")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--eta", type=int, required=True)
    s.set_defaults(fn=cmd_hnr)

    s = sub.add_parser("refh3", parents=[common], help="(d, eta) with small hnr")
    s.add_argument("--max-d", type=int, required=True)
    s.add_argument("--hmax", type=int, default=1)
    s.add_argument("--exact", action="store_true", help="keep only h == hmax")
    s.set_defaults(fn=cmd_refh3)

    s = sub.add_parser("fund", parents=[common], help="narrow-place enumeration stats")
    s.add_argument("--type", choices=("i1", "i0", "ii1", "ii0", "iii"), required=True)
    s.add_argument("--emit-records", metavar="PATH", help="write every record as JSON lines")
    s.set_defaults(fn=cmd_fund)

    s = sub.add_parser("fund-main", parents=[common], help="main-lattice triplets from type II0")
    s.add_argument("--double-rule", choices=("literal", "prose"), default="literal")
    s.set_defaults(fn=cmd_fund_main)

    for name, fn in (("vinberg", cmd_vinberg), ("classify", cmd_classify)):
        s = sub.add_parser(name, parents=[common], help="Vinberg's algorithm on a rank-3 lattice")
        s.add_argument("--lattice", type=parse_lattice, required=True)
        s.add_argument("--height", type=int, required=True)
        if name == "classify":
            s.add_argument("--hnr", type=int)
            s.add_argument("--d", type=int)
            s.add_argument("--eta", type=int)
        s.set_defaults(fn=fn)

    s = sub.add_parser("repro", parents=[common], help="check the published numbers")
    s.add_argument("--with-ii0-main", action="store_true")
    s.add_argument("--with-vinberg-3990", action="store_true")
    s.set_defaults(fn=cmd_repro)
    return p


def _params(args):
    skip = {"fn", "command", "format", "out", "outputs"}
    out = {}
    for k, v in vars(args).items():
        if k in skip:
            continue
        out[k] = v.describe() if hasattr(v, "describe") else v
    return out


def _csv_text(result):
    rows = result if isinstance(result, list) else [result]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        args.workers = 1
    args.outputs = []
    binquad.CACHE.load(os.environ.get(binquad.CACHE_ENV) or DEFAULT_CACHE)
    t0 = time.perf_counter()
    try:
        result, counts = args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        binquad.CACHE.save()
    result = _jsonable(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            if args.format == "csv":
                fh.write(_csv_text(result))
            else:
                json.dump(result, fh, indent=1)
                fh.write("\n")
        args.outputs.append(args.out)
    elif args.format == "csv":
        sys.stdout.write(_csv_text(result))
    manifest = {
        "command": args.command,
        "parameters": _params(args),
        "outputs": args.outputs,
        "elapsed": round(time.perf_counter() - t0, 3),
        "counts": _jsonable(counts),
        "result": result,
    }
    stream = sys.stderr if args.format == "csv" and not args.out else sys.stdout
    print(json.dumps(manifest), file=stream)
    if args.command == "repro":
        return 0 if counts["failed"] == 0 else 1
    return 0


def main(argv=None):
    sys.exit(run(argv))
