"""brandtlab command line.

    brandtlab classset --level 11,1,1
    brandtlab verify --level 11,1,2 --d -15
    brandtlab examples
    brandtlab scan --d -4 --range 11..100

Exit codes: 0 ok, 2 invalid level, 3 identity mismatch, 4 not admissible,
5 example mismatch.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd

from . import formulas as F
from .arith import factorize, is_squarefree, primes_in
from .cache import SCHEMA, Cache
from .embeddings import admissible, stability_status
from .errors import (
    BrandtLabError, HypothesisViolated, InvalidLevel, NotAdmissible, NotInStableRange,
    UnsupportedShape,
)
from .quadfield import field_from_discriminant, make_field
from .quatalg import mass, validate_level
from .spectra import spectral_data

EXIT_OK, EXIT_LEVEL, EXIT_MISMATCH, EXIT_ADMISSIBLE, EXIT_EXAMPLES = 0, 2, 3, 4, 5


def parse_level(s):
    try:
        parts = [int(x) for x in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level {s!r}, expected N1,N2,M")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bad level {s!r}, expected N1,N2,M")
    return tuple(parts)


def parse_list(s):
    return [int(x) for x in s.split(",") if x]


def parse_range(s):
    lo, _, hi = s.partition("..")
    return int(lo), int(hi)


def enc(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, dict):
        return {str(k): enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [enc(x) for x in v]
    if hasattr(v, "to_json"):
        return v.to_json()
    return str(v)


def emit_json(obj):
    print(json.dumps(enc(obj), indent=1, sort_keys=True, ensure_ascii=False))


def emit_table(header, rows):
    rows = [[str(enc(c)) if not isinstance(c, str) else c for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("  ".join("-" * w for w in widths))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


# ---------------------------------------------------------------------------


def cmd_classset(args):
    lt = validate_level(*args.level)
    cache = Cache(args.cache_dir)
    cs = cache.class_set(*lt.astuple(), brandt_upto=args.hecke_max)
    m = mass(lt)
    out = {
        "schema": SCHEMA,
        "level": list(lt.astuple()),
        "D_B": lt.D_B,
        "algebra": [cs.algebra.a, cs.algebra.b],
        "n": cs.n,
        "weights": list(cs.weights),
        "norms": cs.norms,
        "mass": m,
        "mass_check": cs.mass() == m,
    }
    if args.output == "json":
        emit_json(out)
    else:
        emit_table(["field", "value"], [[k, enc(v)] for k, v in out.items() if k != "schema"])
    return EXIT_OK if out["mass_check"] else EXIT_MISMATCH


def _field(d):
    """Squarefree d means Q(sqrt d); otherwise d is read as a fundamental
    discriminant, so --d -4 and --d -1 both give Q(i)."""
    if is_squarefree(d):
        return make_field(d)
    return field_from_discriminant(d)


def _ms(lt, args):
    bad = lt.N1prime * lt.N2
    if args.m:
        return [m for m in args.m if gcd(m, bad) == 1]
    return [m for m in range(1, args.hecke_max + 1) if gcd(m, bad) == 1]


def verification_reports(lt, K, ms):
    """(checks, notes): reports that must pass, and informational reports."""
    checks, notes = [], []
    for m in ms:
        checks.append(F.verify_double_average(lt, K, m, "cusp"))
        checks.append(F.verify_double_average(lt, K, m, "full"))
        checks.append(F.column_orthogonality_report(lt, m))
    checks.append(F.semistable_bounds_check(lt, K))
    checks.append(F.embedding_identity_report(lt, K))
    fac = factorize(lt.N1)
    if lt.N2 == lt.M == 1 and len(fac) == 1 and fac[0][1] % 2:
        p, r = fac[0][0], (fac[0][1] - 1) // 2
        failed = F.prime_hypotheses(p, r, K)
        rep = F.verify_theorem_prime(p, r, K, allow_excluded=bool(failed))
        (notes if failed else checks).append(rep)
    if F.thm2_hypotheses(lt, K):
        checks.append(F.verify_thm2(lt, K))
    if lt.N2 == 1:
        try:
            checks.append(F.verify_stable_single(lt, K))
        except NotInStableRange as e:
            notes.append(F.VerificationReport("stable-single", None, None, False, notes=[str(e)]))
    return checks, notes


def cmd_verify(args):
    lt = validate_level(*args.level)
    K = _field(args.d)
    ok, why = admissible(K, lt)
    if not ok:
        raise NotAdmissible(why)
    cache = Cache(args.cache_dir)
    cache.class_set(*lt.astuple(), brandt_upto=args.hecke_max)
    checks, notes = verification_reports(lt, K, _ms(lt, args))
    cache.record_class_map(lt, F._cmd(lt, K))
    cache.record_eigensystems(lt, spectral_data(*lt.astuple()))
    st = stability_status(F._cmd(lt, K))
    good = all(r.exact_match for r in checks)
    if args.output == "json":
        emit_json({
            "schema": SCHEMA,
            "level": list(lt.astuple()),
            "D_K": K.D_K,
            "stability": st.status,
            "tolerance": args.tolerance,
            "checks": [r.to_json() for r in checks],
            "notes": [r.to_json() for r in notes],
            "all_pass": good,
        })
    else:
        rows = [[r.name, _inp(r), _fmt(r.lhs), _fmt(r.rhs), "pass" if r.exact_match else "FAIL"] for r in checks]
        rows += [[r.name, _inp(r), _fmt(r.lhs), _fmt(r.rhs), "note: " + "; ".join(r.notes)] for r in notes]
        emit_table(["identity", "args", "lhs", "rhs", "result"], rows)
        print(f"stability: {st.status}")
    return EXIT_OK if good else EXIT_MISMATCH


def _inp(r):
    m = r.inputs.get("m")
    return f"m={m}" if m is not None else ""


def _fmt(v):
    if isinstance(v, tuple):
        return " <= ".join(str(x) for x in v)
    return str(v)


def cmd_examples(args):
    from .golden import all_rows

    rows = all_rows()
    bad = [r for r in rows if r[2] != r[3]]
    if args.output == "json":
        emit_json({
            "schema": SCHEMA,
            "rows": [{"example": a, "quantity": b, "expected": c, "computed": d, "ok": c == d}
                     for a, b, c, d in rows],
            "all_pass": not bad,
        })
    else:
        emit_table(["example", "quantity", "expected", "computed", "ok"],
                   [[a, b, c, d, "pass" if c == d else "FAIL"] for a, b, c, d in rows])
    if bad:
        for a, b, c, d in bad:
            print(f"mismatch: Example {a} {b}: expected {c}, got {d}", file=sys.stderr)
        return EXIT_EXAMPLES
    return EXIT_OK


def scan_row(job):
    shape, N, d = job
    row = {"N": N, "d": d}
    try:
        K = _field(d)
        if shape == "prime":
            lt = (N, 1, 1)
        elif shape == "p2":
            lt = (1, N, 1)
        else:
            raise UnsupportedShape(f"unknown shape {shape}")
        res = F.lower_bounds_and_certificates(K, *lt)
        row["bound"] = res["bound"]
        row["certificate"] = res["bound"] > 0
        if "exact_average" in res:
            row["exact_average"] = res["exact_average"]
            row["average_positive"] = res["exact_average"] > 0
    except (UnsupportedShape, NotAdmissible, InvalidLevel) as e:
        row["error"] = type(e).__name__
        row["detail"] = str(e)
    return row


def _scan_jobs(args):
    lo, hi = args.range
    jobs = []
    for p in primes_in(lo, hi):
        if args.shape == "prime":
            jobs.append(("prime", p, args.d))
        else:
            if p == 2:
                continue
            d = args.d if args.d is not None else -p
            jobs.append(("p2", p * p, d))
    return jobs


def cmd_scan(args):
    if args.shape == "prime" and args.d is None:
        raise SystemExit("scan --shape prime needs --d")
    jobs = _scan_jobs(args)
    if args.jobs > 1 and jobs:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(scan_row, jobs))
    else:
        rows = [scan_row(j) for j in jobs]
    out = []
    for r in rows:
        r = dict(r)
        if isinstance(r.get("bound"), F.QuadraticSurd):
            r["bound"] = str(r["bound"])
        out.append(r)
    if args.output == "json":
        emit_json(out)
    else:
        emit_table(["N", "d", "bound", "certificate", "exact_average"],
                   [[r["N"], r["d"], r.get("bound", r.get("error")), r.get("certificate", ""),
                     r.get("exact_average", "")] for r in out])
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--output", choices=["table", "json"], default="table")
    common.add_argument("--hecke-max", type=int, default=13)
    common.add_argument("--tolerance", type=Fraction, default=Fraction(0))

    ap = argparse.ArgumentParser(prog="brandtlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classset", parents=[common], help="class set summary")
    p.add_argument("--level", type=parse_level, required=True)
    p.set_defaults(func=cmd_classset)

    p = sub.add_parser("verify", parents=[common], help="run the identity checks")
    p.add_argument("--level", type=parse_level, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=parse_list, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("examples", parents=[common], help="recompute the worked examples")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("scan", parents=[common], help="nonvanishing certificates over a range")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--range", type=parse_range, default=(11, 100), help="lo..hi over primes")
    p.add_argument("--shape", choices=["prime", "p2"], default="prime")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.hecke_max < 1:
        print("error: --hecke-max must be >= 1", file=sys.stderr)
        return EXIT_LEVEL
    try:
        return args.func(args)
    except InvalidLevel as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_LEVEL
    except NotAdmissible as e:
        print(f"error: NotAdmissible: {e}", file=sys.stderr)
        return EXIT_ADMISSIBLE
    except HypothesisViolated as e:
        print(f"error: HypothesisViolated: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except BrandtLabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
