"""Command-line front end: homology tables, consistency checks, oracle tables."""

import argparse
import configparser
import csv
import io
import json
import logging
import os
import sys
import tempfile
import warnings
from fractions import Fraction

from . import engine, oracles
from .graded_core import InvalidInput
from .linalg import ConsistencyError, SparseMatrix

log = logging.getLogger("hairycalc")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

COMPLEX_ALIASES = {
    "hairy": engine.HAIRY, engine.HAIRY: engine.HAIRY,
    "koszul": engine.KOSZUL_PI, engine.KOSZUL_PI: engine.KOSZUL_PI,
    "koszul-full": engine.KOSZUL, engine.KOSZUL: engine.KOSZUL,
}

class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# matrix cache

class MatrixCache:
    """Directory of text matrices: header ``rows cols`` then ``row col num/den`` lines."""

    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)

    def path(self, name):
        return os.path.join(self.root, name + ".mat")

    def store(self, name, m: SparseMatrix):
        lines = ["%d %d" % (m.rows, m.cols)]
        for (i, j), v in m.sorted_entries():
            v = Fraction(v)
            lines.append("%d %d %d/%d" % (i, j, v.numerator, v.denominator))
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".mat")
        with os.fdopen(fd, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, self.path(name))

    def load(self, name, rows, cols):
        p = self.path(name)
        if not os.path.exists(p):
            return None
        return read_matrix(p, rows, cols)


def read_matrix(path, rows=None, cols=None):
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    try:
        r, c = int(lines[0][0]), int(lines[0][1])
        ent = {}
        for i, j, v in lines[1:]:
            ent[(int(i), int(j))] = Fraction(v)
    except (IndexError, ValueError) as exc:
        raise ConsistencyError("malformed cache file %s: %s" % (path, exc))
    if (rows is not None and r != rows) or (cols is not None and c != cols):
        raise ConsistencyError("cache file %s has shape %dx%d, expected %dx%d" % (path, r, c, rows, cols))
    return SparseMatrix(r, c, ent)


# ---------------------------------------------------------------------------
# configuration

def int_list(text):
    try:
        out = [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError("expected a comma-separated list of integers, got %r" % (text,))
    if not out:
        raise UsageError("empty integer list")
    return out


def parse_truncation(text):
    if text is None or text == "":
        return None
    vals = int_list(text)
    if min(vals) < 0:
        raise UsageError("truncation bounds must be >= 0")
    return vals[0] if len(vals) == 1 and "," not in str(text) else tuple(vals)


def load_config(path):
    """Flatten a key=value config file; keys from all sections, [job] last wins."""
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise UsageError("cannot read config file %s" % path)
    out = {}
    for section in cp.sections():
        for k, v in cp.items(section):
            out[k.replace("-", "_")] = v.strip().strip('"')
    return out


def resolve(args):
    """Merge config file values under command-line flags; validate."""
    cfg = load_config(args.config) if getattr(args, "config", None) else {}

    def pick(name, default=None):
        v = getattr(args, name, None)
        if v is not None:
            return v
        return cfg.get(name, default)

    m = pick("m")
    d = pick("d")
    if m is None or d is None:
        raise UsageError("--m and --d are required (flag or config)")
    job = {"m": tuple(int_list(m)), "d": int(d)}
    S, T = pick("max_hairs"), pick("max_complexity")
    if S is None or T is None:
        raise UsageError("--max-hairs and --max-complexity are required (flag or config)")
    job["S"], job["T"] = int(S), int(T)
    if job["S"] < 0 or job["T"] < 0 or min(job["m"]) < 1:
        raise UsageError("need S, T >= 0 and m_i >= 1")
    kind = str(pick("complex", "hairy"))
    if kind not in COMPLEX_ALIASES:
        raise UsageError("unknown complex %r" % kind)
    job["kind"] = COMPLEX_ALIASES[kind]
    lo, hi = pick("min_degree"), pick("max_degree")
    job["window"] = (None if lo is None else int(lo), None if hi is None else int(hi))
    job["truncate"] = parse_truncation(pick("truncate"))
    if isinstance(job["truncate"], tuple) and len(job["truncate"]) != len(job["m"]):
        raise UsageError("per-color truncation needs one bound per color")
    if job["truncate"] is not None and job["kind"] == engine.HAIRY:
        raise UsageError("truncation applies to the Koszul complexes only")
    job["workers"] = int(pick("workers", 1))
    if job["workers"] < 1:
        raise UsageError("--workers must be >= 1")
    job["cache_dir"] = os.environ.get("HAIRYCALC_CACHE") or pick("cache_dir")
    job["format"] = str(pick("format", "json"))
    if job["format"] not in ("json", "csv"):
        raise UsageError("--format must be json or csv")
    mod = pick("modular", False)
    job["modular"] = mod if isinstance(mod, bool) else str(mod).lower() in ("1", "true", "yes")
    job["output"] = pick("output")
    return job


# ---------------------------------------------------------------------------
# output

def emit(params, records, meta, fmt, output=None):
    if fmt == "json":
        text = json.dumps({"params": params, "records": records, "meta": meta}, indent=1) + "\n"
    else:
        buf = io.StringIO()
        keys = [k for k in (records[0] if records else {}) if k != "params" and k not in params]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(params) + keys)
        for rec in records:
            row = [params[k] for k in params] + [rec.get(k) for k in keys]
            w.writerow([_cell(v) for v in row])
        text = buf.getvalue()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(v):
    if isinstance(v, (list, tuple)):
        return ";".join(map(str, v))
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def _params(job):
    return {"m": list(job["m"]), "d": job["d"], "complex": job["kind"],
            "truncate": list(job["truncate"]) if isinstance(job["truncate"], tuple) else job["truncate"]}


def homology_records(job, table):
    params = _params(job)
    lo, hi = job["window"]
    records = []
    for key in sorted(table.blocks):
        zero = table.zero_discarded.get(key, {})
        for x in table.blocks[key]:
            if (lo is not None and x.degree < lo) or (hi is not None and x.degree > hi):
                continue
            records.append({"params": params, "s": list(key.s), "t": key.t, "degree": x.degree,
                            "chain_dim": x.chain_dim, "rank_in": x.rank_in, "rank_out": x.rank_out,
                            "homology_dim": x.homology_dim,
                            "zero_generators_discarded": zero.get(x.degree, 0),
                            "wall_time_ms": None})
    records.sort(key=lambda r: (r["s"], r["t"], r["degree"]))
    return params, records


def cmd_homology(job):
    cache = MatrixCache(job["cache_dir"]) if job["cache_dir"] else None
    table = engine.compute_table(job["m"], job["d"], job["S"], job["T"], job["kind"],
                                 truncation=job["truncate"], workers=job["workers"],
                                 cache=cache, verify_modular=job["modular"])
    params, records = homology_records(job, table)
    meta = {"below_theorem_range": table.meta["below_theorem_range"],
            "codimension": table.meta["codimension"],
            "timings_ms": table.meta["timings_ms"]}
    emit(params, records, meta, job["format"], job["output"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# checks

def run_checks(m, d, S, T, cache=None, verify_modular=False):
    """List of (name, block slug or '', ok, detail)."""
    results = []
    below = not engine.codimension_ok(m, d)

    def record(name, where, ok, detail=""):
        results.append({"check": name, "block": where, "ok": bool(ok), "detail": detail})

    euler_by_kind = {}
    for kind in (engine.HAIRY, engine.KOSZUL_PI):
        for s, t in engine.grid_keys(m, S, T):
            key = engine.BlockKey(m, d, s, t, kind)
            try:
                block, slices = engine.homology_of(key, cache=cache, verify_modular=verify_modular)
                record("d_squared_zero", key.slug(), True)
            except ConsistencyError as exc:
                record("d_squared_zero", key.slug(), False, str(exc))
                continue
            try:
                euler_by_kind[(kind, s, t)] = engine.euler(block, slices)
                record("euler_consistency", key.slug(), True)
            except ConsistencyError as exc:
                record("euler_consistency", key.slug(), False, str(exc))
            euler_by_kind[(kind, s, t, "h")] = {x.degree: x.homology_dim for x in slices if x.homology_dim}
    for s, t in engine.grid_keys(m, S, T):
        a = euler_by_kind.get((engine.HAIRY, s, t, "h"))
        b = euler_by_kind.get((engine.KOSZUL_PI, s, t, "h"))
        where = engine.BlockKey(m, d, s, t).slug()
        if a is None or b is None:
            record("hairy_vs_koszul", where, False, "block failed to build")
            continue
        record("hairy_vs_koszul", where, a == b, "" if a == b else "hairy %r koszul %r" % (a, b))
        ea, eb = euler_by_kind.get((engine.HAIRY, s, t)), euler_by_kind.get((engine.KOSZUL_PI, s, t))
        record("euler_hairy_vs_koszul", where, ea == eb, "" if ea == eb else "%r vs %r" % (ea, eb))
    for s, t in engine.grid_keys(m, S, T):
        if t != sum(s) - 1:
            continue
        where = engine.BlockKey(m, d, s, t).slug()
        got = euler_by_kind.get((engine.HAIRY, s, t, "h"))
        want = oracles.tree_homology_oracle(m, d, s)
        record("tree_vs_lie_oracle", where, got == want, "" if got == want else "%r vs %r" % (got, want))
    if below:
        record("pi0_vs_whitehead", "", True, "skipped: below theorem range")
        record("genus_degree_sweep", "", True, "skipped: below theorem range")
    else:
        need = engine.degree_zero_hair_bound(m, d)
        if need > S or need - 1 > T:
            record("pi0_vs_whitehead", "", True, "skipped: window smaller than S=%d, T=%d" % (need, need - 1))
        else:
            h0 = sum(v.get(0, 0) for k, v in euler_by_kind.items() if len(k) == 4 and k[0] == engine.HAIRY)
            w = oracles.whitehead_kernel_dim(m, d)
            record("pi0_vs_whitehead", "", h0 == w, "H0=%d whitehead=%d" % (h0, w))
        bad = engine.genus_degree_violations(m, d, S, T)
        record("genus_degree_sweep", "", not bad, "%d violations" % len(bad))
    return results, below


def cmd_check(job):
    cache = MatrixCache(job["cache_dir"]) if job["cache_dir"] else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", engine.BelowTheoremRange)
        results, below = run_checks(job["m"], job["d"], job["S"], job["T"], cache, job["modular"])
    failed = [r for r in results if not r["ok"]]
    params = _params(job)
    meta = {"below_theorem_range": below, "passed": len(results) - len(failed), "failed": len(failed),
            "first_failure": failed[0] if failed else None}
    if job["format"] == "json":
        emit(params, results, meta, "json", job["output"])
    else:
        emit(params, results, meta, "csv", job["output"])
    if below:
        print("warning: below-theorem-range (d - max m <= 2)", file=sys.stderr)
    if failed:
        f = failed[0]
        print("check failed: %s %s %s" % (f["check"], f["block"], f["detail"]), file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracles

def cmd_oracle(args):
    fmt = args.format or "json"
    if args.oracle == "config-poincare":
        params = {"k": args.k, "n": args.n}
        records = [{"degree": a, "coefficient": c} for a, c in oracles.config_poincare(args.k, args.n).items()]
    elif args.oracle == "lie":
        if args.degrees:
            degs = int_list(args.degrees)
        else:
            if args.m is None or args.d is None:
                raise UsageError("lie needs --degrees or --m and --d")
            degs = list(oracles.hair_generator_degrees(int_list(args.m), args.d))
        params = {"generator_degrees": degs, "max_weight": args.max_weight}
        records = [{"weight": list(w), "degree": deg, "dim": n}
                   for (w, deg), n in sorted(oracles.free_graded_lie_dims(degs, args.max_weight).items())]
    elif args.oracle == "whitehead":
        m = int_list(args.m)
        params = {"m": m, "d": args.d}
        records = [{"m": m, "d": args.d, "dim": oracles.whitehead_kernel_dim(m, args.d)}]
    elif args.oracle == "kq":
        from .koszul import kq_dimension
        m, s, k = int_list(args.m), int_list(args.s), int_list(args.k)
        if not len(m) == len(s) == len(k):
            raise UsageError("--m, --s and --k need the same length")
        deg, dim = kq_dimension(m, s, k)
        params = {"m": m, "s": s, "k": k}
        records = [{"degree": deg, "dim": dim}]
    elif args.oracle == "tree":
        m, s = int_list(args.m), int_list(args.s)
        params = {"m": m, "d": args.d, "s": s}
        records = [{"degree": a, "dim": n} for a, n in oracles.tree_homology_oracle(m, args.d, s).items()]
    else:
        raise UsageError("unknown oracle %r" % args.oracle)
    emit(params, records, {}, fmt, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _job_flags(p):
    p.add_argument("--config", help="key=value config file; flags take precedence")
    p.add_argument("--m", help="comma-separated codimension data, e.g. 2,3")
    p.add_argument("--d", type=int, help="ambient dimension")
    p.add_argument("--max-hairs", dest="max_hairs", type=int, help="bound on total hairs S")
    p.add_argument("--max-complexity", dest="max_complexity", type=int, help="bound on complexity T")
    p.add_argument("--complex", choices=sorted(COMPLEX_ALIASES), help="complex to compute (default hairy)")
    p.add_argument("--min-degree", dest="min_degree", type=int)
    p.add_argument("--max-degree", dest="max_degree", type=int)
    p.add_argument("--truncate", help="vertex-count bound n or per-color n1,n2,...")
    p.add_argument("--workers", type=int)
    p.add_argument("--cache-dir", dest="cache_dir", help="matrix cache (HAIRYCALC_CACHE overrides)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--modular", action="store_const", const=True, help="cross-check ranks modulo primes")
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="hairycalc", description="Hairy graph and Koszul complex homology.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _job_flags(sub.add_parser("homology", help="homology table per (s, t, degree)"))
    _job_flags(sub.add_parser("check", help="run the consistency and oracle checks"))
    po = sub.add_parser("oracle", help="combinatorial oracle tables")
    po.add_argument("oracle", choices=("config-poincare", "lie", "whitehead", "kq", "tree"))
    po.add_argument("--k", help="points (config-poincare) or per-color vertex counts (kq)")
    po.add_argument("--n", type=int)
    po.add_argument("--m")
    po.add_argument("--d", type=int)
    po.add_argument("--s")
    po.add_argument("--degrees")
    po.add_argument("--max-weight", dest="max_weight", type=int, default=4)
    po.add_argument("--format", choices=("json", "csv"))
    po.add_argument("--output")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "oracle":
            if args.oracle == "config-poincare":
                if args.k is None or args.n is None:
                    raise UsageError("config-poincare needs --k and --n")
                args.k = int(args.k)
            return cmd_oracle(args)
        job = resolve(args)
        if args.command == "homology":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", engine.BelowTheoremRange)
                code = cmd_homology(job)
            if not engine.codimension_ok(job["m"], job["d"]):
                print("warning: below-theorem-range (d - max m <= 2)", file=sys.stderr)
            return code
        return cmd_check(job)
    except (UsageError, InvalidInput) as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print("consistency error: %s" % exc, file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
