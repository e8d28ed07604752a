"""Command-line entry point: one subcommand per verifiable claim.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors (bad flags, bounds beyond the memory budget).
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import congruence, hecke, orbit, reciprocity, sieve, spectrum, surface
from .errors import CacheFormatError, CheckFailure, DomainError, ResourceLimitError

log = logging.getLogger("pentagon_periods")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXPECTED_MISSING = (2, 12, 14, 18)
FIG1_PERIODS = (6, 20, 80)


class UsageError(Exception):
    pass


# ---- helpers -------------------------------------------------------------------


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    return str(obj)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _vector(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--vector takes a,b,c,d")
    try:
        v = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("--vector entries must be integers") from None
    if min(v) < 0 or not any(v):
        raise argparse.ArgumentTypeError("--vector entries must be >= 0 and not all zero")
    return v


def cache_dir(args):
    """--cache-dir beats PENTA_CACHE; None disables caching."""
    path = args.cache_dir or os.environ.get("PENTA_CACHE")
    return Path(path) if path else None


def load_census(bound, args):
    directory = cache_dir(args)
    if directory is not None:
        path = directory / f"orbit_l{bound}.pspc"
        if path.exists():
            try:
                census = orbit.read_census(path)
                if census.bound == bound:
                    log.info("loaded census from %s", path)
                    return census
            except CacheFormatError as exc:
                log.warning("ignoring cache %s: %s", path, exc)
    census = orbit.orbit_enumerate(bound, threads=args.threads)
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
        orbit.write_census(census, directory / f"orbit_l{bound}.pspc")
    return census


class Checks:
    def __init__(self):
        self.results = {}

    def add(self, name, ok, detail=None):
        self.results[name] = {"ok": bool(ok)} if detail is None else {"ok": bool(ok), "detail": detail}

    def merge(self, prefix, other):
        for name, res in other.results.items():
            self.results[f"{prefix}.{name}"] = res

    @property
    def passed(self):
        return all(r["ok"] for r in self.results.values())

    def failed(self):
        return [name for name, r in self.results.items() if not r["ok"]]


# ---- subcommands ---------------------------------------------------------------


def cmd_spectrum(args):
    X = args.max_period if args.max_period else 2 * (args.max_ell or 2000)
    if X < 2:
        raise UsageError("--max-period must be >= 2")
    census = load_census(max(X // 2, 1), args)
    spec = spectrum.spectrum_scan(X, census=census)
    payload = spec.to_report()
    checks = Checks()
    expected = [n for n in EXPECTED_MISSING if n <= X]
    checks.add("missing_asym_matches_conjecture", payload["missing_asym"] == expected,
               {"got": payload["missing_asym"], "expected": expected})
    for n in FIG1_PERIODS:
        if n <= X:
            checks.add(f"contains_{n}", spec.contains_asym(n))
    table = None
    if args.format == "csv":
        rows = [(n, int(spec.asym[n]), int(spec.sym[n])) for n in range(2, X + 1, 2)]
        table = (["n", "asymmetric", "symmetric"], rows)
    return payload, checks, table


def cmd_families(args):
    R = args.bound if args.bound is not None else 50
    printed = spectrum.family_generate_verify(R, raise_on_failure=False)
    derived = spectrum.family_generate_verify(R, families=spectrum.DERIVED_FAMILIES, raise_on_failure=False)
    checks = Checks()
    payload = {"R": R, "families": {}}
    for fam, dfam in zip(spectrum.FAMILIES, spectrum.DERIVED_FAMILIES):
        fails = printed[fam.index]["failures"]
        payload["families"][str(fam.index)] = {
            "printed": {"c_mn": fam.c_mn, "c_m": fam.c_m, "c_n": fam.c_n, "const": fam.const},
            "derived": {"c_mn": dfam.c_mn, "c_m": dfam.c_m, "c_n": dfam.c_n, "const": dfam.const},
            "checked": printed[fam.index]["checked"],
            "printed_failures": len(fails),
            "first_failure": fails[0] if fails else None,
        }
        checks.add(f"family{fam.index}_printed_polynomial", not fails)
        checks.add(f"family{fam.index}_derived_polynomial", not derived[fam.index]["failures"])
    K = min(R, 12)
    bad = [
        (m, n, k)
        for m in range(K + 1)
        for n in range(K + 1)
        for k in range(K + 1)
        if hecke.trilinear_bottom_row(m, n, k) != hecke.trilinear_bottom_row_product(m, n, k)
    ]
    checks.add("trilinear_bottom_row_vs_product", not bad, {"range": K, "mismatches": bad[:5]})
    return payload, checks, None


def cmd_congruence(args):
    q = args.q or 12
    checks = Checks()
    amb = congruence.ambient_order(q)
    if amb > congruence.CLOSURE_BUDGET:
        fac = sieve.factorize(q)
        if not (args.slow and len(fac) == 1 and list(fac.values())[0] == 2):
            raise UsageError(f"Gamma(mod {q}) exceeds the closure budget (use --slow for q = p^2)")
        p = list(fac)[0]
        kernel, small = congruence.kernel_order_schreier(p, p)
        order = kernel * small
        payload = {"q": q, "gamma_order": order, "ambient_order": amb, "index": amb // order, "method": "schreier-kernel"}
    else:
        payload = congruence.gamma_report(q, threads=args.threads)
        payload["method"] = "closure"
    if q == 12:
        checks.add("index_72", payload["index"] == 72, payload["index"])
    fac = sieve.factorize(q)
    if all(e == 1 for e in fac.values()) and all(p not in (2, 3) for p in fac):
        checks.add("surjective_squarefree_coprime_to_6", payload["index"] == 1, payload["index"])
    checks.add("order_divides_ambient", amb % payload["gamma_order"] == 0)
    return payload, checks, None


def cmd_admissible(args):
    q = args.q or 4
    payload = congruence.admissible_residues(q)
    checks = Checks()
    evens = congruence.even_residues(q)
    checks.add("asymmetric_residues_are_all_evens", payload["asymmetric"] == evens, {"expected": evens})
    return payload, checks, None


def cmd_sieve_quad(args):
    A = args.A if args.A is not None else 25
    B = args.B if args.B is not None else 6
    C = args.C if args.C is not None else 13
    X = args.limit if args.limit is not None else 10**4
    domain = sieve.DOMAIN_POS if args.domain == "pos" else sieve.DOMAIN_NONNEG
    form = sieve.QuadraticForm(A, B, C)
    census = sieve.quad_unrepresented_census(form, X, domain)
    rng = np.random.default_rng(0)
    sample = rng.integers(0, X + 1, size=min(10**4, X + 1))
    mismatches = [int(n) for n in sample if sieve.quad_represents(form, int(n), domain)[0] != census.represented[n]]
    checks = Checks()
    checks.add("census_agrees_with_divisor_test", not mismatches, mismatches[:5])
    payload = {
        "form": {"A": A, "B": B, "C": C},
        "domain": args.domain,
        "X": X,
        "unrepresented_count": census.count,
        "unrepresented_fraction": census.fraction,
        "unrepresented_sample": census.unrepresented[:50].tolist(),
    }
    table = None
    if args.format == "csv":
        rows = []
        for n in range(X + 1):
            wit = census.witness(n)
            rows.append((n, int(census.represented[n]), *(wit if wit else ("", ""))))
        table = (["n", "represented", "witness_x", "witness_y"], rows)
    return payload, checks, table


def cmd_sieve_cubic(args):
    X = args.limit if args.limit is not None else 1000
    layers = args.layers or 3
    gap = sieve.cubic_layer_census(X, layers)
    checks = Checks()
    for name, value in gap.checks.items():
        if isinstance(value, bool):
            checks.add(name, value)
    limit = 10**4
    payload = {
        "X": X,
        "layers": layers,
        "counts": {str(k): v for k, v in gap.counts().items()},
        "unrepresented": {str(k): v[:limit].tolist() for k, v in gap.unrepresented.items()},
        "truncated": any(len(v) > limit for v in gap.unrepresented.values()),
        "layer3_stated_description_symdiff": gap.checks.get("layer3_stated_description_symdiff"),
    }
    table = None
    if args.format == "csv":
        # smallest layer z whose values reach n
        layer_of = np.zeros(X + 1, dtype=np.int64)
        for k in sorted(gap.unrepresented, reverse=True):
            layer_of[1:] = np.where(np.isin(np.arange(1, X + 1), gap.unrepresented[k]), layer_of[1:], k)
        rows = [(n, int(layer_of[n] > 0), int(layer_of[n]) or "") for n in range(1, X + 1)]
        table = (["n", "represented", "layer"], rows)
    return payload, checks, table


def cmd_recip_orbit(args):
    N = args.bound if args.bound is not None else 10**4
    payload = reciprocity.square_miss_scan(N, raise_on_failure=False)
    checks = Checks()
    checks.add("jacobi_symbol_is_minus_one", payload["symbols"] == [-1], payload["symbols"])
    checks.add("no_square_coordinates", not payload["coordinate_squares"], payload["coordinate_squares"][:10])
    checks.add("odd_squares_all_admissible", payload["odd_squares_all_1_mod_4"])
    return payload, checks, None


def cmd_recip_scan(args):
    X = args.limit if args.limit is not None else 10**5
    which = args.poly or "f-literal"
    payload = reciprocity.poly_value_scan(which, X, include_zero=args.include_zero)
    checks = Checks()
    if which != "f-paper" and not args.include_zero:
        # values of the other three are orbit coordinates of (3, 5)
        checks.add("no_squares", not payload["squares_found"], payload["squares_found"][:10])
    return payload, checks, None


def cmd_simulate(args):
    calib_census = orbit.orbit_enumerate(12)
    table = surface.calibrate_segments(calib_census)
    checks = Checks()
    if args.max_ell:
        census = orbit.orbit_enumerate(args.max_ell, threads=args.threads)
        vectors = [tuple(v) for v in census.vectors.tolist()]
    else:
        vectors = [args.vector or (0, 1, 1, 0)]
        census = orbit.orbit_enumerate(max(sum(vectors[0]), 1))
    results = []
    for v in vectors:
        tr = surface.trace_geodesic(v, record_path=bool(args.svg))
        target = (v[0], v[1], v[2], v[3])
        in_orbit = v in census
        hol = [str(h) for h in tr.holonomy] if tr.holonomy else None
        entry = {
            "vector": list(v),
            "in_orbit": in_orbit,
            "closed": tr.closed,
            "holonomy": hol,
            "crossings": tr.crossings,
            "counters": list(tr.counters(table)),
            "pentagon_wall_crossings": 2 * sum(tr.counters(table)),
            "steps": tr.steps,
            "side": tr.side,
            "sector": tr.sector,
        }
        results.append(entry)
        if in_orbit:
            exact = surface._exact_target(target)
            checks.add(f"{v}.holonomy", tr.closed and tr.holonomy == exact)
            checks.add(f"{v}.counters", tuple(tr.counters(table)) == target)
        if args.svg and len(vectors) == 1:
            Path(args.svg).write_text(surface.svg_path(tr))
    payload = {"segment_table": table.to_dict(), "traces": results}
    return payload, checks, None


def cmd_verify_identities(args):
    results = hecke.displayed_identities()
    checks = Checks()
    for name, (lhs, rhs, ok) in results.items():
        checks.add(name, ok, None if ok else {"got": str(lhs), "expected": str(rhs)})
    payload = {name: ok for name, (_, _, ok) in results.items()}
    return payload, checks, None


def cmd_all_checks(args):
    """Aggregate every module's default assertion suite."""
    checks = Checks()
    payload = {}
    t0 = time.time()

    def sub(name, fn, **overrides):
        ns = argparse.Namespace(**{**vars(args), **overrides})
        start = time.time()
        try:
            p, c, _ = fn(ns)
        except CheckFailure as exc:
            checks.add(f"{name}.error", False, str(exc))
            return
        payload[name] = {"seconds": round(time.time() - start, 2), "passed": c.passed, "failed": c.failed()}
        checks.merge(name, c)

    sub("verify-identities", cmd_verify_identities)
    sub("spectrum", cmd_spectrum, max_period=4000, max_ell=None, format="json")
    sub("families", cmd_families, bound=50)
    for q in (12, 5, 7, 11, 13):
        sub(f"congruence-{q}", cmd_congruence, q=q)
    try:
        rep = congruence.index_and_multiplicativity(threads=args.threads, raise_on_failure=False)
        for name, r in rep["checks"].items():
            checks.add(f"congruence.{name}", r["ok"], {"got": r["got"], "expected": r["expected"]})
        lift = congruence.lifting_ratio_check(slow=args.slow, raise_on_failure=False)
        for name, r in lift.items():
            checks.add(f"lifting.{name}", r["ok"], r)
    except CheckFailure as exc:
        checks.add("congruence.error", False, str(exc))
    for q in (3, 4, 5, 7, 8, 9, 12):
        sub(f"admissible-{q}", cmd_admissible, q=q)
    sub("sieve-quad", cmd_sieve_quad, A=25, B=6, C=13, limit=10**4, domain="nonneg", format="json")
    sub("sieve-cubic", cmd_sieve_cubic, limit=10**6, layers=3, format="json")
    sub("recip-orbit", cmd_recip_orbit, bound=10**7)
    sub("recip-scan", cmd_recip_scan, poly="f-literal", limit=10**7, include_zero=False)
    sub("simulate", cmd_simulate, max_ell=30, vector=None, svg=None)
    payload["seconds"] = round(time.time() - t0, 2)
    return payload, checks, None


COMMANDS = {
    "spectrum": cmd_spectrum,
    "families": cmd_families,
    "congruence": cmd_congruence,
    "admissible": cmd_admissible,
    "sieve-quad": cmd_sieve_quad,
    "sieve-cubic": cmd_sieve_cubic,
    "recip-orbit": cmd_recip_orbit,
    "recip-scan": cmd_recip_scan,
    "simulate": cmd_simulate,
    "verify-identities": cmd_verify_identities,
    "all-checks": cmd_all_checks,
}
CSV_COMMANDS = {"spectrum", "sieve-quad", "sieve-cubic"}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--slow", action="store_true", help="include slow checks (mod 25 lifting)")
    common.add_argument("--cache-dir", help="orbit census cache directory (overrides PENTA_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pentagon-periods", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("spectrum", parents=[common], help="asymmetric period census")
    p.add_argument("--max-period", type=_positive)
    p.add_argument("--max-ell", type=_positive)
    p = subs.add_parser("families", parents=[common], help="the five residue families")
    p.add_argument("--bound", type=int, help="check 0 <= m', n' <= bound")
    p = subs.add_parser("congruence", parents=[common], help="Gamma(mod q) order and index")
    p.add_argument("--q", type=_positive)
    p = subs.add_parser("admissible", parents=[common], help="period residues mod q")
    p.add_argument("--q", type=_positive)
    p = subs.add_parser("sieve-quad", parents=[common], help="unrepresented values of Axy + Bx + Cy")
    p.add_argument("--A", type=_positive)
    p.add_argument("--B", type=int)
    p.add_argument("--C", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--domain", choices=("pos", "nonneg"), default="nonneg")
    p = subs.add_parser("sieve-cubic", parents=[common], help="layers of xyz + x + y + z")
    p.add_argument("--limit", type=_positive)
    p.add_argument("--layers", type=int, choices=(1, 2, 3))
    p = subs.add_parser("recip-orbit", parents=[common], help="Jacobi symbols and squares on the (3, 5) orbit")
    p.add_argument("--bound", type=_positive)
    p = subs.add_parser("recip-scan", parents=[common], help="values of the reciprocity polynomials")
    p.add_argument("--poly", choices=reciprocity.POLYS)
    p.add_argument("--limit", type=_positive)
    p.add_argument("--include-zero", action="store_true", help="allow zero exponents in the semigroup words")
    p = subs.add_parser("simulate", parents=[common], help="exact geodesic trace on the golden L")
    p.add_argument("--vector", type=_vector)
    p.add_argument("--max-ell", type=_positive, help="trace every orbit vector with l <= this")
    p.add_argument("--svg", help="write the traced path as SVG")
    subs.add_parser("verify-identities", parents=[common], help="displayed matrix identities")
    subs.add_parser("all-checks", parents=[common], help="run every default check")
    return parser


def run_command(argv):
    """Parse and run; returns (exit code, report dict, rendered text)."""
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    if args.format == "csv" and args.command not in CSV_COMMANDS:
        parser.error(f"--format csv is not available for {args.command}")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    report = {
        "command": ["pentagon-periods", *argv],
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }
    try:
        payload, checks, table = COMMANDS[args.command](args)
    except (UsageError, ResourceLimitError, DomainError) as exc:
        report["error"] = str(exc)
        report["summary"] = {"passed": False, "failed": [], "checks": {}}
        return EXIT_USAGE, report, json.dumps(report, indent=2, default=_json_default)
    report["payload"] = payload
    report["summary"] = {"passed": checks.passed, "failed": checks.failed(), "checks": checks.results}
    code = EXIT_OK if checks.passed else EXIT_FAIL
    if table is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table[0])
        writer.writerows(table[1])
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, default=_json_default)
    return code, report, text


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report, text = run_command(argv)
    out = None
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            out = argv[i + 1]
        elif tok.startswith("--out="):
            out = tok.split("=", 1)[1]
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
    elif code != EXIT_OK:
        print(f"failing checks: {', '.join(report['summary']['failed'])}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
