"""Command line interface: ``k4e <command> --order V [options]``.

Every option can also be set through an environment variable named
``K4E_<OPTION>`` (for example ``K4E_ORDER=10`` or ``K4E_FULL_SWEEP=1``);
command line flags win.  Exit status is 0 when every check in the report
passes, 1 when a check fails or a computation error occurs (the report
then says why), and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Callable

from .canon import are_isomorphic
from .classify import KNOWN_CLASS_COUNTS, enumerate_classes
from .core import InadmissibleOrder, K4EError, num_blocks
from .known import load_certificates
from .search import OrderTooLarge, check_order, write_ndjson
from .spectrum import (
    UnsupportedOrder,
    adm,
    compute_spectrum,
    reference_adm,
    reference_j_sets,
    verify_certificates,
    verify_witnesses,
)
from .structure import verify_structure

log = logging.getLogger("k4e")

ENV_PREFIX = "K4E_"
COMMANDS = ("enumerate", "classify", "analyze", "spectrum", "adm", "verify", "export")


class UsageError(Exception):
    pass


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def _env_flag(name: str) -> bool:
    return str(_env(name, "")).strip().lower() in {"1", "true", "yes", "on"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    order = _env("order")
    common.add_argument("--order", type=int, default=int(order) if order else None,
                        help="design order v (6, 10 or 11)")
    common.add_argument("--jobs", type=int, default=int(_env("jobs", 1)),
                        help="worker processes (1 = sequential)")
    common.add_argument("--output", type=Path, default=_env("output"),
                        help="output file (directory for export); stdout if omitted")
    common.add_argument("--format", choices=("json", "csv"), default=_env("format", "json"))
    common.add_argument("--full-sweep", action="store_true", default=_env_flag("full_sweep"),
                        help="disable orbit and coset reductions")
    common.add_argument("--resume", type=Path, default=_env("resume"),
                        help="resume file of completed search units (enumerate)")
    common.add_argument("--certificates", type=Path, default=_env("certificates"),
                        help="certificate file replacing the bundled one")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="k4e", description="(K4-e)-design enumeration and intersection spectra")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "enumerate": "stream every labeled design as NDJSON",
        "classify": "isomorphism classes with automorphism group orders",
        "analyze": "sweep the structural checks over all labeled designs",
        "spectrum": "intersection spectrum by exhaustive relabeling sweep",
        "adm": "admissible envelope from the reference J and J_T sets",
        "verify": "replay the bundled relabeling certificates",
        "export": "write every report for an order into a directory",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _is_flat(obj) -> bool:
    return isinstance(obj, list) and all(
        not isinstance(x, (dict, list)) or (isinstance(x, list) and _is_flat(x) and
                                            all(not isinstance(y, list) for y in x))
        for x in obj)


def _pretty(obj, indent: int = 0) -> str:
    # Indented JSON, with lists of scalars (and lists of such lists) kept on one line.
    pad = "  " * (indent + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {_pretty(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and not _is_flat(obj):
        items = [pad + _pretty(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj, separators=(", ", ": "))


def _dump(obj) -> str:
    return _pretty(obj) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- reports

def _cert_set(args, v):
    sets = load_certificates(args.certificates)
    return sets.get(v)


def classify_report(v: int, args) -> tuple[dict, list]:
    classes = enumerate_classes(v, reduced=False if args.full_sweep else None, jobs=args.jobs)
    known = _cert_set(args, v)
    matches = []
    rows = []
    for i, c in enumerate(classes):
        names = []
        if known is not None:
            for name, d in known.designs.items():
                ok, pi = are_isomorphic(d, c.design)
                if ok:
                    names.append({"design": name, "perm": list(pi.image)})
        matches.append(names)
        rows.append([i, c.aut_order, c.size, " ".join(map(str, c.design.blocks))])
    expected = KNOWN_CLASS_COUNTS.get(v)
    checks = {"class_count": expected is None or len(classes) == expected}
    if known is not None:
        matched = {m["design"] for ms in matches for m in ms}
        checks["known_designs_matched"] = matched == set(known.designs) and all(matches)
    report = {
        "claim": "isomorphism_classes",
        "order": v,
        "expected_classes": expected,
        "labeled_total": sum(c.size for c in classes),
        "classes": [{**c.to_json(), "matches": m} for c, m in zip(classes, matches)],
        "checks": checks,
        "passed": all(checks.values()),
    }
    return report, [["index", "aut_order", "labeled", "blocks"], rows]


def analyze_report(v: int, args) -> tuple[dict, list]:
    rep = verify_structure(v, reduced=False if args.full_sweep else None, jobs=args.jobs)
    report = {"claim": "structural_checks", **rep.to_json()}
    rows = [[k, c.checked, len(c.violations)] for k, c in rep.checks.items()]
    return report, [["check", "checked", "violations"], rows]


def spectrum_report(v: int, args) -> tuple[dict, list]:
    reps = [c.design for c in enumerate_classes(v, jobs=args.jobs)]
    res = compute_spectrum(v, reps, full_sweep=args.full_sweep, jobs=args.jobs)
    envelope = reference_adm(v)
    J, JT = reference_j_sets(v)
    excluded = res.excluded_within(envelope)
    known = _cert_set(args, v)
    checks = {
        "within_envelope": res.pairs <= envelope.pairs,
        "witnesses_verified": not verify_witnesses(res, reps),
        "block_intersections_match_reference": res.J == J,
        "triangle_intersections_match_reference": res.J_T == JT,
    }
    if known is not None:
        checks["exclusions_match_known"] = set(excluded) == set(known.excluded)
    report = {
        **res.to_json(envelope),
        "claim": "intersection_spectrum",
        "full_sweep": res.full_sweep,
        "classes": [d.to_json() for d in reps],
        "J": sorted(res.J),
        "J_T": sorted(res.J_T),
        "checks": checks,
        "passed": all(checks.values()),
    }
    rows = [[p.s, p.t, p.i, p.j, p.perm.cycle_string()] for _, p in sorted(res.achieved.items())]
    return report, [["s", "t", "i", "j", "perm"], rows]


def adm_report(v: int, args) -> tuple[dict, list]:
    J, JT = reference_j_sets(v)
    env = adm(v, J, JT)
    report = {"claim": "admissible_envelope", "order": v, "b_v": num_blocks(v),
              "J": sorted(J), "J_T": sorted(JT), "pairs": env.to_json()["pairs"], "passed": True}
    return report, [["s", "t"], sorted(env.pairs)]


def verify_report(v: int, args) -> tuple[dict, list]:
    known = _cert_set(args, v)
    if known is None:
        raise UsageError(f"no certificates for order {v}")
    results = verify_certificates(v, known.certificates, known.designs)
    report = {
        "claim": "certificate_replay",
        "order": v,
        "checked": len(results),
        "failed": sum(not r.passed for r in results),
        "results": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    rows = [[r.certificate.s, r.certificate.t, r.certificate.source, r.certificate.target,
             r.certificate.perm.cycle_string(), r.got.s, r.got.t, r.passed] for r in results]
    return report, [["s", "t", "source", "target", "perm", "got_s", "got_t", "passed"], rows]


REPORTS: dict[str, Callable] = {
    "classify": classify_report,
    "analyze": analyze_report,
    "spectrum": spectrum_report,
    "adm": adm_report,
    "verify": verify_report,
}


def _render(args, report: dict, table: list) -> str:
    if args.format == "csv":
        return _csv(*table)
    return _dump(report)


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


# ---------------------------------------------------------------- entry point

def _check_args(args) -> int:
    if args.order is None:
        raise UsageError("--order is required (or set K4E_ORDER)")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    v = args.order
    try:
        check_order(v)
    except (InadmissibleOrder, OrderTooLarge) as e:
        raise UsageError(str(e)) from e
    if args.command in ("spectrum", "adm") and v not in (6, 10, 11):
        raise UsageError(f"no reference intersection numbers for order {v}")
    return v


def run(args) -> int:
    v = _check_args(args)
    t0 = time.perf_counter()
    if args.command == "enumerate":
        if args.format != "json":
            raise UsageError("enumerate writes NDJSON only")
        n = write_ndjson(v, args.output, jobs=args.jobs, resume=args.resume, stream=sys.stdout)
        log.info("order %d: %d labeled designs in %.1fs", v, n, time.perf_counter() - t0)
        return 0
    if args.command == "export":
        if args.output is None:
            raise UsageError("export needs --output DIR")
        args.output.mkdir(parents=True, exist_ok=True)
        ok = True
        for name, fn in REPORTS.items():
            if name == "verify" and _cert_set(args, v) is None:
                continue
            report, table = fn(v, args)
            ext = "csv" if args.format == "csv" else "json"
            (args.output / f"{name}_{v}.{ext}").write_text(_render(args, report, table))
            ok &= report["passed"]
        log.info("export finished in %.1fs", time.perf_counter() - t0)
        return 0 if ok else 1
    report, table = REPORTS[args.command](v, args)
    _emit(_render(args, report, table), args.output)
    log.info("%s order %d finished in %.1fs", args.command, v, time.perf_counter() - t0)
    if not report["passed"]:
        log.error("%s order %d: checks failed", args.command, v)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return run(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"k4e: error: {e}", file=sys.stderr)
        return 2
    except (K4EError, UnsupportedOrder, OSError, ValueError) as e:
        err = {"passed": False, "error": type(e).__name__, "message": str(e)}
        sys.stdout.write(_dump(err))
        return 1


if __name__ == "__main__":
    sys.exit(main())
