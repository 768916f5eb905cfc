"""Command-line driver: scan a prime range and write certificates.

Exit codes: 0 clean scan, 1 validation error, 2 internal inconsistency.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .certify import COMPUTED_MULTIPLE, render_text, scan
from .errors import CyctowerError, InternalInconsistencyError, ValidationError
from .finite_field import primes_in_range
from .hyperelliptic import good_odd_primes, torsion_multiple
from .lambda_algebra import (
    DEFAULT_PREC_P,
    DEFAULT_PREC_X,
    PadicSeries,
    evaluate_at_zero,
    weierstrass_prepare,
)
from .records import parse_record

log = logging.getLogger("cyctower")

PMAX_CAP = 10**6


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cyctower",
        description="Certify stability of rational points of a genus-2 curve in cyclotomic Z_p-towers.",
    )
    ap.add_argument("--curve", type=Path, help="curve-record JSON file")
    ap.add_argument("--pmin", type=int, default=5)
    ap.add_argument("--pmax", type=int, default=100)
    ap.add_argument("--aux-primes", type=int, default=8, help="good odd primes used for the torsion multiple")
    ap.add_argument("--report", choices=("json", "text", "both"), default="both")
    ap.add_argument("--out", type=Path, default=Path("."), help="output directory")
    ap.add_argument("--prec-p", type=int, default=DEFAULT_PREC_P, help="p-adic precision for series")
    ap.add_argument("--prec-x", type=int, default=DEFAULT_PREC_X, help="degree truncation for series")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--allow-large-range", action="store_true", help=f"permit pmax > {PMAX_CAP}")
    ap.add_argument("--series", type=Path, help="analyse a series literal instead of scanning a curve")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def _validate(args):
    if args.curve is None and args.series is None:
        raise ValidationError("one of --curve or --series is required")
    if args.prec_p < 1 or args.prec_x < 1:
        raise ValidationError("--prec-p and --prec-x must be >= 1")
    if args.curve is not None:
        if args.pmin < 2 or args.pmin > args.pmax:
            raise ValidationError(f"invalid prime range [{args.pmin}, {args.pmax}]")
        if args.pmax > PMAX_CAP and not args.allow_large_range:
            raise ValidationError(f"pmax > {PMAX_CAP} needs --allow-large-range")
        if args.aux_primes < 1:
            raise ValidationError("--aux-primes must be >= 1")
        if args.jobs < 1:
            raise ValidationError("--jobs must be >= 1")


def run_series(args) -> int:
    data = json.loads(args.series.read_text())
    if isinstance(data, dict):
        data.setdefault("prec_p", args.prec_p)
        data.setdefault("prec_x", args.prec_x)
    f = PadicSeries.from_json(data)
    w = weierstrass_prepare(f)
    value, v0 = evaluate_at_zero(f)
    out = {
        "series": f.to_json(),
        "mu": w.mu,
        "lambda": w.lambda_,
        "f0": value,
        "f0_valuation": v0,
        "distinguished": w.distinguished.to_json(),
        "unit": w.unit.to_json(),
    }
    print(json.dumps(out, indent=2))
    return 0


def run_scan(args) -> int:
    curve, inv = parse_record(args.curve.read_bytes())
    aux = good_odd_primes(curve, args.aux_primes)
    multiple = torsion_multiple(curve, aux)
    log.info("torsion multiple over %s: %d", aux, multiple)
    if inv.torsion_order is not None:
        if multiple % inv.torsion_order:
            raise ValidationError(
                f"$.invariants.torsion_order: {inv.torsion_order} does not divide the computed multiple {multiple}"
            )
    else:
        inv = dataclasses.replace(inv, torsion_order=multiple, torsion_provenance=COMPUTED_MULTIPLE)

    report = scan(curve, inv, primes_in_range(args.pmin, args.pmax), jobs=args.jobs)
    args.out.mkdir(parents=True, exist_ok=True)
    if args.report in ("json", "both"):
        path = args.out / "certificates.json"
        path.write_text(json.dumps(report.to_json(), indent=2) + "\n")
        log.info("wrote %s", path)
    if args.report in ("text", "both"):
        path = args.out / "report.txt"
        path.write_text(render_text(report))
        log.info("wrote %s", path)
    if report.has_internal_error:
        print(f"internal inconsistency at p = {report.summary['internal_errors']}", file=sys.stderr)
        return 2
    return 0


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        _validate(args)
        if args.series is not None:
            return run_series(args)
        return run_scan(args)
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CyctowerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())
