"""Command line entry point: ``ndkp verify | fields | oracle | list-checks``.

Exit codes: 0 when every check passes, 1 when any check fails or errors,
2 for configuration and usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .config import SCHEMA_VERSION, RunConfig, load_config
from .errors import ConfigError, NdkpError
from .fields import FieldId
from .verify import (
    ERROR,
    FAIL,
    PASS,
    REGISTRY,
    Verifier,
    invariance_check,
    list_checks,
    oracle_deviation,
    parse_check,
)

DEFAULT_CHECKS = ("LPKP", "LPKP_ALT", "LPKP_RATIO", "LPMKP_V", "LPMKP_W", "ASYM_V_P", "ASYM_V_Q",
                  "ASYM_V_R", "ASYM_W_P", "ASYM_W_Q", "ASYM_W_R", "NQC(1/3,1/7)", "LSKP", "BLKP")
ORACLE_MAX_SIZE = 144


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "tolerance", None) is not None:
        cfg.tolerance = args.tolerance
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def _document(command: str, cfg: RunConfig, checks: list) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": f"ndkp {__version__}",
        "command": command,
        "config": cfg.echo(),
        "checks": checks,
        "passed": all(c["status"] == PASS for c in checks),
    }


def _invariance_summary(cfg: RunConfig, F) -> dict:
    try:
        res = invariance_check(cfg.seed, F)
        status = PASS if res.max_deviation <= cfg.tolerance else FAIL
        return {"check": "INVARIANCE", "family": "invariance", "status": status,
                "tolerance": cfg.tolerance, "seed": cfg.seed,
                "max_relative_deviation": res.max_deviation, "samples": len(res.samples),
                "attempts": res.attempts, "message": ""}
    except NdkpError as exc:
        return {"check": "INVARIANCE", "family": "invariance", "status": ERROR,
                "tolerance": cfg.tolerance, "seed": cfg.seed, "max_relative_deviation": None,
                "samples": 0, "attempts": 0, "message": f"{type(exc).__name__}: {exc}"}


def run_verify(cfg: RunConfig) -> dict:
    F = cfg.fields()
    V = Verifier(F, cfg.tolerance)
    checks = cfg.checks or [parse_check(c) for c in DEFAULT_CHECKS]
    summaries = []
    for c in checks:
        if c == "INVARIANCE":
            summaries.append(_invariance_summary(cfg, F))
        else:
            summaries.append(V.run(c, cfg.points).summary())
    return _document("verify", cfg, summaries)


def run_oracle(cfg: RunConfig) -> dict:
    F = cfg.fields()
    size = F.spectral.N * F.spectral.Nprime
    summary = {"check": "SYLVESTER_ORACLE", "family": "oracle", "tolerance": cfg.tolerance,
               "max_relative_deviation": None, "max_sylvester_residual": None,
               "worst_point": None, "message": ""}
    if size > ORACLE_MAX_SIZE:
        summary.update(status=ERROR, message=f"N*N' = {size} exceeds {ORACLE_MAX_SIZE}")
    else:
        try:
            dev, res, pt = oracle_deviation(F)
            summary.update(status=PASS if dev <= cfg.tolerance else FAIL,
                           max_relative_deviation=dev, max_sylvester_residual=res,
                           worst_point=list(pt) if pt is not None else None)
        except NdkpError as exc:
            summary.update(status=FAIL, message=f"{type(exc).__name__}: {exc}")
    return _document("oracle", cfg, [summary])


def export_fields(cfg: RunConfig, field: str, fmt: str) -> str:
    fid = FieldId.parse(field)
    F = cfg.fields()
    rows = []
    for pt in cfg.params.points():
        try:
            z = F.value(pt, fid)
        except NdkpError as exc:
            raise NdkpError(f"field {fid} fails at {tuple(pt)}: {type(exc).__name__}: {exc}") from exc
        rows.append((pt, z))
    if fmt == "json":
        return _dump([{"n": p.n, "m": p.m, "h": p.h, "re": z.real, "im": z.imag} for p, z in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "m", "h", "re", "im"])
    for p, z in rows:
        w.writerow([p.n, p.m, p.h, f"{z.real:.17g}", f"{z.imag:.17g}"])
    return buf.getvalue()


def _print_summary(doc: dict) -> None:
    for c in doc["checks"]:
        val = c.get("max_normalized_residual", c.get("max_relative_deviation"))
        shown = "n/a" if val is None else f"{val:.3e}"
        extra = f"  {c['message']}" if c.get("message") else ""
        print(f"{c['status']:5s} {c['check']:28s} {shown}{extra}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ndkp", description="Residual checks for exact lattice KP solutions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_choices=None):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--tolerance", type=float, help="override the configured tolerance")
        p.add_argument("--seed", type=int, help="override the configured seed")
        if fmt_choices:
            p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])

    common(sub.add_parser("verify", help="run the configured checks and write a JSON report"), ["json"])
    common(sub.add_parser("oracle", help="compare closed-form M with a Kronecker solve"), ["json"])
    pf = sub.add_parser("fields", help="export one field over the window")
    common(pf, ["csv", "json"])
    pf.add_argument("--field", required=True, help="field id, e.g. U, Tau, Va(NegP), S(0,-1,0,1/3)")
    sub.add_parser("list-checks", help="print the available check names")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-checks":
        sys.stdout.write("\n".join(list_checks() + ["INVARIANCE\tinvariance"]) + "\n")
        return 0
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.tolerance is not None and not args.tolerance > 0:
        print("config error: --tolerance must be positive", file=sys.stderr)
        return 2

    if args.command == "fields":
        try:
            text = export_fields(cfg, args.field, args.format)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except NdkpError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        _write(text, args.out)
        return 0

    doc = run_verify(cfg) if args.command == "verify" else run_oracle(cfg)
    out = args.out or cfg.outputs.get("report")
    _write(_dump(doc), out)
    if out:
        _print_summary(doc)
    return 0 if doc["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
