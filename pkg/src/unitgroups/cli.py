"""Command-line front end.

Exit codes: 0 definitive answer (including NotRealizable), 1 verification
mismatch, 2 resource or parse error, 3 Unknown verdict.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .abelian import cyclic, format_group, parse_group
from .classify import RING_CLASSES, UNKNOWN, RuleSet, classify_cyclic, ditor_cardinality
from .density import DEFAULT_LIMIT, SETS, density_scan
from .oracle import OracleError, unit_group
from .polyring import PresentationError, RingPresentation, an_ring, finite_field, zmod_presentation
from .ring import DEFAULT_BOUND, BoundExceeded, RingStructureError
from .witness import WitnessCertificate, WitnessError, verify_certificate

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2, 3

DEFAULTS = {
    "bound": DEFAULT_BOUND,
    "an_bound": 6,
    "search_bound": 1 << 16,
    "density_limit": DEFAULT_LIMIT,
}


class UsageError(Exception):
    pass


def load_config(path: str | None) -> dict[str, int]:
    """key = value lines; unknown keys are an error."""
    conf = dict(DEFAULTS)
    if not path:
        return conf
    parser = configparser.ConfigParser()
    try:
        parser.read_string("[unitgroups]\n" + Path(path).read_text(encoding="utf-8"))
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for key, value in parser["unitgroups"].items():
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        conf[key] = _int(value)
    return conf


def _int(text: str) -> int:
    try:
        return int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitgroups", description="Realizability of finite abelian groups as unit groups of commutative rings.")
    p.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("--config", help="key=value file with bound, an_bound, search_bound, density_limit")
    p.add_argument("--bound", type=int, help=f"oracle enumeration bound (default {DEFAULTS['bound']})")
    p.add_argument("--an-bound", type=int, help=f"largest A_n index to verify (default {DEFAULTS['an_bound']})")
    p.add_argument("--search-bound", type=int, help=f"group order limit for splitting searches (default {DEFAULTS['search_bound']})")
    p.add_argument("--density-limit", type=int, help=f"largest N for density scans (default {DEFAULTS['density_limit']})")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify-group", help="classify a group such as 'C4 x C11^2'")
    c.add_argument("group")
    c.add_argument("--ring-class", choices=list(RING_CLASSES), default="any")
    c.add_argument("--enable-rule", action="append", default=[], metavar="RULE", help="extra rule, e.g. F2")

    c = sub.add_parser("classify-cyclic", help="classify the cyclic group of order n")
    c.add_argument("n", type=int)

    c = sub.add_parser("ditor", help="is n the order of a finite unit group?")
    c.add_argument("n", type=int)

    c = sub.add_parser("witness", help="emit a witness certificate for a group")
    c.add_argument("group")
    c.add_argument("--ring-class", choices=list(RING_CLASSES), default="any")
    c.add_argument("--enable-rule", action="append", default=[], metavar="RULE")

    c = sub.add_parser("verify", help="replay a certificate through the oracle")
    c.add_argument("--cert", required=True, help="certificate or presentation JSON file, '-' for stdin")
    c.add_argument("--expect", help="expected group (overrides the certificate's claim)")

    c = sub.add_parser("units", help="unit group of a ring")
    c.add_argument("ring", help="Zmod:<n>, F<q>, A<n>, or a presentation JSON file ('-' for stdin)")

    c = sub.add_parser("density", help="density of realizable orders up to N")
    c.add_argument("--max", dest="N", required=True, type=_int)
    c.add_argument("--checkpoints", default=None, help="comma list, e.g. 1e3,1e4,1e5")
    c.add_argument("--set", dest="sets", default=",".join(SETS), help="comma list from all, odd, reduced")
    c.add_argument("--out", help="also write the CSV here")
    return p


def _settings(args) -> dict[str, int]:
    conf = load_config(args.config)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    return conf


def _rules(args, conf) -> RuleSet:
    try:
        return RuleSet(search_bound=conf["search_bound"]).enable(*args.enable_rule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from None


def _ring_from_spec(spec: str) -> RingPresentation:
    s = spec.strip()
    try:
        if s.startswith("Zmod:"):
            return zmod_presentation(int(s[5:]))
        if s[:1] == "F" and s[1:].isdigit():
            from sympy import factorint

            fac = factorint(int(s[1:]))
            if len(fac) != 1:
                raise UsageError(f"{s[1:]} is not a prime power")
            ((p, lam),) = fac.items()
            return finite_field(p, lam)
        if s[:1] == "A" and s[1:].isdigit():
            return an_ring(int(s[1:]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = _read_json(s)
    if "presentation" in data:
        data = data["presentation"]
    return RingPresentation.from_json(data)


def _emit(obj: dict, pretty: bool, out) -> None:
    if not pretty:
        out.write(json.dumps(obj, sort_keys=True) + "\n")
        return
    out.write(_human(obj).rstrip() + "\n")


def _human(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v if v not in (None, '', [], {}) else '-'}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            (f"{pad}-\n{_human(v, indent + 1)}" if isinstance(v, (dict, list)) else f"{pad}- {v}") for v in obj
        )
    return f"{pad}{obj}"


def _verdict_exit(verdict) -> int:
    return EXIT_UNKNOWN if verdict.status == UNKNOWN else EXIT_OK


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        conf = _settings(args)
        return _dispatch(args, conf, out)
    except (UsageError, PresentationError, WitnessError, RingStructureError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except BoundExceeded as exc:
        sys.stderr.write(f"bound exceeded: {exc}\n")
        return EXIT_ERROR


def _dispatch(args, conf, out) -> int:
    cmd = args.command
    if cmd in ("classify-group", "witness"):
        G = parse_group(args.group)
        verdict = RING_CLASSES[args.ring_class](G, _rules(args, conf))
        if cmd == "witness" and verdict.certificate is not None:
            _emit(verdict.certificate.to_json(), args.pretty, out)
        else:
            _emit({"group": format_group(G), "ring_class": args.ring_class, **verdict.to_json()}, args.pretty, out)
        return _verdict_exit(verdict)
    if cmd == "classify-cyclic":
        verdict = classify_cyclic(args.n)
        _emit({"group": format_group(cyclic(args.n)), **verdict.to_json()}, args.pretty, out)
        return _verdict_exit(verdict)
    if cmd == "ditor":
        verdict = ditor_cardinality(args.n)
        _emit({"n": args.n, **verdict.to_json()}, args.pretty, out)
        return _verdict_exit(verdict)
    if cmd == "verify":
        data = _read_json(args.cert)
        if "presentation" in data:
            if args.expect:
                data = dict(data, claimed_group=args.expect)
            cert = WitnessCertificate.from_json(data)
        else:
            if not args.expect:
                raise UsageError("a bare presentation needs --expect")
            P = RingPresentation.from_json(data)
            from .witness import certificate

            cert = certificate(P, parse_group(args.expect), "user")
        try:
            ok, report = verify_certificate(cert, conf["bound"], conf["an_bound"])
        except OracleError as exc:
            _emit({"match": False, "error": str(exc), "claimed_group": format_group(cert.claimed_group)}, args.pretty, out)
            return EXIT_MISMATCH
        _emit({**report.to_json(), "match": ok, "claimed_group": format_group(cert.claimed_group)}, args.pretty, out)
        return EXIT_OK if ok else EXIT_MISMATCH
    if cmd == "units":
        P = _ring_from_spec(args.ring)
        report = unit_group(P, conf["bound"], conf["an_bound"])
        _emit({"ring": P.describe(), "report": report.to_json()}, args.pretty, out)
        return EXIT_OK
    if cmd == "density":
        cps = [_int(c) for c in args.checkpoints.split(",")] if args.checkpoints else None
        sets = [s.strip() for s in args.sets.split(",") if s.strip()]
        report = density_scan(args.N, cps, sets, conf["density_limit"])
        if args.out:
            Path(args.out).write_text(report.to_csv(), encoding="utf-8")
        _emit(report.to_json(), args.pretty, out)
        return EXIT_OK
    raise UsageError(f"unknown command {cmd}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
