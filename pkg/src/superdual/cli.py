"""Command line entry point: ``python -m superdual <command> ...``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraSpec, GuardError, build_algebra, check_phi, check_table, phi_target_spec
from .combinatorics import (HookError, ReconstructionError, Weight, partition, weight_bar_m, weight_from_text,
                            weight_m, weight_tilde, weight_to_json)
from .duality import CaseSchemaError, compare_spectra, load_case, worked_example_s5
from .exact import fstr
from .gaudin import MarginError, TensorSystem, spectrum_report
from .repbuilder import build_irreducible, check_unitarizable, plain_weight

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    depth: int = 8
    precision: int = 50
    out: str | None = None
    z: list | None = None


def _parse_z(s: str | None):
    if s is None:
        return None
    try:
        pts = [Fraction(v) for v in s.split(",") if v.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse --z: {exc}") from exc
    if len(set(pts)) != len(pts):
        raise UsageError("--z points must be pairwise distinct")
    return pts


def _parse_partition(s: str):
    s = s.strip()
    if not s or s in ("0", "()", "[]", "empty"):
        return partition(())
    try:
        return partition(tuple(int(v) for v in s.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad partition {s!r}: {exc}") from exc


def _write(cfg: RunConfig, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if cfg.out:
        d = os.path.dirname(os.path.abspath(cfg.out))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, cfg.out)
    else:
        sys.stdout.write(text)


def _spec(args) -> AlgebraSpec:
    m = 0 if args.family == "tilde" else args.m
    return AlgebraSpec(args.family, args.type, m, args.n, getattr(args, "extended", False),
                       not getattr(args, "no_guard", False))


def _level_weight(t, family, p, d, m, n) -> Weight:
    if family == "bar":
        return weight_bar_m(p, d, m, n)
    if family == "unbar":
        return weight_m(p, d, m, n)
    return weight_tilde(p, d)


def _module_weight(args, t) -> Weight:
    if args.weight is not None:
        w = weight_from_text(args.weight)
        return w if not args.level_weight else plain_weight(t, w)
    if args.partition is None:
        raise UsageError("give --weight or --partition")
    p = _parse_partition(args.partition)
    return plain_weight(t, _level_weight(t, args.family, p, Fraction(args.d), t.spec.m, t.spec.n))


# -- commands -----------------------------------------------------------------------

def cmd_algebra(args, cfg: RunConfig) -> int:
    t = build_algebra(_spec(args))
    fails = check_table(t)
    if t.xtype == "c" and t.spec.family != "tilde":
        fails.update(check_phi(t, build_algebra(phi_target_spec(t.spec))))
    bad = {k: v for k, v in fails.items() if v}
    if args.dump:
        _write(cfg, t.dump())
    else:
        _write(cfg, {"algebra": t.spec.name, "dim": t.dim, "positive_roots": len(t.positive_roots),
                     "simple_roots": [str(r.weight) for r in t.simple_roots],
                     "basis": [b.label() for b in t.basis],
                     "checks": {k: ("ok" if not v else v[:5]) for k, v in fails.items()}})
    return EXIT_FAIL if bad else EXIT_OK


def cmd_module(args, cfg: RunConfig) -> int:
    t = build_algebra(_spec(args))
    xi = _module_weight(args, t)
    rep = build_irreducible(t, xi, cfg.depth, args.star)
    u = check_unitarizable(rep)
    _write(cfg, {"algebra": t.spec.name, "highest_weight": weight_to_json(xi), "status": rep.status,
                 "dim": rep.dim, "star": args.star,
                 "blocks": [{"weight": str(w), "dim": rep.blocks[w], "height": rep.heights[w],
                             "gram": u["blocks"][w]} for w in rep.weights_by_height()],
                 "positive_definite": u["positive_definite"]})
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    t = build_algebra(_spec(args))
    parts = [_parse_partition(s) for s in args.factors.split(";")]
    levels = [Fraction(v) for v in args.levels.split(",")] if args.levels else [Fraction(0)] * len(parts)
    if len(levels) != len(parts):
        raise UsageError("need one level per factor")
    mods = {}
    facs = []
    for p, d in zip(parts, levels):
        if (p, d) not in mods:
            xi = plain_weight(t, _level_weight(t, args.family, p, d, t.spec.m, t.spec.n))
            mods[(p, d)] = build_irreducible(t, xi, cfg.depth, args.star)
        facs.append(mods[(p, d)])
    if cfg.z is not None and len(cfg.z) != len(facs):
        raise UsageError("--z needs one point per factor")
    sys_ = TensorSystem(facs, cfg.z, args.variant)
    mu = plain_weight(t, _level_weight(t, args.family, _parse_partition(args.mu), sum(levels, Fraction(0)),
                                       t.spec.m, t.spec.n))
    reports = [spectrum_report(sys_, mu, i, cfg.precision) for i in range(len(facs))]
    _write(cfg, {"algebra": t.spec.name, "variant": args.variant, "reports": reports})
    return EXIT_OK


def cmd_duality(args, cfg: RunConfig) -> int:
    case = load_case(args.case)
    if cfg.z is not None:
        case.z = cfg.z
    case.seed = cfg.seed
    rep = compare_spectra(case)
    _write(cfg, rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_example_s5(args, cfg: RunConfig) -> int:
    rep = worked_example_s5(cfg.z)
    _write(cfg, rep)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_selftest(args, cfg: RunConfig) -> int:
    results = {}
    for spec in (AlgebraSpec("bar", "a", 1, 1), AlgebraSpec("bar", "c", 1, 1, True), AlgebraSpec("unbar", "d", 1, 1)):
        t = build_algebra(spec)
        results[f"algebra {spec.name}"] = not any(check_table(t).values())
    for name in ("trivial", "a-naturals-l3"):
        case = load_case(name)
        case.seed = cfg.seed
        results[f"duality {name}"] = compare_spectra(case).passed
    _write(cfg, {k: ("PASS" if v else "FAIL") for k, v in results.items()})
    return EXIT_OK if all(results.values()) else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, suppress: bool):
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=dflt(0), help="seed for z resampling")
    p.add_argument("--depth", type=int, default=dflt(8), help="module window depth (simple-root height)")
    p.add_argument("--precision", type=int, default=dflt(50), help="digits for approximate eigenvalues")
    p.add_argument("--out", default=dflt(None), help="write output here instead of stdout")
    p.add_argument("--z", default=dflt(None), help="comma separated points, e.g. 0,1,3")


def _algebra_args(p: argparse.ArgumentParser):
    p.add_argument("--type", choices=["a", "c", "d"], required=True)
    p.add_argument("--family", choices=["bar", "unbar", "tilde"], default="bar")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--no-guard", action="store_true", help="lift the m <= 4, n <= 6 limit")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superdual", description=__doc__)
    _common(ap, False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="build a structure table and run its self checks")
    _algebra_args(p)
    p.add_argument("--extended", action="store_true", help="append the central element K")
    p.add_argument("--dump", action="store_true", help="print the line-oriented table dump")
    _common(p, True)

    p = sub.add_parser("module", help="build an irreducible highest-weight module")
    _algebra_args(p)
    p.add_argument("--weight", help="highest weight, e.g. '1*e(1/2) + 1*L0'")
    p.add_argument("--level-weight", action="store_true",
                   help="--weight gives values on the extended algebra rather than plain ones")
    p.add_argument("--partition", help="comma separated parts; combined with --d")
    p.add_argument("--d", default="0", help="level")
    p.add_argument("--star", choices=["omega", "omega_prime"], default="omega")
    _common(p, True)

    p = sub.add_parser("spectrum", help="Gaudin spectra on a singular block")
    _algebra_args(p)
    p.add_argument("--factors", required=True, help="partitions separated by ';', e.g. '1;1;1'")
    p.add_argument("--levels", help="comma separated levels, one per factor")
    p.add_argument("--mu", required=True, help="target partition")
    p.add_argument("--variant", choices=["ring", "central"], default="ring")
    p.add_argument("--star", choices=["omega", "omega_prime"], default="omega")
    _common(p, True)

    p = sub.add_parser("duality", help="compare super and Lie spectra for a case file")
    p.add_argument("case", help="case file path or shipped case name")
    _common(p, True)

    p = sub.add_parser("example-s5", help="odd-word transport example in a gl(4|4) window")
    _common(p, True)

    p = sub.add_parser("selftest", help="quick structure and duality checks")
    _common(p, True)
    return ap


COMMANDS = {"algebra": cmd_algebra, "module": cmd_module, "spectrum": cmd_spectrum,
            "duality": cmd_duality, "example-s5": cmd_example_s5, "selftest": cmd_selftest}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.depth < 0 or args.precision < 1:
            raise UsageError("--depth must be >= 0 and --precision >= 1")
        cfg = RunConfig(args.command, args.seed, args.depth, args.precision, args.out, _parse_z(args.z))
        return COMMANDS[args.command](args, cfg)
    except (UsageError, GuardError, CaseSchemaError, HookError, ReconstructionError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MarginError as exc:
        print(f"margin error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
