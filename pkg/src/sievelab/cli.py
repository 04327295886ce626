"""Command-line front end.

Subcommands:

    constants   recompute the threshold constants and compare to expectations
    local       local counts, densities and bad primes for a form mod p
    equidist    weighted-sequence residuals R_d and the level statistic
    census      almost-prime census of a weighted sequence
    enumerate   integer points on f = t in a ball, as CSV
    automorphs  integral automorphs of a form by bounded search

Flags mirror an optional key=value config file (--config); explicit flags
win.  All floating point output uses 10 significant digits and runs are
fully deterministic, so identical configs produce byte-identical output.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .errors import SieveLabError
from .lattice_points import (PROJECTIONS, build_sequence, census,
                             enumerate_points, find_automorphs, level_statistic,
                             points_to_csv, residual_Rd)
from .localdata import BAD_SET, build_local_table
from .quadforms import TernaryForm, det_form
from .thresholds import reproduce_constants

# Published almost-prime orders by projection and theta mode.
_PUBLISHED_R = {
    "x1": {"unconditional": 6, "selberg": 5},
    "x1x2": {"unconditional": 16, "selberg": 14},
    "x1x2x3": {"unconditional": 26, "selberg": 22},
}
_KAPPA = {"x1": 1, "x1x2": 2, "x1x2x3": 3}


@dataclass
class RunConfig:
    """Validated bundle of the common subcommand inputs."""

    form: TernaryForm | None = None
    t: int | None = None
    T: float | None = None
    c0: float = 2.0
    projection: str = "x1"
    mode: str = "unconditional"
    dmax: int = 30
    r: int = 6
    pmax: int = 100
    output: str = "text"
    out: str | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls()
        if getattr(args, "form", None):
            cfg.form = TernaryForm.from_string(args.form)
        for name in ("t", "T", "c0", "projection", "mode", "dmax", "r",
                     "pmax", "output", "out"):
            if getattr(args, name, None) is not None:
                setattr(cfg, name, getattr(args, name))
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.projection not in PROJECTIONS:
            raise SieveLabError(f"projection must be one of {PROJECTIONS}")
        if self.mode not in ("unconditional", "selberg"):
            raise SieveLabError("mode must be 'unconditional' or 'selberg'")
        if self.output not in ("text", "json", "csv"):
            raise SieveLabError("output must be text, json or csv")
        if self.t is not None and self.t == 0:
            raise SieveLabError("t must be a nonzero integer")
        if self.T is not None and self.T < 10:
            raise SieveLabError("T must be >= 10")
        if self.c0 <= 1:
            raise SieveLabError("c0 must exceed 1")
        if self.form is not None and det_form(self.form) == 0:
            raise SieveLabError("form is degenerate (zero determinant)")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def cmd_constants(cfg: RunConfig) -> int:
    report = reproduce_constants(cfg.mode)
    if cfg.output == "json":
        _emit(report.to_json(), cfg.out)
    elif cfg.output == "csv":
        lines = ["name,computed,expected,pass"]
        lines += [f"{r.name.replace(',', ';')},{r.computed},"
                  f"{r.expected.replace(',', ';')},{int(r.passed)}"
                  for r in report.rows]
        _emit("\n".join(lines), cfg.out)
    else:
        _emit(report.to_text(), cfg.out)
    return 0 if report.all_pass else 1


def cmd_local(cfg: RunConfig) -> int:
    if cfg.form is None or cfg.t is None:
        raise SieveLabError("local requires --form and --t")
    table = build_local_table(cfg.form, cfg.t, cfg.projection, cfg.pmax)
    bad = sorted(table.bad_primes)
    ok = not table.findings

    if cfg.output == "csv":
        lines = table.to_csv().rstrip("\n").splitlines()
        header = lines[0] + ",cassels_agree"
        body = []
        for line, p in zip(lines[1:], sorted(table.entries)):
            agree = table.entries[p].cassels_agree
            body.append(line + "," + ("" if agree is None else str(int(agree))))
        _emit("\n".join([header] + body), cfg.out)
    elif cfg.output == "json":
        payload = {
            "form": cfg.form.to_string(), "t": cfg.t, "variant": cfg.projection,
            "bad_primes": bad, "findings": table.findings,
            "caveat": table.caveat,
            "entries": [{
                "p": e.p, "count_V": e.count_V, "count_V0": e.count_V0,
                "omega": f"{e.omega_over_p.numerator}/{e.omega_over_p.denominator}",
                "is_bad": e.is_bad, "cassels_agree": e.cassels_agree,
            } for e in (table.entries[p] for p in sorted(table.entries))],
        }
        _emit(json.dumps(payload, indent=2, sort_keys=True), cfg.out)
    else:
        lines = [f"form {cfg.form.to_string()}  t={cfg.t}  variant={cfg.projection}",
                 "p | count_V | count_V0 | omega(p)/p | bad | cassels_agree"]
        for p in sorted(table.entries):
            e = table.entries[p]
            agree = "-" if e.cassels_agree is None else ("yes" if e.cassels_agree else "NO")
            lines.append(f"{e.p} | {e.count_V} | {e.count_V0} | "
                         f"{e.omega_over_p.numerator}/{e.omega_over_p.denominator} | "
                         f"{'yes' if e.is_bad else 'no'} | {agree}")
        lines.append(f"bad primes <= {cfg.pmax}: {bad if bad else 'none'}")
        lines.extend(f"finding: {s}" for s in table.findings)
        lines.append(f"note: {table.caveat}")
        _emit("\n".join(lines), cfg.out)
    return 0 if ok else 1


def cmd_equidist(cfg: RunConfig, trend: bool = False) -> int:
    if cfg.form is None or cfg.t is None or cfg.T is None:
        raise SieveLabError("equidist requires --form, --t and --T")
    table = build_local_table(cfg.form, cfg.t, cfg.projection,
                              max(7, cfg.dmax))
    seq = build_sequence(cfg.form, cfg.t, cfg.T, cfg.c0, cfg.projection)

    moduli = [1] + [d for d in range(2, cfg.dmax + 1)
                    if _is_squarefree_coprime(d)]
    rows = []
    for d in moduli:
        mass = seq.mass_in_progression(d)
        expect = float(table.omega_d(d)) * seq.X
        rd = residual_Rd(seq, table, d)
        rows.append((d, mass, expect, rd, rd / seq.X))

    stat = level_statistic(seq, table, float(cfg.dmax))
    kappa = _KAPPA[cfg.projection]
    ref = seq.X / math.log(seq.X) ** (kappa + 1)

    trend_line = None
    if trend:
        seq2 = build_sequence(cfg.form, cfg.t, 2 * cfg.T, cfg.c0, cfg.projection)
        mean1 = _mean_residual_ratio(seq, table, moduli)
        mean2 = _mean_residual_ratio(seq2, table, moduli)
        grew = mean2 > 2.0 * mean1
        trend_line = (f"trend: mean |R_d|/X {_fmt(mean1)} -> {_fmt(mean2)} "
                      f"on T -> 2T: {'GREW' if grew else 'ok'}")

    if cfg.output == "json":
        payload = {
            "form": cfg.form.to_string(), "t": cfg.t, "T": cfg.T,
            "projection": cfg.projection, "X": seq.X,
            "rows": [{"d": d, "mass": m, "expected": e, "R_d": r, "R_d_over_X": q}
                     for d, m, e, r, q in rows],
            "level_statistic": stat, "reference_X_log": ref,
        }
        if trend_line:
            payload["trend"] = trend_line
        _emit(json.dumps(payload, indent=2, sort_keys=True), cfg.out)
    elif cfg.output == "csv":
        lines = ["d,mass,expected,R_d,R_d_over_X"]
        lines += [f"{d},{_fmt(m)},{_fmt(e)},{_fmt(r)},{_fmt(q)}"
                  for d, m, e, r, q in rows]
        _emit("\n".join(lines), cfg.out)
    else:
        lines = [f"form {cfg.form.to_string()}  t={cfg.t}  T={_fmt(cfg.T)}  "
                 f"projection={cfg.projection}  X={_fmt(seq.X)}",
                 "d | |A_d| | omega(d)/d * X | R_d | R_d/X"]
        for d, m, e, r, q in rows:
            lines.append(f"{d} | {_fmt(m)} | {_fmt(e)} | {_fmt(r)} | {_fmt(q)}")
        lines.append(f"level statistic (d < {cfg.dmax}): {_fmt(stat)}")
        lines.append(f"X / log^{kappa + 1} X: {_fmt(ref)}")
        if trend_line:
            lines.append(trend_line)
        _emit("\n".join(lines), cfg.out)
    return 0


def _is_squarefree_coprime(d: int) -> bool:
    from .arith import factorint
    factors = factorint(d)
    return (all(e == 1 for e in factors.values())
            and not any(p in BAD_SET for p in factors))


def _mean_residual_ratio(seq, table, moduli) -> float:
    vals = [abs(residual_Rd(seq, table, d)) / seq.X for d in moduli if d > 1]
    return sum(vals) / len(vals) if vals else 0.0


def cmd_census(cfg: RunConfig) -> int:
    if cfg.form is None or cfg.t is None or cfg.T is None:
        raise SieveLabError("census requires --form, --t and --T")
    seq = build_sequence(cfg.form, cfg.t, cfg.T, cfg.c0, cfg.projection)
    weighted, raw = census(seq, cfg.r)
    published = _PUBLISHED_R[cfg.projection][cfg.mode]
    if cfg.output == "json":
        _emit(json.dumps({
            "form": cfg.form.to_string(), "t": cfg.t, "T": cfg.T,
            "projection": cfg.projection, "r": cfg.r, "X": seq.X,
            "weighted": weighted, "raw_count": raw,
            "ratio": weighted / seq.X if seq.X else 0.0,
            "published_r": published, "mode": cfg.mode,
        }, indent=2, sort_keys=True), cfg.out)
    elif cfg.output == "csv":
        _emit("r,weighted,raw_count,X,ratio\n"
              f"{cfg.r},{_fmt(weighted)},{raw},{_fmt(seq.X)},"
              f"{_fmt(weighted / seq.X if seq.X else 0.0)}", cfg.out)
    else:
        lines = [f"form {cfg.form.to_string()}  t={cfg.t}  T={_fmt(cfg.T)}  "
                 f"projection={cfg.projection}",
                 f"census(r={cfg.r}): weighted {_fmt(weighted)}  raw {raw}",
                 f"X = {_fmt(seq.X)}  census/X = "
                 f"{_fmt(weighted / seq.X if seq.X else 0.0)}",
                 f"published r for {cfg.projection} ({cfg.mode} mode): {published}"]
        _emit("\n".join(lines), cfg.out)
    return 0


def cmd_enumerate(cfg: RunConfig, radius: float | None) -> int:
    if cfg.form is None or cfg.t is None:
        raise SieveLabError("enumerate requires --form and --t")
    if radius is None:
        if cfg.T is None:
            raise SieveLabError("enumerate requires --R (or --T with --c0)")
        radius = cfg.c0 * cfg.T
    points = enumerate_points(cfg.form, cfg.t, radius)
    if cfg.T is not None:
        text = points_to_csv(points, cfg.T, cfg.c0)
    else:
        text = points_to_csv(points)
    _emit(text, cfg.out)
    return 0


def cmd_automorphs(cfg: RunConfig, height: int) -> int:
    if cfg.form is None:
        raise SieveLabError("automorphs requires --form")
    autos = find_automorphs(cfg.form, height)
    if cfg.output == "json":
        _emit(json.dumps({
            "form": cfg.form.to_string(), "search_height": height,
            "count": len(autos.generators),
            "generators": [[list(row) for row in m] for m in autos.generators],
        }, indent=2, sort_keys=True), cfg.out)
    elif cfg.output == "csv":
        lines = ["m11,m12,m13,m21,m22,m23,m31,m32,m33"]
        lines += [",".join(str(e) for row in m for e in row)
                  for m in autos.generators]
        _emit("\n".join(lines), cfg.out)
    else:
        lines = [f"form {cfg.form.to_string()}  height={height}  "
                 f"count={len(autos.generators)}"]
        for m in autos.generators:
            lines.append("  " + "; ".join(" ".join(f"{e:3d}" for e in row)
                                          for row in m))
        _emit("\n".join(lines), cfg.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sievelab",
        description="Weighted-sieve constants and quadric point statistics.")
    parser.add_argument("--config", help="key=value file mirroring flag names")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *names):
        if "form" in names:
            p.add_argument("--form", help="a11,a22,a33,a12,a13,a23")
        if "t" in names:
            p.add_argument("--t", type=int)
        if "T" in names:
            p.add_argument("--T", type=float)
        if "c0" in names:
            p.add_argument("--c0", type=float)
        if "projection" in names:
            p.add_argument("--projection", choices=PROJECTIONS)
        if "mode" in names:
            p.add_argument("--mode", choices=("unconditional", "selberg"))
        if "output" in names:
            p.add_argument("--output", choices=("text", "json", "csv"))
        p.add_argument("--out", help="write output to FILE instead of stdout")

    p = sub.add_parser("constants", help="reproduce the threshold constants")
    common(p, "mode", "output")

    p = sub.add_parser("local", help="local counts and densities mod p")
    common(p, "form", "t", "projection", "output")
    p.add_argument("--pmax", type=int)

    p = sub.add_parser("equidist", help="equidistribution residuals")
    common(p, "form", "t", "T", "c0", "projection", "output")
    p.add_argument("--dmax", type=int)
    p.add_argument("--trend", action="store_true",
                   help="also run at 2T and flag residual-ratio growth")

    p = sub.add_parser("census", help="almost-prime census")
    common(p, "form", "t", "T", "c0", "projection", "mode", "output")
    p.add_argument("--r", type=int)

    p = sub.add_parser("enumerate", help="integer points in a ball, as CSV")
    common(p, "form", "t", "T", "c0")
    p.add_argument("--R", type=float, help="enumeration radius (default c0*T)")

    p = sub.add_parser("automorphs", help="integral automorphs of a form")
    common(p, "form", "output")
    p.add_argument("--H", type=int, default=3, help="entry height bound")
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold key=value file entries in as leading flags (explicit flags win)."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if not known.config:
        return argv
    injected = []
    with open(known.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SieveLabError(f"bad config line (want key=value): {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            flag = f"--{key}"
            if flag not in argv and value != "":
                injected.extend([flag, value])
    if not injected:
        return argv
    # insert after the subcommand token so subparsers see them
    for i, tok in enumerate(argv):
        if tok in ("constants", "local", "equidist", "census",
                   "enumerate", "automorphs"):
            return argv[: i + 1] + injected + argv[i + 1 :]
    return argv + injected


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        cfg = RunConfig.from_args(args)
        if args.command == "constants":
            return cmd_constants(cfg)
        if args.command == "local":
            return cmd_local(cfg)
        if args.command == "equidist":
            return cmd_equidist(cfg, trend=args.trend)
        if args.command == "census":
            return cmd_census(cfg)
        if args.command == "enumerate":
            return cmd_enumerate(cfg, args.R)
        if args.command == "automorphs":
            return cmd_automorphs(cfg, args.H)
        raise SieveLabError(f"unknown command {args.command!r}")
    except SieveLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
