"""Command line: integrate, transform, sensor, fixture.

Exit codes: 0 success, 2 parse/config error, 3 precondition violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import document
from .cf import CFun, integrate_cf, integrate_cf_levelset
from .defint import AVG, CEIL, FLOOR, DefFun, Measure, conjugate, integrate, integrate_levelset, pushforward_to_line, riemann_oracle
from .errors import ConfigError, IncompatibleMethod, ParseError, PreconditionError
from .fixtures import NAMED
from .morse import integrate_via_index
from .planar import integrate_betti0
from .sensor import Disk, ExperimentConfig, Rect, TargetScene, run_experiment
from .transforms import WIDTH, dual, kernel_transform, link

METHODS = ("closed", "levelset", "riemann:n", "morse", "betti0", "pushline")


def fmt_decimal(x) -> str:
    return f"{float(x):.12g}"


# integrate -------------------------------------------------------------------


def _parse_method(s: str):
    if s.startswith("riemann:"):
        try:
            n = int(s.split(":", 1)[1])
        except ValueError as exc:
            raise ParseError(f"bad riemann resolution in {s!r}") from exc
        if n < 1:
            raise ParseError("riemann resolution must be positive")
        return "riemann", n
    if s not in METHODS or s == "riemann:n":
        raise ParseError(f"unknown method {s!r}; choose from {', '.join(METHODS)}")
    return s, None


def _by_measure(fn, h: DefFun, m: Measure) -> Fraction:
    """Evaluate a FLOOR-only path for any measure: ⌈dχ⌉ via −∫(−h)⌊dχ⌋."""
    lo = fn(h) if m is not CEIL else None
    hi = -fn(conjugate(h)) if m is not FLOOR else None
    if m is FLOOR:
        return lo
    if m is CEIL:
        return hi
    return (lo + hi) / 2


def integrate_document(doc: document.Document, measure: str = "floor", method: str = "closed"):
    """Returns (value, bound); bound is None except for the Riemann method."""
    name, n = _parse_method(method)
    f = doc.function
    if measure == "dchi":
        if not isinstance(f, CFun):
            if isinstance(f, DefFun) and f.is_cellwise_constant and all(v.denominator == 1 for v in f.cell_min):
                f = f.to_cfun()
            else:
                raise IncompatibleMethod("dχ integrates integer constructible functions only")
        if name == "closed":
            return Fraction(integrate_cf(f)), None
        if name == "levelset":
            return Fraction(integrate_cf_levelset(f)), None
        h, m = DefFun.from_cfun(f), FLOOR  # both measures agree on CF
    else:
        h = DefFun.from_cfun(f) if isinstance(f, CFun) else f
        m = Measure.parse(measure)
    if name == "closed":
        return integrate(h, m), None
    if name == "levelset":
        return integrate_levelset(h, m), None
    if name == "riemann":
        return riemann_oracle(h, n, m), Fraction(len(h.complex.cells), n)
    if name == "pushline":
        return pushforward_to_line(h, m), None
    if name == "morse":
        if not h.is_continuous:
            raise IncompatibleMethod("morse needs a continuous integrand")
        lo = integrate_via_index(h, "coindex")
        hi = integrate_via_index(h, "index")
        return {FLOOR: lo, CEIL: hi, AVG: (lo + hi) / 2}[m], None
    if name == "betti0":
        try:
            return _by_measure(integrate_betti0, h, m), None
        except PreconditionError as exc:
            raise IncompatibleMethod(f"betti0 needs a continuous planar integrand: {exc}") from exc
    raise ParseError(f"unknown method {method!r}")


def cmd_integrate(args, out) -> int:
    doc = document.load(args.file)
    value, bound = integrate_document(doc, args.measure, args.method)
    print(value, file=out)
    print(f"~ {fmt_decimal(value)}", file=out)
    if bound is not None:
        print(f"bound {bound}", file=out)
    return 0


# transform -------------------------------------------------------------------


def parse_xi(s: str) -> tuple:
    parts = s.split(",")
    if not parts or any(not p.strip() for p in parts):
        raise ParseError(f"bad direction {s!r}; expected comma-separated rationals")
    return tuple(document.parse_rat(p) for p in parts)


def transform_document(doc: document.Document, op: str, xis=()):
    """dual/link give a Document; width/centroid give one value per ξ."""
    f = doc.function
    if op in ("dual", "link"):
        h = DefFun.from_cfun(f) if isinstance(f, CFun) else f
        g = dual(h) if op == "dual" else link(h)
        if isinstance(f, CFun):
            g = g.to_cfun()
        return document.Document(doc.complex, g, f"{op}({doc.name})" if doc.name else op)
    if op in ("width", "centroid"):
        if not xis:
            raise ParseError(f"--op {op} needs at least one --xi")
        return kernel_transform(f, xis, WIDTH if op == "width" else "avg")
    raise ParseError(f"unknown op {op!r}")


def cmd_transform(args, out) -> int:
    doc = document.load(args.file)
    xis = [parse_xi(s) for s in args.xi or ()]
    result = transform_document(doc, args.op, xis)
    if isinstance(result, document.Document):
        if args.out:
            document.save(result, args.out)
        else:
            out.write(document.dumps(result))
    else:
        for v in result:
            print(v, file=out)
    return 0


# sensor ----------------------------------------------------------------------


def _rats(v, n, what):
    if not isinstance(v, list) or len(v) != n:
        raise ConfigError(f"{what} needs {n} rationals")
    try:
        return [document.parse_rat(x) for x in v]
    except ParseError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def _shape(d, what):
    if not isinstance(d, dict):
        raise ConfigError(f"{what} must be an object")
    kind = d.get("type")
    if kind == "disk":
        cx, cy = _rats(d.get("center"), 2, f"{what} center")
        (r,) = _rats([d.get("radius")], 1, f"{what} radius")
        if r <= 0:
            raise ConfigError(f"{what} radius must be positive")
        return Disk(cx, cy, r)
    if kind == "rect":
        x0, y0 = _rats(d.get("min"), 2, f"{what} min")
        x1, y1 = _rats(d.get("max"), 2, f"{what} max")
        if x1 < x0 or y1 < y0:
            raise ConfigError(f"{what} has min above max")
        return Rect(x0, y0, x1, y1)
    raise ConfigError(f"{what} type must be 'disk' or 'rect'")


def parse_sensor_config(d: dict, seeds=None) -> ExperimentConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    known = {"window", "grid", "p", "targets", "holes", "seeds", "measure", "mode", "euler_char"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
    window = _rats(d.get("window", [0, 12, 0, 12]), 4, "window")
    grid = d.get("grid", [30, 30])
    if not (isinstance(grid, list) and len(grid) == 2 and all(isinstance(g, int) and g > 0 for g in grid)):
        raise ConfigError("grid must be two positive integers")
    (p,) = _rats([d.get("p", "1/3")], 1, "p")
    if not 0 <= p <= 1:
        raise ConfigError("p must lie in [0, 1]")
    targets = d.get("targets")
    if not isinstance(targets, list) or not targets:
        raise ConfigError("targets must be a nonempty list")
    holes = d.get("holes", [])
    if not isinstance(holes, list):
        raise ConfigError("holes must be a list")
    holes = tuple(_shape(h, f"hole {i}") for i, h in enumerate(holes))
    if any(not isinstance(h, Disk) for h in holes):
        raise ConfigError("holes must be disks")
    chi = d.get("euler_char", 1)
    if not isinstance(chi, int) or chi == 0:
        raise ConfigError("euler_char must be a nonzero integer")
    if seeds is None:
        seeds = d.get("seeds", 30)
    if isinstance(seeds, int) and seeds > 0:
        seeds = tuple(range(seeds))
    elif isinstance(seeds, list) and all(isinstance(s, int) and s >= 0 for s in seeds) and seeds:
        seeds = tuple(seeds)
    else:
        raise ConfigError("seeds must be a positive count or a list of nonnegative integers")
    try:
        measure = Measure.parse(d.get("measure", "floor"))
    except (ValueError, ParseError) as exc:
        raise ConfigError(str(exc)) from exc
    mode = d.get("mode", "pl")
    if mode not in ("pl", "usc", "lsc"):
        raise ConfigError("mode must be pl, usc or lsc")
    return ExperimentConfig(
        scene=TargetScene(tuple(_shape(t, f"target {i}") for i, t in enumerate(targets)), chi),
        nx=grid[0],
        ny=grid[1],
        window=tuple(window),
        p=p,
        holes=holes,
        seeds=seeds,
        measure=measure,
        mode=mode,
    )


def load_sensor_config(path, seeds=None) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_sensor_config(d, seeds)


def report_csv(report, exact: bool = False) -> str:
    show = str if exact else (lambda x: f"{float(x):.6f}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "truth", "raw_estimate", "smoothed_estimate"])
    for r in report.rows:
        w.writerow([r.seed, r.truth, show(r.raw_estimate), show(r.smoothed_estimate)])
    med = report.medians()
    w.writerow(["median", report.truth, show(med["raw_estimate"]), show(med["smoothed_estimate"])])
    return buf.getvalue()


def cmd_sensor(args, out) -> int:
    config = load_sensor_config(args.config, args.seeds)
    report = run_experiment(config)
    text = report_csv(report, args.exact)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.render:
        from .plotting import estimates_figure, render_seed, save_svg

        for r in report.rows:
            render_seed(report.network, r, args.render, args.format)
        save_svg(estimates_figure(report.rows, "estimates by seed"), os.path.join(args.render, "estimates.svg"))
    if args.out:
        med = report.medians()
        print(
            f"truth {report.truth}; median |raw-truth| {fmt_decimal(med['raw_abs_error'])}; "
            f"median |smoothed-truth| {fmt_decimal(med['smoothed_abs_error'])}",
            file=out,
        )
    return 0


# fixture ---------------------------------------------------------------------

SENSOR_EXAMPLE = {
    "window": ["0", "12", "0", "12"],
    "grid": [30, 30],
    "p": "1/3",
    "targets": [{"type": "disk", "center": [str(2 + 4 * i), str(2 + 4 * j)], "radius": "1"} for j in range(3) for i in range(3)],
    "holes": [],
    "seeds": 30,
}


def cmd_fixture(args, out) -> int:
    if args.name == "sensor-config":
        text = json.dumps(SENSOR_EXAMPLE, indent=1) + "\n"
    else:
        text = document.dumps(NAMED[args.name]())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


# entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="defeuler", description="Euler-characteristic integration of piecewise-linear functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="integrate the function in a document")
    p.add_argument("file")
    p.add_argument("--measure", choices=("floor", "ceil", "avg", "dchi"), default="floor")
    p.add_argument("--method", default="closed", help="closed, levelset, riemann:N, morse, betti0 or pushline")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("transform", help="duality, link or kernel transforms")
    p.add_argument("file")
    p.add_argument("--op", choices=("dual", "link", "width", "centroid"), required=True)
    p.add_argument("--xi", action="append", help="direction a,b (repeatable)")
    p.add_argument("--out", help="write the result document here instead of stdout")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("sensor", help="run the target-counting experiment")
    p.add_argument("config")
    p.add_argument("--seeds", type=int, help="run seeds 0..k-1 (overrides the config)")
    p.add_argument("--out", help="CSV report path (stdout if omitted)")
    p.add_argument("--render", help="directory for field images")
    p.add_argument("--format", choices=("svg", "pgm"), default="svg", help="image format for --render")
    p.add_argument("--exact", action="store_true", help="write estimates as exact rationals")
    p.set_defaults(func=cmd_sensor)

    p = sub.add_parser("fixture", help="write a named example document or the example sensor config")
    p.add_argument("name", choices=sorted(NAMED) + ["sensor-config"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixture)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "seeds", None) is not None and args.seeds < 1:
        print("error: --seeds must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
