"""Command-line job runner.

A job is a single JSON document (stdin or --config PATH) selecting an
array shape, per-cell laws, a target moment order, the engines to run and
the verification suites to apply.  Output is canonical JSON (or CSV) on
stdout.  Exit codes: 0 all engines agree and all checks pass, 1 engine
disagreement or failed check, 2 bad config / usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .analytic import master_cauchy, stieltjes_density
from .arrays import ALL_CELLS, DistributionArray, NamedLaw, SHAPES
from .fock import FockModel
from .matricial import assemble_matricial_r, compressed_residuals, \
    invert_C, linearization_residuals, reconstruct_unique
from .moments import smf_moments
from .series import FLOAT, RATIONAL, TruncatedSeries, scalars_close

MAX_ORDER = 12
ENGINES = ("partition", "fock", "analytic")
CHECKS = ("axioms", "eq56", "eq611", "uniqueness")
FLOAT_TOL = 1e-9


class ConfigError(Exception):
    pass


@dataclass
class JobConfig:
    shape: str
    laws: Dict[Tuple[int, int], NamedLaw]
    order: int
    engines: Tuple[str, ...]
    precision: str
    checks: Tuple[str, ...]
    density: Optional[dict] = None


def _parse_cell_key(key: str) -> Tuple[int, int]:
    try:
        i, j = key.split(",")
        cell = (int(i), int(j))
    except ValueError:
        raise ConfigError("bad cell key %r (want \"i,j\")" % key)
    if cell not in ALL_CELLS:
        raise ConfigError("cell %r outside the 2x2 index set" % key)
    return cell


def _parse_law(spec) -> NamedLaw:
    if isinstance(spec, list):
        return NamedLaw.custom(spec)
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("law must be a cumulant list or a kind object")
    kind = spec["kind"]
    try:
        if kind == "semicircle":
            return NamedLaw.semicircle(spec["a"])
        if kind == "point_mass":
            return NamedLaw.point_mass(spec["b"])
        if kind == "custom":
            return NamedLaw.custom(spec["cumulants"])
    except KeyError as exc:
        raise ConfigError("law %r missing parameter %s" % (kind, exc))
    raise ConfigError("unknown law kind %r" % kind)


def parse_config(data: dict) -> JobConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.get("version", 1) != 1:
        raise ConfigError("unsupported config version %r" % data.get("version"))
    unknown = set(data) - {"version", "shape", "cells", "order", "engines",
                           "precision", "checks", "density"}
    if unknown:
        raise ConfigError("unknown config fields %s" % sorted(unknown))

    shape = data.get("shape", "custom")
    if shape != "custom" and shape not in SHAPES:
        raise ConfigError("unknown shape %r" % shape)
    cells = data.get("cells")
    if not isinstance(cells, dict) or not cells:
        raise ConfigError("config needs a non-empty cells object")
    laws = {_parse_cell_key(k): _parse_law(v) for k, v in cells.items()}
    if shape != "custom" and set(laws) != set(SHAPES[shape]):
        raise ConfigError("cells %s do not match shape %r"
                          % (sorted(cells), shape))

    order = data.get("order", 6)
    if not isinstance(order, int) or not 1 <= order <= MAX_ORDER:
        raise ConfigError("order must be an integer in 1..%d" % MAX_ORDER)

    engines = tuple(data.get("engines", list(ENGINES)))
    if not engines or any(e not in ENGINES for e in engines):
        raise ConfigError("engines must be a non-empty subset of %s"
                          % (ENGINES,))

    precision = data.get("precision", RATIONAL)
    if precision not in (RATIONAL, FLOAT):
        raise ConfigError("precision must be rational or float")

    checks = tuple(data.get("checks", ()))
    if any(c not in CHECKS for c in checks):
        raise ConfigError("checks must be a subset of %s" % (CHECKS,))

    density = data.get("density")
    if density is not None:
        need = {"grid_min", "grid_max", "points"}
        if not isinstance(density, dict) or not need <= set(density):
            raise ConfigError("density block needs grid_min, grid_max, points")
        if precision != FLOAT:
            raise ConfigError("density extraction requires float precision")
        if float(density.get("eps", 1e-3)) <= 0:
            raise ConfigError("density eps must be positive")

    return JobConfig(shape=shape, laws=laws, order=order, engines=engines,
                     precision=precision, checks=checks, density=density)


def _render(value):
    if isinstance(value, Fraction):
        return "%d/%d" % (value.numerator, value.denominator)
    return float(value)


def _render_series(series: TruncatedSeries) -> list:
    return [_render(c) for c in series.coeffs]


def _series_agree(a: TruncatedSeries, b: TruncatedSeries, mode: str) -> bool:
    if mode == RATIONAL:
        return a == b
    return a.agrees(b, FLOAT_TOL)


def run(config: JobConfig) -> Tuple[dict, int]:
    """Execute one job; returns (report, exit_code)."""
    mode = config.precision
    array = DistributionArray.from_laws(config.laws, config.order, mode)
    depth = config.order
    model = None

    report: dict = {
        "version": 1,
        "shape": config.shape,
        "precision": mode,
        "order": config.order,
        "engines": list(config.engines),
    }
    failed = False

    moments: Dict[str, TruncatedSeries] = {}
    for engine in config.engines:
        if engine == "partition":
            moments[engine] = smf_moments(array, config.order)
        elif engine == "fock":
            model = model or FockModel(array, depth)
            moments[engine] = model.moments(config.order)
        elif engine == "analytic":
            moments[engine] = master_cauchy(array, config.order)
    report["moments"] = {e: _render_series(m) for e, m in moments.items()}

    names = list(moments)
    agree = all(_series_agree(moments[names[0]], moments[e], mode)
                for e in names[1:])
    report["agreement"] = agree
    failed = failed or not agree

    if config.checks:
        checks_out = {}
        zero = Fraction(0) if mode == RATIONAL else 0.0
        one = Fraction(1) if mode == RATIONAL else 1.0

        def residuals_ok(res):
            return (scalars_close(res[0], one, FLOAT_TOL)
                    and all(scalars_close(v, zero, FLOAT_TOL)
                            for v in res[1:]))

        for check in config.checks:
            if check == "axioms":
                model = model or FockModel(array, depth)
                violations = model.axiom_check(
                    trials=50, max_length=min(5, depth), seed=1)
                checks_out[check] = {"pass": not violations,
                                     "violations": violations}
            elif check in ("eq56", "eq611"):
                model = model or FockModel(array, depth)
                r_unit = assemble_matricial_r(array, config.order - 1)
                b_unit = invert_C(r_unit)
                if check == "eq56":
                    res = linearization_residuals(model, b_unit, config.order)
                    checks_out[check] = {
                        "pass": residuals_ok(res),
                        "residuals": [_render(v) for v in res]}
                else:
                    table = compressed_residuals(model, b_unit, config.order)
                    rows = {"%d,%d" % cell: [_render(v) for v in res]
                            for cell, res in table.items()}
                    checks_out[check] = {
                        "pass": all(residuals_ok(res)
                                    for res in table.values()),
                        "residuals": rows}
            elif check == "uniqueness":
                model = model or FockModel(array, depth)
                target = config.order - 1
                rebuilt = reconstruct_unique(model, target)
                assembled = assemble_matricial_r(array, target)
                ok = (rebuilt == assembled if mode == RATIONAL
                      else rebuilt.agrees(assembled, FLOAT_TOL))
                checks_out[check] = {"pass": ok}
            failed = failed or not checks_out[check]["pass"]
        report["checks"] = checks_out

    if config.density is not None:
        d = config.density
        pts = int(d["points"])
        lo, hi = float(d["grid_min"]), float(d["grid_max"])
        eps = float(d.get("eps", 1e-3))
        if pts < 2:
            raise ConfigError("density needs at least 2 grid points")
        grid = [lo + (hi - lo) * k / (pts - 1) for k in range(pts)]
        rows, atoms = stieltjes_density(array, grid, eps)
        report["density"] = {
            "eps": eps,
            "grid": [[x, y] for x, y in rows],
            "atoms": [[p, w] for p, w in atoms],
        }

    return report, (1 if failed else 0)


def _emit(report: dict, out_format: str) -> str:
    if out_format == "json":
        return json.dumps(report, sort_keys=True, separators=(",", ":"))
    lines = []
    if "density" in report:
        lines.append("x,density")
        for x, y in report["density"]["grid"]:
            lines.append("%r,%r" % (x, y))
        lines.append("atom_position,atom_weight")
        for p, w in report["density"]["atoms"]:
            lines.append("%r,%r" % (p, w))
    else:
        engines = [e for e in ENGINES if e in report["moments"]]
        lines.append("n," + ",".join(engines))
        for n in range(report["order"] + 1):
            row = [str(n)]
            for e in engines:
                row.append(str(report["moments"][e][n]))
            lines.append(",".join(row))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="smfconv",
        description="Compute and cross-verify moments of strongly "
                    "matricially free convolutions of 2x2 arrays.")
    parser.add_argument("--config", help="path to the job JSON "
                                         "(default: read stdin)")
    parser.add_argument("--order", type=int, help="override moment order")
    parser.add_argument("--engines", help="comma list: partition,fock,analytic")
    parser.add_argument("--precision", choices=(RATIONAL, FLOAT))
    parser.add_argument("--checks", help="comma list: axioms,eq56,eq611,"
                                         "uniqueness")
    parser.add_argument("--out", choices=("json", "csv"), default="json")
    parser.add_argument("--density-eps", type=float,
                        help="override density smoothing epsilon")
    args = parser.parse_args(argv)

    try:
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            if sys.stdin.isatty():
                raise ConfigError("no --config and stdin is a terminal")
            data = json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2

    if args.order is not None:
        data["order"] = args.order
    if args.engines:
        data["engines"] = args.engines.split(",")
    if args.precision:
        data["precision"] = args.precision
    if args.checks is not None:
        data["checks"] = [c for c in args.checks.split(",") if c]
    if args.density_eps is not None:
        if "density" in data and data["density"]:
            data["density"]["eps"] = args.density_eps
        else:
            print("config error: --density-eps without a density block",
                  file=sys.stderr)
            return 2

    try:
        config = parse_config(data)
        report, code = run(config)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2

    print(_emit(report, args.out))
    if code:
        print("verification failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
