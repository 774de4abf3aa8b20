"""Command-line front end.

Subcommands::

    measures   per-stratum RD/RR/OR/OP/eta plus the four interaction coordinates
    feasible   homogeneity completion and verdict for three known risks
    volume     Monte Carlo compatibility probabilities under a box prior
    power      repeated-sampling rejection rates of the Wald interaction tests
    convert    translate a point between coordinate systems

Output formats: ``plain`` (6 significant digits), ``csv`` and ``json`` (full
float precision).  Exit codes: 0 success, 2 usage or configuration parse
error, 3 domain error, 4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import coords as coords_mod
from . import power, table, volume
from .errors import EffectGeomError
from .homogeneity import (
    HomogeneityQuery,
    complete_table,
    completion_candidate,
)
from .table import MEASURES, RiskTable, StratumPair

_CONVERT_FIELDS = {
    "prob": ("p00", "p01", "p10", "p11"),
    "poisson": ("beta0", "beta1", "alpha0", "alpha1"),
    "rr_op": ("alpha0", "alpha1", "gamma0", "gamma1"),
    "logistic": ("b0", "b1", "a0", "a1"),
    "rr_eta": ("alpha0", "alpha1", "e0", "e1"),
}


class ConfigError(Exception):
    """Configuration document cannot be parsed; message cites the line."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _emit_plain(lines: list[str]) -> str:
    return "\n".join(lines) + "\n"


def _emit_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def _emit_json(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


def _stratum_report(s: StratumPair) -> dict[str, float]:
    return {
        "rd": table.risk_difference(s),
        "rr": table.relative_risk(s),
        "or": table.odds_ratio(s),
        "op": table.odds_product(s),
        "eta": table.eta(s),
    }


def _interactions(t: RiskTable) -> dict[str, float]:
    s0, s1 = t.stratum(0), t.stratum(1)
    r0, r1 = _stratum_report(s0), _stratum_report(s1)
    log_eta = (
        math.log(r1["eta"]) - math.log(r0["eta"])
        if r0["eta"] > 0.0 and r1["eta"] > 0.0
        else math.nan
    )
    return {
        "rd": r1["rd"] - r0["rd"],
        "log_rr": math.log(r1["rr"]) - math.log(r0["rr"]),
        "log_or": math.log(r1["or"]) - math.log(r0["or"]),
        "log_eta": log_eta,
    }


def cmd_measures(args) -> str:
    t = RiskTable(p00=args.p00, p01=args.p01, p10=args.p10, p11=args.p11)
    strata = [_stratum_report(t.stratum(v)) for v in (0, 1)]
    inter = _interactions(t)
    if args.format == "json":
        return _emit_json(
            {
                "table": {"p00": t.p00, "p01": t.p01, "p10": t.p10, "p11": t.p11},
                "strata": [{"stratum": v, **strata[v]} for v in (0, 1)],
                "interactions": inter,
            }
        )
    if args.format == "csv":
        rows = [[name, v, strata[v][name]] for v in (0, 1) for name in strata[v]]
        rows += [[f"interaction_{name}", None, value] for name, value in inter.items()]
        return _emit_csv(["quantity", "stratum", "value"], rows)
    lines = []
    for v in (0, 1):
        for name, value in strata[v].items():
            lines.append(f"{name}({v}) = {_fmt(value)}")
    for name, value in inter.items():
        lines.append(f"interaction.{name} = {_fmt(value)}")
    return _emit_plain(lines)


# ---------------------------------------------------------------------------
# feasible
# ---------------------------------------------------------------------------


def cmd_feasible(args) -> str:
    q = HomogeneityQuery(measure=args.measure, p00=args.p00, p10=args.p10, p01=args.p01)
    candidate = completion_candidate(q)
    completion = complete_table(q)
    feasible = completion is not None
    if args.format == "json":
        return _emit_json(
            {
                "measure": q.measure,
                "p00": q.p00,
                "p10": q.p10,
                "p01": q.p01,
                "candidate_p11": candidate,
                "feasible": feasible,
            }
        )
    if args.format == "csv":
        return _emit_csv(
            ["measure", "p00", "p10", "p01", "candidate_p11", "feasible"],
            [[q.measure, q.p00, q.p10, q.p01, candidate, feasible]],
        )
    verdict = (
        f"feasible, p11 = {_fmt(candidate)}"
        if feasible
        else f"infeasible (candidate {_fmt(candidate)})"
    )
    line = (
        f"{q.measure}-homogeneity for (p00={_fmt(q.p00)}, p10={_fmt(q.p10)}, "
        f"p01={_fmt(q.p01)}): {verdict}"
    )
    return _emit_plain([line])


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------


def _parse_bounds(text: str, where: str) -> volume.Bounds:
    pairs = []
    for part in text.split(","):
        part = part.strip()
        pieces = part.split(":")
        if len(pieces) != 2:
            raise ConfigError(f"{where}: bound {part!r} is not of the form low:high")
        try:
            pairs.append((float(pieces[0]), float(pieces[1])))
        except ValueError:
            raise ConfigError(f"{where}: bound {part!r} has a non-numeric endpoint") from None
    if len(pairs) != 3:
        raise ConfigError(f"{where}: expected 3 comma-separated bounds, got {len(pairs)}")
    return tuple(pairs)


def parse_prior_config(text: str) -> tuple[dict, list[str]]:
    """Parse the volume configuration document.

    Flat ``key = value`` pairs (system, seed, n_samples, optional bounds)
    followed by one ``[target NAME]`` section per requested target.  Raises
    `ConfigError` with the offending line number.
    """
    keys: dict[str, object] = {}
    targets: list[str] = []
    in_sections = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: unterminated section header {raw.strip()!r}")
            inner = line[1:-1].strip()
            parts = inner.split()
            if len(parts) != 2 or parts[0] != "target":
                raise ConfigError(f"line {lineno}: expected [target NAME], got {raw.strip()!r}")
            target = parts[1].lower()
            if target not in MEASURES:
                raise ConfigError(
                    f"line {lineno}: unknown target {parts[1]!r} (expected one of {MEASURES})"
                )
            targets.append(target)
            in_sections = True
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        if in_sections:
            raise ConfigError(f"line {lineno}: key = value not allowed inside a target section")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "system":
            keys["system"] = value
        elif key == "seed":
            try:
                keys["seed"] = int(value)
            except ValueError:
                raise ConfigError(f"line {lineno}: seed must be an integer, got {value!r}") from None
        elif key == "n_samples":
            try:
                keys["n_samples"] = int(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: n_samples must be an integer, got {value!r}"
                ) from None
        elif key == "bounds":
            keys["bounds"] = _parse_bounds(value, f"line {lineno}")
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    for required in ("system", "seed", "n_samples"):
        if required not in keys:
            raise ConfigError(f"missing required key {required!r}")
    if not targets:
        raise ConfigError("no [target NAME] sections found")
    return keys, targets


def format_prior_config(prior: volume.PriorSpec, targets: list[str]) -> str:
    """Render a prior as a configuration document `parse_prior_config` accepts."""
    bounds = ", ".join(f"{lo:g}:{hi:g}" for lo, hi in prior.bounds)
    lines = [
        f"system = {prior.system}",
        f"seed = {prior.seed}",
        f"n_samples = {prior.n_samples}",
        f"bounds = {bounds}",
        "",
    ]
    lines += [f"[target {t}]" for t in targets]
    return "\n".join(lines) + "\n"


def _volume_rows(prior: volume.PriorSpec, targets: list[str], workers) -> list[dict]:
    rows = []
    for target in targets:
        est = volume.estimate(prior, target, workers=workers)
        analytic = (
            float(volume.analytic_cube_probability(target))
            if volume.is_unit_cube(prior)
            else None
        )
        rows.append(
            {
                "system": prior.system,
                "target": target,
                "n_samples": est.n_samples,
                "seed": prior.seed,
                "probability": est.probability,
                "std_error": est.std_error,
                "n_compatible": est.n_compatible,
                "analytic": analytic,
            }
        )
    return rows


def cmd_volume(args) -> str:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            keys, targets = parse_prior_config(fh.read())
        prior = volume.PriorSpec(
            system=keys["system"],
            n_samples=keys["n_samples"],
            seed=keys["seed"],
            bounds=keys.get("bounds"),
        )
    else:
        if not args.target:
            raise ConfigError("at least one --target is required without --config")
        bounds = _parse_bounds(args.bounds, "--bounds") if args.bounds else None
        prior = volume.PriorSpec(
            system=args.system, n_samples=args.n_samples, seed=args.seed, bounds=bounds
        )
        targets = [t.lower() for t in args.target]
    rows = _volume_rows(prior, targets, args.workers)
    if args.format == "json":
        return _emit_json(rows)
    header = [
        "system",
        "target",
        "n_samples",
        "seed",
        "probability",
        "std_error",
        "n_compatible",
        "analytic",
    ]
    if args.format == "csv":
        return _emit_csv(header, [[row[k] for k in header] for row in rows])
    lines = []
    for row in rows:
        extra = "" if row["analytic"] is None else f"  (analytic {_fmt(row['analytic'])})"
        lines.append(
            f"{row['system']}/{row['target']}: probability = {_fmt(row['probability'])} "
            f"+- {_fmt(row['std_error'])}  [{row['n_compatible']}/{row['n_samples']} "
            f"compatible, seed {row['seed']}]{extra}"
        )
    return _emit_plain(lines)


# ---------------------------------------------------------------------------
# power
# ---------------------------------------------------------------------------


def cmd_power(args) -> str:
    truth = RiskTable(p00=args.p00, p01=args.p01, p10=args.p10, p11=args.p11)
    if args.n is not None:
        design = power.StudyDesign(args.n, args.n, args.n, args.n)
    else:
        missing = [f for f in ("n00", "n01", "n10", "n11") if getattr(args, f) is None]
        if missing:
            raise ConfigError(
                "provide either --n or all of --n00 --n01 --n10 --n11 "
                f"(missing: {', '.join('--' + m for m in missing)})"
            )
        design = power.StudyDesign(args.n00, args.n01, args.n10, args.n11)
    result = power.simulate_power(
        truth, design, alpha=args.alpha, reps=args.reps, seed=args.seed, workers=args.workers
    )
    rows = [
        {
            "scale": scale,
            "n_pattern": design.pattern(),
            "alpha": result.alpha,
            "reps": result.reps,
            "rejection_rate": sp.rate,
            "std_error": sp.std_error,
            "degenerate_count": sp.n_degenerate,
        }
        for scale, sp in result.by_scale.items()
    ]
    if args.format == "json":
        return _emit_json(rows)
    header = [
        "scale",
        "n_pattern",
        "alpha",
        "reps",
        "rejection_rate",
        "std_error",
        "degenerate_count",
    ]
    if args.format == "csv":
        return _emit_csv(header, [[row[k] for k in header] for row in rows])
    lines = [
        f"{row['scale']}: rejection rate = {_fmt(row['rejection_rate'])} "
        f"+- {_fmt(row['std_error'])}  (alpha {_fmt(row['alpha'])}, reps {row['reps']}, "
        f"n {row['n_pattern']}, degenerate {row['degenerate_count']})"
        for row in rows
    ]
    return _emit_plain(lines)


# ---------------------------------------------------------------------------
# convert
# ---------------------------------------------------------------------------


def _coords_from_args(system: str, args) -> object:
    fields = _CONVERT_FIELDS[system]
    values = {}
    missing = []
    for f in fields:
        v = getattr(args, f)
        if v is None:
            missing.append(f"--{f}")
        else:
            values[f] = v
    if missing:
        raise ConfigError(f"system {system!r} requires flags: {', '.join(missing)}")
    if system == "prob":
        return RiskTable(**values)
    cls = {
        "poisson": coords_mod.PoissonCoords,
        "rr_op": coords_mod.RrOpCoords,
        "logistic": coords_mod.LogisticCoords,
        "rr_eta": coords_mod.RrEtaCoords,
    }[system]
    return cls(**values)


def _to_tables(system: str, value) -> list[RiskTable]:
    if system == "prob":
        return [value]
    if system == "poisson":
        return [coords_mod.from_poisson(value)]
    if system == "rr_op":
        return [coords_mod.from_rr_op(value)]
    if system == "logistic":
        return [coords_mod.from_logistic(value)]
    return coords_mod.from_rr_eta(value)


def _from_table(system: str, t: RiskTable):
    if system == "prob":
        return {"p00": t.p00, "p01": t.p01, "p10": t.p10, "p11": t.p11}
    fn = {
        "poisson": coords_mod.to_poisson,
        "rr_op": coords_mod.to_rr_op,
        "logistic": coords_mod.to_logistic,
        "rr_eta": coords_mod.to_rr_eta,
    }[system]
    c = fn(t)
    return {f: getattr(c, f) for f in _CONVERT_FIELDS[system]}


def cmd_convert(args) -> str:
    src = args.from_system
    dst = args.to_system
    value = _coords_from_args(src, args)
    tables = _to_tables(src, value)
    solutions = [_from_table(dst, t) for t in tables]
    if args.format == "json":
        return _emit_json(
            {"from": src, "to": dst, "count": len(solutions), "solutions": solutions}
        )
    if args.format == "csv":
        rows = [
            [i, field, sol[field]]
            for i, sol in enumerate(solutions)
            for field in _CONVERT_FIELDS[dst]
        ]
        return _emit_csv(["solution", "field", "value"], rows)
    lines = [f"{src} -> {dst}: {len(solutions)} solution(s)"]
    for i, sol in enumerate(solutions):
        parts = ", ".join(f"{field} = {_fmt(v)}" for field, v in sol.items())
        lines.append(f"[{i}] {parts}")
    return _emit_plain(lines)


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--format", choices=("plain", "csv", "json"), default="plain", help="output format"
    )


def _add_table_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    for f in ("p00", "p01", "p10", "p11"):
        p.add_argument(f"--{f}", type=float, required=required, help=f"risk {f} (stratum, arm)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effectgeom",
        description="Geometry of binary-association effect measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="per-stratum measures and interactions")
    _add_table_flags(p)
    _add_format(p)
    p.set_defaults(fn=cmd_measures)

    p = sub.add_parser("feasible", help="homogeneity completion for three known risks")
    p.add_argument("--p00", type=float, required=True)
    p.add_argument("--p10", type=float, required=True)
    p.add_argument("--p01", type=float, required=True)
    p.add_argument("--measure", choices=MEASURES, required=True)
    _add_format(p)
    p.set_defaults(fn=cmd_feasible)

    p = sub.add_parser("volume", help="Monte Carlo compatibility probability")
    p.add_argument("--config", help="path to a prior configuration document")
    p.add_argument("--system", choices=tuple(volume.DEFAULT_BOUNDS), default="prob")
    p.add_argument("--target", action="append", choices=MEASURES, help="repeatable")
    p.add_argument("--n-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bounds", help='three low:high pairs, e.g. "0:1,0:1,0:1"')
    p.add_argument("--workers", type=int, default=None)
    _add_format(p)
    p.set_defaults(fn=cmd_volume)

    p = sub.add_parser("power", help="Wald interaction-test power simulation")
    _add_table_flags(p)
    p.add_argument("--n", type=int, default=None, help="common per-cell sample size")
    for f in ("n00", "n01", "n10", "n11"):
        p.add_argument(f"--{f}", type=int, default=None)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    _add_format(p)
    p.set_defaults(fn=cmd_power)

    p = sub.add_parser("convert", help="translate between coordinate systems")
    p.add_argument("--from-system", choices=coords_mod.SYSTEMS, required=True)
    p.add_argument("--to-system", choices=coords_mod.SYSTEMS, required=True)
    _add_table_flags(p, required=False)
    for f in ("beta0", "beta1", "alpha0", "alpha1", "gamma0", "gamma1", "b0", "b1", "a0", "a1", "e0", "e1"):
        p.add_argument(f"--{f}", type=float, default=None)
    _add_format(p)
    p.set_defaults(fn=cmd_convert)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sys.stdout.write(args.fn(args))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EffectGeomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
