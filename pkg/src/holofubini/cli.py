"""Command-line harness: assemble spaces, families, and functionals, run the
checker battery, and emit JSON-lines or CSV reports.

Exit codes: 0 when every check passes, 1 on any violation, 2 on usage or
configuration errors.  Reports are written only after the whole battery has
run, in canonical order, so identical configurations and seeds produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import theorems
from .family import HoloFamily, family_from_json, family_preset, preset_names
from .functional import (MeasureFunctional, derivative_functional, dirac,
                         functional_from_json, random_measure)
from .measure import FiniteMeasureSpace, space_from_json, space_preset
from .theorems import CONTOUR_SHRINK, CheckReport

CHECK_NAMES = (
    "linearization",
    "fubini",
    "derivative_consistency",
    "diff_under_integral",
    "norm_bound",
    "span",
    "schwarz",
    "telescoping",
    "order_bound",
    "derivative_profile",
)

USAGE_ERROR = 2


class ConfigError(Exception):
    pass


@dataclass
class SuiteConfig:
    """Validated run configuration; building it performs all precondition checks."""

    family: HoloFamily
    space: FiniteMeasureSpace
    functionals: list[MeasureFunctional]
    p_list: list[float]
    n: int = 64
    shrink: float = 0.5
    grid: int = 32
    tol: float | None = None
    seed: int = 0
    output: str | None = None
    fmt: str = "json"
    checks: tuple[str, ...] = CHECK_NAMES
    duals: int = 10

    def __post_init__(self):
        if self.n < 4:
            raise ConfigError(f"--nodes must be at least 4, got {self.n}")
        if not 0.0 < self.shrink <= 0.9:
            raise ConfigError(f"--shrink must lie in (0, 0.9], got {self.shrink}")
        if self.grid < 2:
            raise ConfigError(f"--grid must be at least 2, got {self.grid}")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError("--tol must be positive")
        for p in self.p_list:
            if p < 1:
                raise ConfigError(f"exponents must satisfy p >= 1, got {p}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"--format must be json or csv, got {self.fmt}")
        unknown = set(self.checks) - set(CHECK_NAMES)
        if unknown:
            raise ConfigError(f"unknown checks: {sorted(unknown)}")
        self.family.validate_on(self.space)
        for phi in self.functionals:
            if phi.d != self.family.d:
                raise ConfigError(
                    f"functional {phi.label!r} has dimension {phi.d}, family needs {self.family.d}"
                )
            if not self.family.domain.contains_all(phi.nodes, 1.0):
                raise ConfigError(
                    f"functional {phi.label!r} has nodes outside the family domain"
                )


def default_functionals(fam: HoloFamily, n: int, shrink: float, seed: int):
    """The stock battery: a Dirac node, first- and second-order derivative
    functionals at the domain center, and a seeded 8-node random measure."""
    offset = fam.domain.center + 0.5 * shrink * fam.domain.radius
    contour = fam.domain.radius * CONTOUR_SHRINK
    alpha1 = (1,) + (0,) * (fam.d - 1)
    alpha2 = (2,) + (0,) * (fam.d - 1)
    return [
        dirac(offset),
        derivative_functional(fam.domain.center, alpha1, contour, n=n),
        derivative_functional(fam.domain.center, alpha2, contour, n=n),
        random_measure(fam.domain, k=8, shrink=shrink, seed=seed),
    ]


def _random_duals(space: FiniteMeasureSpace, count: int, rng) -> list[np.ndarray]:
    return [rng.standard_normal(space.natoms) + 1j * rng.standard_normal(space.natoms)
            for _ in range(count)]


def _sample_in(fam: HoloFamily, count: int, shrink: float, rng) -> list[np.ndarray]:
    radial = np.sqrt(rng.random((count, fam.d)))
    angle = rng.random((count, fam.d)) * 2.0 * np.pi
    pts = fam.domain.center + shrink * fam.domain.radius * radial * np.exp(1j * angle)
    return list(pts)


def _alpha_battery(d: int, max_total: int = 2):
    out = []
    for alpha in np.ndindex(*((max_total + 1,) * d)):
        if sum(alpha) <= max_total:
            out.append(tuple(int(a) for a in alpha))
    return sorted(out, key=lambda a: (sum(a), a))


def run_suite(config: SuiteConfig) -> tuple[int, list[dict]]:
    """Run the configured battery; returns (exit_code, report_records)."""
    fam, space = config.family, config.space
    rng = np.random.default_rng(config.seed)
    duals_by_p = {p: _random_duals(space, config.duals, rng) for p in config.p_list}
    contour = fam.domain.radius * CONTOUR_SHRINK
    center = fam.domain.center
    reports: list[CheckReport] = []

    def guarded(run, name):
        try:
            reports.append(run())
        except (ValueError, ArithmeticError) as exc:
            reports.append(CheckReport(
                name=name, family=fam.label, functional="", params={"error": str(exc)},
                lhs=math.inf, rhs=0.0, residual=math.inf, tol=0.0, passed=False,
            ))

    identity_tol = config.tol

    if "linearization" in config.checks:
        for phi in config.functionals:
            for p in config.p_list:
                tol = identity_tol if identity_tol is not None else 1e-10
                guarded(lambda phi=phi, p=p, tol=tol: theorems.linearization_residual(
                    phi, fam, space, duals_by_p[p], p=p, tol=tol), "linearization")

    if "fubini" in config.checks:
        for phi in config.functionals:
            for p in config.p_list:
                def run(phi=phi, p=p):
                    worst = None
                    for h in duals_by_p[p]:
                        rep = theorems.fubini_residual(phi, fam, h, space, p,
                                                       tol=identity_tol)
                        if worst is None or rep.residual > worst.residual:
                            worst = rep
                    return worst
                guarded(run, "fubini")

    if "derivative_consistency" in config.checks:
        for alpha in _alpha_battery(fam.d):
            for p in config.p_list:
                tol = identity_tol if identity_tol is not None else 1e-10
                guarded(lambda alpha=alpha, p=p, tol=tol: theorems.derivative_consistency(
                    fam, space, center, alpha, contour, n=config.n, p=p, tol=tol),
                    "derivative_consistency")

    if "diff_under_integral" in config.checks:
        ones = np.ones(space.natoms)
        for alpha in _alpha_battery(fam.d):
            tol = identity_tol if identity_tol is not None else 1e-10
            guarded(lambda alpha=alpha, tol=tol: theorems.diff_under_integral(
                fam, ones, space, center, alpha, contour, n=config.n, tol=tol),
                "diff_under_integral")

    if "norm_bound" in config.checks:
        for phi in config.functionals:
            for p in config.p_list:
                guarded(lambda phi=phi, p=p: theorems.norm_bound_check(
                    phi, fam, space, p, grid_density=config.grid), "norm_bound")

    if "span" in config.checks:
        for phi in config.functionals:
            if fam.span_dim is not None:
                samples = _sample_in(fam, fam.span_dim, config.shrink, rng)
                guarded(lambda phi=phi, samples=samples: theorems.span_residual(
                    phi, fam, space, samples), "span")
            else:
                k = min(8, space.natoms)
                samples = _sample_in(fam, k, config.shrink, rng)
                more = _sample_in(fam, k, config.shrink, rng)
                guarded(lambda phi=phi, samples=samples, more=more:
                        theorems.span_monotonicity(phi, fam, space, samples, more),
                        "span")

    if "schwarz" in config.checks and fam.d == 1:
        guarded(lambda: theorems.schwarz_check(fam, space, seed=config.seed), "schwarz")

    if "telescoping" in config.checks and fam.d >= 2:
        guarded(lambda: theorems.telescoping_residual(
            fam, space, sample_shrink=config.shrink, seed=config.seed), "telescoping")

    if "order_bound" in config.checks:
        guarded(lambda: theorems.order_bound_check(
            fam, space, shrink=config.shrink, seed=config.seed), "order_bound")

    if "derivative_profile" in config.checks and fam.d == 1:
        def run_profile():
            grid = theorems.sup_grid(fam.domain, config.grid, 0.9)
            local = (CONTOUR_SHRINK - 0.9) * fam.domain.radius
            profiles = theorems.derivative_profile(fam, space, 4, list(grid), local,
                                                   n=config.n)
            for prof in profiles:
                reports.append(CheckReport.build(
                    "derivative_profile", fam.label, "",
                    prof.sup_integral, float(prof.profile.max()),
                    0.0 if prof.finite else math.inf, 0.0, alpha=[prof.order],
                ))
        try:
            run_profile()
        except (ValueError, ArithmeticError) as exc:
            reports.append(CheckReport(
                name="derivative_profile", family=fam.label, functional="",
                params={"error": str(exc)}, lhs=math.inf, rhs=0.0,
                residual=math.inf, tol=0.0, passed=False,
            ))

    records = [_record(rep, config) for rep in reports]
    records.sort(key=lambda r: (r["check"], r["family"], r["functional"],
                                str(r["p"]), str(r["alpha"])))
    exit_code = 0 if all(r["pass"] for r in records) else 1
    return exit_code, records


def _jsonify_side(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    value = float(value)
    return value


def _record(rep: CheckReport, config: SuiteConfig) -> dict:
    p = rep.params.get("p")
    if p is not None and math.isinf(p):
        p = "inf"
    return {
        "check": rep.name,
        "family": rep.family,
        "functional": rep.functional,
        "p": p,
        "alpha": rep.params.get("alpha"),
        "lhs": _jsonify_side(rep.lhs),
        "rhs": _jsonify_side(rep.rhs),
        "residual": float(rep.residual),
        "tol": float(rep.tol),
        "pass": bool(rep.passed),
        "n": config.n,
        "seed": config.seed,
    }


def _emit(records: list[dict], fmt: str, output: str | None) -> None:
    if fmt == "json":
        text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    else:
        buf = io.StringIO()
        fields = ["check", "family", "functional", "p", "alpha", "lhs", "rhs",
                  "residual", "tol", "pass", "n", "seed"]
        writer = csv.DictWriter(buf, fieldnames=fields)
        writer.writeheader()
        for r in records:
            row = dict(r)
            for key in ("alpha", "lhs", "rhs"):
                if isinstance(row[key], list):
                    row[key] = json.dumps(row[key])
            writer.writerow(row)
        text = buf.getvalue()
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


def _parse_complex_scalar(text: str) -> complex:
    try:
        return complex(text)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def _parse_point(text: str) -> np.ndarray:
    return np.array([_parse_complex_scalar(part) for part in text.split(",") if part],
                    dtype=complex)


def _parse_p_list(text: str) -> list[float]:
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        if not part:
            continue
        if part in ("inf", "infinity", "oo"):
            out.append(math.inf)
        else:
            try:
                out.append(float(part))
            except ValueError:
                raise ConfigError(f"cannot parse exponent {part!r}") from None
    if not out:
        raise ConfigError("--p needs at least one exponent")
    return out


def _load_family(args) -> HoloFamily:
    if args.family_file:
        return family_from_json(Path(args.family_file).read_text())
    name = args.family or "geometric"
    try:
        return family_preset(name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _load_space(text: str) -> FiniteMeasureSpace:
    if text.endswith(".json") or "/" in text:
        return space_from_json(Path(text).read_text())
    try:
        return space_preset(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _parse_functional(text: str, fam: HoloFamily, n: int, shrink: float,
                      seed: int) -> MeasureFunctional:
    if text.endswith(".json") or "/" in text:
        return functional_from_json(Path(text).read_text())
    kind, _, rest = text.partition(":")
    contour = fam.domain.radius * CONTOUR_SHRINK
    if kind == "dirac":
        z0 = _parse_point(rest) if rest else fam.domain.center + 0.5 * shrink * fam.domain.radius
        return dirac(z0)
    if kind == "derivative":
        if rest:
            a_text, _, alpha_text = rest.partition(":")
            a = _parse_point(a_text)
            alpha = tuple(int(x) for x in alpha_text.split(",")) if alpha_text \
                else (1,) * fam.d
        else:
            a = fam.domain.center
            alpha = (1,) + (0,) * (fam.d - 1)
        try:
            return derivative_functional(a, alpha, contour, n=n)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if kind == "random":
        k = int(rest) if rest else 8
        return random_measure(fam.domain, k=k, shrink=shrink, seed=seed)
    raise ConfigError(f"cannot parse functional {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holofubini",
        description="Quadrature verification of interchange identities for "
                    "holomorphic families over discretized Lp spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--family", help="registered family preset name (default geometric)")
    shared.add_argument("--family-file", help="JSON family definition")
    shared.add_argument("--space", default="uniform-16",
                        help="space preset (uniform-k | geometric-k) or JSON file")
    shared.add_argument("--functional", action="append", default=None,
                        help="dirac:z0 | derivative:a:alpha | random:k | file.json "
                             "(repeatable)")
    shared.add_argument("--p", default="1,2,inf", help="comma-separated exponents")
    shared.add_argument("--nodes", type=int, default=64, help="quadrature nodes per variable")
    shared.add_argument("--shrink", type=float, default=0.5, help="sampling shrink factor")
    shared.add_argument("--grid", type=int, default=32, help="sup-grid density per variable")
    shared.add_argument("--tol", type=float, default=None, help="identity tolerance override")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--output", default=None, help="report path (default stdout)")
    shared.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    sub.add_parser("verify", parents=[shared], help="run the full checker battery")
    single = sub.add_parser("check", parents=[shared], help="run one named checker")
    single.add_argument("name", choices=CHECK_NAMES)
    sub.add_parser("describe", help="list presets, functional grammar, and checks")
    return parser


def _build_config(args, checks) -> SuiteConfig:
    fam = _load_family(args)
    space = _load_space(args.space)
    if args.nodes < 4:
        raise ConfigError(f"--nodes must be at least 4, got {args.nodes}")
    if args.functional:
        functionals = [
            _parse_functional(entry, fam, args.nodes, args.shrink, args.seed)
            for entry in args.functional
        ]
    else:
        try:
            functionals = default_functionals(fam, args.nodes, args.shrink, args.seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return SuiteConfig(
        family=fam, space=space, functionals=functionals,
        p_list=_parse_p_list(args.p), n=args.nodes, shrink=args.shrink,
        grid=args.grid, tol=args.tol, seed=args.seed, output=args.output,
        fmt=args.fmt, checks=checks,
    )


def _describe() -> None:
    print("family presets:")
    for name in preset_names():
        fam = family_preset(name)
        bound = f" bound<={fam.declared_bound:g}" if fam.declared_bound else ""
        print(f"  {name:<12} kind={fam.kind} d={fam.d}{bound}")
    print("space presets: uniform-<k>, geometric-<k> (atoms in [-1, 1])")
    print("functional specs: dirac:<z0>, derivative:<a>:<alpha>, random:<k>, <file.json>")
    print("checks:", ", ".join(CHECK_NAMES))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0

    if args.command == "describe":
        _describe()
        return 0

    checks = CHECK_NAMES if args.command == "verify" else (args.name,)
    try:
        config = _build_config(args, checks)
    except (ConfigError, ValueError, FileNotFoundError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    exit_code, records = run_suite(config)
    _emit(records, config.fmt, config.output)
    if exit_code != 0:
        failing = [r for r in records if not r["pass"]]
        for r in failing:
            print(
                f"violation: {r['check']} family={r['family']} "
                f"functional={r['functional']} residual={r['residual']:.3e} "
                f"tol={r['tol']:.1e}",
                file=sys.stderr,
            )
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
