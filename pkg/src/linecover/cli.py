"""Command-line front end: run, optimal, verify, and sweep.

Configs are flat ``key = value`` text files (``#`` starts a comment) with
dotted key paths; unknown keys are rejected.  Keys:

    n, iters, seed, record_every
    density.family                constant | affine | piecewise-linear | smooth-bump
    density.level                 (constant)
    density.intercept, density.slope          (affine)
    density.breakpoints, density.values       (piecewise-linear, comma lists)
    density.amplitude, density.center, density.width   (smooth-bump)
    noise.kind                    uniform | bernoulli | zero
    noise.m                       support bound, 0 <= m <= 1
    schedule.kind                 theorem | power | hybrid
    schedule.u                    (theorem) upper bound on the agent count
    schedule.p                    (power) exponent in (1/2, 1]
    init.kind                     uniform-random | all-at-one | explicit
    init.positions                (explicit, comma list)

The hybrid schedule takes its horizon from ``iters``.  Output tables are
comma-separated text with numbers at 12 significant digits, so identical
configs and seeds produce byte-identical files.

Exit status: 0 on success (verify: all suites passed), 1 on a validation
error, 2 on a verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .density import DensityField, make_field
from .oracle import certify_optimal
from .protocol import NOISE_KINDS, NoiseModel, StepSchedule
from .sim import INIT_KINDS, EnsembleCurve, SimConfig, ensemble, expected_error_bound, fit_tail_slope, run
from . import verify as verify_mod
from .verify import run_all_suites

__all__ = ["main", "console_main", "ConfigError", "load_config", "build_sim_config"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2

_DENSITY_KEYS = {
    "constant": {"density.level"},
    "affine": {"density.intercept", "density.slope"},
    "piecewise-linear": {"density.breakpoints", "density.values"},
    "smooth-bump": {"density.amplitude", "density.center", "density.width"},
}
_KNOWN_KEYS = (
    {"n", "iters", "seed", "record_every", "density.family", "noise.kind", "noise.m",
     "schedule.kind", "schedule.u", "schedule.p", "init.kind", "init.positions"}
    | set().union(*_DENSITY_KEYS.values())
)


class ConfigError(ValueError):
    """A config violation, carrying the offending key path."""

    def __init__(self, key: str, reason: str):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


def load_config(path: str) -> dict[str, str]:
    """Parse a key = value document, rejecting unknown or duplicate keys."""
    doc: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _KNOWN_KEYS:
                raise ConfigError(key, "unknown key")
            if key in doc:
                raise ConfigError(key, "duplicate key")
            doc[key] = value
    return doc


def _require(doc: dict[str, str], key: str) -> str:
    if key not in doc:
        raise ConfigError(key, "required key is missing")
    return doc[key]


def _as_int(doc: dict[str, str], key: str) -> int:
    raw = _require(doc, key)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw!r}") from None


def _as_float(doc: dict[str, str], key: str) -> float:
    raw = _require(doc, key)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw!r}") from None


def _as_float_list(doc: dict[str, str], key: str) -> list[float]:
    raw = _require(doc, key)
    try:
        return [float(part) for part in raw.split(",")]
    except ValueError:
        raise ConfigError(key, f"expected a comma-separated number list, got {raw!r}") from None


def build_field(doc: dict[str, str]) -> DensityField:
    family = _require(doc, "density.family")
    if family not in _DENSITY_KEYS:
        raise ConfigError("density.family", f"unknown family {family!r}")
    extra = {k for k in doc if k.startswith("density.") and k != "density.family"} - _DENSITY_KEYS[family]
    if extra:
        raise ConfigError(sorted(extra)[0], f"not a parameter of the {family} family")
    try:
        if family == "constant":
            field = make_field(family, level=_as_float(doc, "density.level"))
        elif family == "affine":
            field = make_field(
                family,
                intercept=_as_float(doc, "density.intercept"),
                slope=_as_float(doc, "density.slope"),
            )
        elif family == "piecewise-linear":
            field = make_field(
                family,
                breakpoints=_as_float_list(doc, "density.breakpoints"),
                values=_as_float_list(doc, "density.values"),
            )
        else:
            field = make_field(
                family,
                amplitude=_as_float(doc, "density.amplitude"),
                center=_as_float(doc, "density.center"),
                width=_as_float(doc, "density.width"),
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("density", str(exc)) from None
    violations = field.validate()
    if violations:
        raise ConfigError("density", "; ".join(violations))
    return field


def build_sim_config(doc: dict[str, str], seed_override: int | None = None) -> SimConfig:
    """Assemble and validate a SimConfig from a parsed document."""
    n = _as_int(doc, "n")
    if n < 1:
        raise ConfigError("n", "must be at least 1")
    iters = _as_int(doc, "iters")
    if iters < 1:
        raise ConfigError("iters", "must be at least 1")
    seed = seed_override if seed_override is not None else _as_int(doc, "seed")
    record_every = _as_int(doc, "record_every") if "record_every" in doc else 10
    if record_every < 1:
        raise ConfigError("record_every", "must be at least 1")

    field = build_field(doc)

    kind = _require(doc, "noise.kind")
    if kind not in NOISE_KINDS:
        raise ConfigError("noise.kind", f"unknown kind {kind!r}")
    m = _as_float(doc, "noise.m")
    if m < 0.0:
        raise ConfigError("noise.m", "must be >= 0")
    if m > 1.0:
        raise ConfigError("noise.m", "must be <= 1")
    noise = NoiseModel(kind, m)

    sched_kind = _require(doc, "schedule.kind")
    try:
        if sched_kind == "theorem":
            schedule = StepSchedule.theorem(_as_float(doc, "schedule.u"), field.density_max, m)
        elif sched_kind == "power":
            schedule = StepSchedule.power(_as_float(doc, "schedule.p"))
        elif sched_kind == "hybrid":
            schedule = StepSchedule.hybrid(iters)
        else:
            raise ConfigError("schedule.kind", f"unknown kind {sched_kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("schedule", str(exc)) from None
    for key, owner in (("schedule.u", "theorem"), ("schedule.p", "power")):
        if key in doc and sched_kind != owner:
            raise ConfigError(key, f"only valid with schedule.kind = {owner}")

    init = _require(doc, "init.kind")
    if init not in INIT_KINDS:
        raise ConfigError("init.kind", f"unknown kind {init!r}")
    init_positions = None
    if init == "explicit":
        init_positions = tuple(_as_float_list(doc, "init.positions"))
    elif "init.positions" in doc:
        raise ConfigError("init.positions", "only valid with init.kind = explicit")

    config = SimConfig(
        n=n,
        iters=iters,
        seed=seed,
        field=field,
        noise=noise,
        schedule=schedule,
        init=init,
        init_positions=init_positions,
        record_every=record_every,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError("config", str(exc)) from None
    return config


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _write_run_table(path: str, record) -> None:
    n = record.config.n
    header = ["t"] + [f"x_{i}" for i in range(1, n + 1)] + ["Q", "phi", "err_sq"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i, t in enumerate(record.times):
            cells = [str(int(t))]
            cells += [_fmt(v) for v in record.positions[i]]
            cells += [_fmt(record.energy[i]), _fmt(record.radius[i]), _fmt(record.sq_error[i])]
            fh.write(",".join(cells) + "\n")


def _sweep_rows(curve: EnsembleCurve, config: SimConfig) -> list[tuple]:
    bound = expected_error_bound(
        config.n,
        config.schedule.u,
        config.field.density_max,
        config.noise.bound,
        config.field.slope_max,
        curve.times,
    )
    rows = []
    for i, t in enumerate(curve.times):
        try:
            slope = fit_tail_slope(curve.times[: i + 1], curve.mean_sq_error[: i + 1])
        except ValueError:
            slope = float("nan")
        rows.append((int(t), curve.mean_sq_error[i], curve.stderr[i], bound[i], slope))
    return rows


def cmd_run(args) -> int:
    doc = load_config(args.config)
    config = build_sim_config(doc, seed_override=args.seed)
    record = run(config)
    _write_run_table(args.out, record)
    optimal = certify_optimal(config.field, config.n)
    print(f"final phi    = {_fmt(record.radius[-1])}")
    print(f"optimal phi  = {_fmt(optimal.coverage)}")
    print(f"final err_sq = {_fmt(record.sq_error[-1])}")
    return EXIT_OK


def cmd_optimal(args) -> int:
    doc = load_config(args.config)
    n = _as_int(doc, "n")
    if n < 1:
        raise ConfigError("n", "must be at least 1")
    field = build_field(doc)
    report = certify_optimal(field, n, tol=1e-9)
    print("x_star =", " ".join(_fmt(v) for v in report.positions))
    print(f"phi_star = {_fmt(report.coverage)}")
    print(f"max_residual = {np.max(np.abs(report.residuals)):.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    sizes = args.sizes
    results = run_all_suites(sizes)
    extension = [n for n in sizes if n == 1]
    if extension:
        print("note: n=1 runs the single-agent extension beyond the standard n>=2 protocol")
    failed = False
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
        if result.counterexample:
            print(f"     counterexample: {result.counterexample}")
        failed = failed or not result.passed
    return EXIT_VERIFICATION if failed else EXIT_OK


def cmd_sweep(args) -> int:
    if args.seeds < 2:
        raise ConfigError("seeds", "need >= 2 seeds")
    doc = load_config(args.config)
    config = build_sim_config(doc)
    if config.schedule.kind != "theorem":
        raise ConfigError("schedule.kind", "sweep evaluates the error guarantee and requires the theorem schedule")
    if config.schedule.u < config.n:
        raise ConfigError("schedule.u", "must be an upper bound on n for the sweep bound")
    seeds = [config.seed + i for i in range(args.seeds)]
    curve = ensemble(config, seeds)
    rows = _sweep_rows(curve, config)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,mean_err,stderr,bound,slope_so_far\n")
        for t, mean_err, stderr, bound, slope in rows:
            fh.write(f"{t},{_fmt(mean_err)},{_fmt(stderr)},{_fmt(bound)},{_fmt(slope)}\n")
    bound_held = all(mean_err <= bound for _, mean_err, _, bound, _ in rows)
    final_slope = rows[-1][4]
    print(f"tail slope   = {_fmt(final_slope)}")
    print(f"bound held   = {'yes' if bound_held else 'no'}")
    return EXIT_OK if bound_held else EXIT_VERIFICATION


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as validation errors."""

    def error(self, message):
        raise ConfigError("usage", message)


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError("sizes", f"expected a comma-separated integer list, got {text!r}") from None
    if not sizes:
        raise ConfigError("sizes", "list must not be empty")
    return sizes


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="linecover", description="Coverage protocol simulator for agents on [0, 1]")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one seeded run and write its diagnostics table")
    p_run.add_argument("--config", required=True, help="path to a key = value config file")
    p_run.add_argument("--out", required=True, help="output table path (t,x_1..x_n,Q,phi,err_sq)")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.set_defaults(handler=cmd_run)

    p_opt = sub.add_parser("optimal", help="print the exact optimal layout for the configured density")
    p_opt.add_argument("--config", required=True, help="config path (only n and density.* are consulted)")
    p_opt.set_defaults(handler=cmd_optimal)

    p_ver = sub.add_parser(
        "verify",
        help="run the built-in verification suites",
        description=(
            "Runs five fixed-budget suites: order preservation "
            f"({verify_mod.ORDER_STEPS_PER_COMBO} fuzzed steps per size/family/noise combination), "
            f"gradient dominance ({verify_mod.DOMINANCE_STATES} random layouts per combination), "
            f"the curvature bound for n=1..{verify_mod.CURVATURE_MAX_N}, gradient unbiasedness "
            f"({verify_mod.MC_DRAWS} Monte Carlo draws per layout, four-standard-error band), and "
            f"coverage equivalence against a {verify_mod.COVERAGE_GRID}-point grid. Budgets are "
            "fixed so the command always means the same check."
        ),
    )
    p_ver.add_argument(
        "--sizes",
        type=_parse_sizes,
        default=[2, 5, 10],
        help="comma-separated agent counts (default 2,5,10)",
    )
    p_ver.set_defaults(handler=cmd_verify)

    p_sw = sub.add_parser("sweep", help="multi-seed ensemble: error curve, guarantee bound, tail slope")
    p_sw.add_argument("--config", required=True, help="config path (theorem schedule required)")
    p_sw.add_argument("--seeds", type=int, required=True, help="number of seeds (config seed, seed+1, ...)")
    p_sw.add_argument("--out", required=True, help="output table path (t,mean_err,stderr,bound,slope_so_far)")
    p_sw.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
