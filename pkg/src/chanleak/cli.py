"""Command-line front door.

Three subcommands: ``compute`` evaluates one measure on one channel,
``sweep`` tabulates a parameter grid to CSV, and ``verify`` runs the
invariant battery against given or seeded random channels. Values print
in nats by default with twelve digits after the point; ``inf`` is both
accepted and emitted as a literal for the infinite orders.

Exit codes: 0 success, 2 bad input (unparseable channel, illegal
parameters, unwritable output), 3 the value was computed and printed but
the simplex search could not certify convergence at the requested
tolerance (a warning goes to stderr).
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .core import (
    Channel,
    OrderPair,
    SimplexPoint,
    compose,
    product,
    read_channel_csv,
    validate_channel,
)
from .errors import ChanleakError
from .measures import (
    MeasureResult,
    alpha_tau_leakage,
    inner_objective,
    ldp,
    lrdp,
    lrdp_variant,
    maximal_alpha_beta_leakage,
    maximal_alpha_leakage,
    maximal_leakage,
    optimal_q_y,
    shannon_capacity,
    variational_objective,
)
from .optim import OptimizerConfig

__all__ = ["SweepSpec", "build_parser", "main"]

_LN2 = math.log(2.0)

MEASURES = ("abl", "maxl", "max-alpha-l", "ldp", "lrdp", "lrdp-variant", "alpha-tau", "capacity")


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular parameter grid: alphas crossed with betas or with taus.

    Emitted files are always in nats (the header is pinned to
    ``value_nats``); ``output_unit`` records the display unit requested
    for any downstream pretty-printing.
    """

    alphas: tuple[float, ...]
    betas: tuple[float, ...] | None = None
    taus: tuple[float, ...] | None = None
    output_unit: str = "nats"

    def __post_init__(self) -> None:
        if self.output_unit not in ("nats", "bits"):
            raise ValueError(f"output_unit must be 'nats' or 'bits', got {self.output_unit!r}")
        if (self.betas is None) == (self.taus is None):
            raise ValueError("exactly one of betas/taus must be given")
        if len(self.alphas) == 0 or len(self.betas or self.taus) == 0:
            raise ValueError("sweep lists must be non-empty")
        for a in self.alphas:
            OrderPair(a, 1.0)
        if self.betas is not None:
            for b in self.betas:
                OrderPair(2.0, b)
        else:
            for t in self.taus:
                if math.isnan(t) or not 0.0 <= t <= 1.0:
                    raise ValueError(f"tau must lie in [0, 1], got {t!r}")


def _extended(text: str) -> float:
    if text.strip() == "inf":
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def _finite(text: str) -> float:
    value = _extended(text)
    if math.isinf(value):
        raise argparse.ArgumentTypeError("this parameter must be finite")
    return value


def _extended_list(text: str) -> tuple[float, ...]:
    return tuple(_extended(part) for part in text.split(","))


def _finite_list(text: str) -> tuple[float, ...]:
    return tuple(_finite(part) for part in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chanleak", description="Leakage measures for finite channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="evaluate one measure on one channel")
    comp.add_argument("--channel", required=True, help="channel CSV path")
    comp.add_argument("--measure", required=True, choices=MEASURES)
    comp.add_argument("--alpha", type=_extended, default=None, help="order alpha (number or 'inf')")
    comp.add_argument("--beta", type=_extended, default=None, help="order beta (number or 'inf')")
    comp.add_argument("--tau", type=_finite, default=None, help="trade-off parameter in [0, 1]")
    comp.add_argument("--unit", choices=("nats", "bits"), default="nats")
    comp.add_argument("--report", action="store_true", help="also print the maximizer and search diagnostics")
    comp.add_argument("--tolerance", type=float, default=None, help="search / capacity stopping tolerance")

    sweep = sub.add_parser("sweep", help="tabulate a parameter grid to CSV")
    sweep.add_argument("--channel", required=True)
    sweep.add_argument("--alpha", type=_extended_list, required=True, metavar="LIST",
                       help="comma-separated alphas, 'inf' allowed")
    group = sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=_extended_list, default=None, metavar="LIST",
                       help="comma-separated betas, 'inf' allowed")
    group.add_argument("--tau", type=_finite_list, default=None, metavar="LIST",
                       help="comma-separated taus in [0, 1]")
    sweep.add_argument("--out", default=None, help="output CSV path (stdout when omitted)")
    sweep.add_argument("--jobs", type=int, default=1, help="concurrent grid evaluations")
    sweep.add_argument("--tolerance", type=float, default=None)

    verify = sub.add_parser("verify", help="run the invariant battery")
    verify.add_argument("--channel", default=None, help="channel CSV to test (otherwise random)")
    verify.add_argument("--random", type=int, default=5, metavar="N", help="number of random channels")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerance", type=float, default=1e-6,
                        help="pass threshold for search-based properties")
    verify.add_argument("--allow-zeros", action="store_true",
                        help="sparsify random rows to exercise the infinite-value paths")
    return parser


def _require(args: argparse.Namespace, parser_error, names: tuple[str, ...]) -> None:
    for name in names:
        if getattr(args, name) is None:
            parser_error(f"--measure {args.measure} requires --{name}")


# Default certification for the search path. The optimizer's own 1e-9
# default sits at the floor where ascent steps stop being representable,
# which would flag routine computations as non-converged.
_SEARCH_TOLERANCE = 1e-8


def _search_config(tolerance: float | None) -> OptimizerConfig:
    return OptimizerConfig(tolerance=_SEARCH_TOLERANCE if tolerance is None else tolerance)


def _evaluate_measure(channel: Channel, args: argparse.Namespace, error) -> tuple[float, MeasureResult | None]:
    config = _search_config(args.tolerance)
    name = args.measure
    if name == "abl":
        _require(args, error, ("alpha", "beta"))
        result = maximal_alpha_beta_leakage(channel, OrderPair(args.alpha, args.beta), config)
        return result.value.nats, result
    if name == "maxl":
        return maximal_leakage(channel).nats, None
    if name == "max-alpha-l":
        _require(args, error, ("alpha",))
        result = maximal_alpha_leakage(channel, args.alpha, config)
        return result.value.nats, result
    if name == "ldp":
        return ldp(channel).nats, None
    if name == "lrdp":
        _require(args, error, ("alpha",))
        return lrdp(channel, args.alpha).nats, None
    if name == "lrdp-variant":
        _require(args, error, ("beta",))
        return lrdp_variant(channel, args.beta).nats, None
    if name == "alpha-tau":
        _require(args, error, ("alpha", "tau"))
        result = alpha_tau_leakage(channel, args.alpha, args.tau, config)
        return result.value.nats, result
    if name == "capacity":
        tolerance = args.tolerance if args.tolerance is not None else 1e-9
        return shannon_capacity(channel, tolerance).nats, None
    raise AssertionError(name)


def _format_value(nats: float, unit: str) -> str:
    value = nats / _LN2 if unit == "bits" else nats
    return f"{value:.12f}"


def cmd_compute(args: argparse.Namespace, error) -> int:
    channel = read_channel_csv(args.channel)
    nats, result = _evaluate_measure(channel, args, error)
    print(_format_value(nats, args.unit))
    if args.report and result is not None:
        print(f"x_prime: {result.maximizing_x_prime}")
        if result.maximizing_distribution is not None:
            weights = " ".join(f"{w:.12f}" for w in result.maximizing_distribution.weights)
            print(f"p_tilde: {weights}")
        if result.report is not None:
            print(f"iterations: {result.report.iterations}")
            print(f"certified_gap: {result.report.certified_gap:.3e}")
            print(f"converged: {str(result.report.converged).lower()}")
    if result is not None and result.report is not None and not result.report.converged:
        print(
            f"warning: search gap {result.report.certified_gap:.3e} exceeds the tolerance; "
            "the printed value may sit below the supremum",
            file=sys.stderr,
        )
        return 3
    return 0


def _sweep_cells(spec: SweepSpec) -> list[tuple[float, float]]:
    second = spec.betas if spec.betas is not None else spec.taus
    return [(a, s) for a in spec.alphas for s in second]


def cmd_sweep(args: argparse.Namespace, error) -> int:
    channel = read_channel_csv(args.channel)
    try:
        spec = SweepSpec(alphas=args.alpha, betas=args.beta, taus=args.tau)
    except ValueError as exc:
        error(str(exc))
    config = _search_config(args.tolerance)
    by_tau = spec.taus is not None

    def evaluate(cell: tuple[float, float]) -> MeasureResult:
        a, s = cell
        if by_tau:
            return alpha_tau_leakage(channel, a, s, config)
        return maximal_alpha_beta_leakage(channel, OrderPair(a, s), config)

    cells = _sweep_cells(spec)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(evaluate, cells))
    else:
        results = [evaluate(cell) for cell in cells]

    lines = ["alpha,tau,value_nats" if by_tau else "alpha,beta,value_nats"]
    for (a, s), result in zip(cells, results):
        lines.append(f"{a:g},{s:g},{result.value.nats:.12f}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii", newline="") as handle:
            handle.write(text)

    stragglers = [cell for cell, r in zip(cells, results) if r.report is not None and not r.report.converged]
    for a, s in stragglers:
        print(f"warning: grid point ({a:g}, {s:g}) did not certify convergence", file=sys.stderr)
    return 3 if stragglers else 0


# verify battery fixtures; every draw below flows from the one seeded generator
_MONO_ALPHAS = (1.5, 2.0, 4.0)
_MONO_BETAS = (1.0, 1.2, 1.5, 2.0, 4.0, math.inf)
_DPI_ORDERS = (OrderPair(2.0, 1.5), OrderPair(4.0, 2.0), OrderPair(math.inf, 1.0), OrderPair(2.0, math.inf))
_TAU_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
_TAU_ALPHAS = (1.5, 3.0)


def _random_channel(rng: np.random.Generator, n: int, m: int, allow_zeros: bool) -> Channel:
    rows = rng.dirichlet(np.ones(m), size=n)
    if allow_zeros:
        mask = rng.random((n, m)) < 0.25
        mask &= ~(mask.all(axis=1))[:, None]  # never kill an entire row
        rows = np.where(mask, 0.0, rows)
        rows = rows / rows.sum(axis=1, keepdims=True)
    return validate_channel(rows)


def _slack_le(lhs: float, rhs: float) -> float:
    """Signed violation of lhs <= rhs; infinities compare as equals."""
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    if math.isinf(rhs):
        return -math.inf
    return lhs - rhs


def _slack_eq(lhs: float, rhs: float) -> float:
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0
    return abs(lhs - rhs)


def _abl(channel: Channel, order: OrderPair, config: OptimizerConfig) -> float:
    return maximal_alpha_beta_leakage(channel, order, config).value.nats


def _verify_battery(channels, rng, config, allow_zeros, search_tol):
    """Yield (name, worst_slack, pass_threshold) for every property.

    Search-backed inequalities pass at ``search_tol``; closed-form
    identities at 1e-9; the two cross-oracle rows carry the scale of
    their own truncation error (grid resolution, alpha offset).
    """
    pairs = [OrderPair(a, b) for a in _MONO_ALPHAS for b in _MONO_BETAS]

    values = {}
    for k, channel in enumerate(channels):
        for pair in pairs:
            values[k, pair.alpha, pair.beta] = _abl(channel, pair, config)

    worst = max(
        (
            -values[k, pair.alpha, pair.beta]
            for k in range(len(channels))
            for pair in pairs
            if not math.isinf(values[k, pair.alpha, pair.beta])
        ),
        default=-math.inf,
    )
    yield "non-negativity", worst, search_tol

    constant = validate_channel(np.tile(rng.dirichlet(np.ones(3)), (3, 1)))
    worst = max(_abl(constant, pair, config) for pair in pairs)
    yield "independence-zero", worst, search_tol

    worst = -math.inf
    for k in range(len(channels)):
        for a in _MONO_ALPHAS:
            run = [values[k, a, b] for b in _MONO_BETAS]
            worst = max(worst, max(_slack_le(run[i], run[i + 1]) for i in range(len(run) - 1)))
    yield "beta-monotonicity", worst, search_tol

    tau_vals = {}
    for k, channel in enumerate(channels):
        for a in _TAU_ALPHAS:
            for t in _TAU_GRID:
                tau_vals[k, a, t] = alpha_tau_leakage(channel, a, t, config).value.nats
    worst = -math.inf
    for k in range(len(channels)):
        for a in _TAU_ALPHAS:
            run = [tau_vals[k, a, t] for t in _TAU_GRID]
            worst = max(worst, max(_slack_le(run[i + 1], run[i]) for i in range(len(run) - 1)))
    yield "tau-monotonicity", worst, search_tol

    worst = -math.inf
    for k in range(len(channels)):
        for t in _TAU_GRID:
            worst = max(worst, _slack_le(tau_vals[k, _TAU_ALPHAS[0], t], tau_vals[k, _TAU_ALPHAS[1], t]))
    yield "tau-alpha-monotonicity", worst, search_tol

    worst = -math.inf
    for channel in channels:
        post = _random_channel(rng, channel.n_outputs, 3, allow_zeros)
        pre = _random_channel(rng, 3, channel.n_inputs, allow_zeros)
        for pair in _DPI_ORDERS:
            base = _abl(channel, pair, config)
            worst = max(worst, _slack_le(_abl(compose(channel, post), pair, config), base))
            worst = max(worst, _slack_le(_abl(compose(pre, channel), pair, config), base))
    yield "data-processing", worst, search_tol

    left = _random_channel(rng, 2, 2, allow_zeros)
    right = _random_channel(rng, 2, 2, allow_zeros)
    joint = product(left, right)
    worst = -math.inf
    for pair in (OrderPair(2.0, 3.0), OrderPair(3.0, 1.5), OrderPair(math.inf, math.inf)):
        total = _abl(joint, pair, config)
        parts = _abl(left, pair, config) + _abl(right, pair, config)
        worst = max(worst, _slack_eq(total, parts))
    yield "additivity", worst, search_tol

    worst = -math.inf
    for channel in channels:
        for a in (1.5, 2.0, 4.0):
            worst = max(worst, _slack_eq(_abl(channel, OrderPair(a, a), config), lrdp(channel, a).nats))
    yield "lrdp-bridge", worst, 1e-9

    worst = -math.inf
    for channel in channels:
        maxl = maximal_leakage(channel).nats
        worst = max(worst, _slack_eq(_abl(channel, OrderPair(math.inf, 1.0), config), maxl))
        worst = max(worst, _slack_eq(lrdp_variant(channel, 1.0).nats, maxl))
    yield "maxl-bridge", worst, 1e-9

    worst = -math.inf
    for channel in channels:
        eps = ldp(channel).nats
        worst = max(worst, _slack_eq(_abl(channel, OrderPair(math.inf, math.inf), config), eps))
        for a in (1.5, 3.0):
            scaled = math.inf if math.isinf(eps) else a / (a - 1.0) * eps
            worst = max(worst, _slack_eq(_abl(channel, OrderPair(a, math.inf), config), scaled))
    yield "ldp-bridge", worst, 1e-9

    worst = -math.inf
    for channel in channels:
        point = SimplexPoint.from_weights(rng.dirichlet(np.ones(channel.n_inputs)))
        for a, t in ((2.0, 0.5), (3.0, 1.0), (1.5, 0.25)):
            beta = a / (1.0 + t * (a - 1.0))
            for x_prime in range(channel.n_inputs):
                direct = inner_objective(channel, x_prime, point, OrderPair(a, beta))
                if math.isinf(direct):
                    continue
                q = optimal_q_y(channel, x_prime, point, a, t)
                saddle = variational_objective(channel, x_prime, point, q, a, t)
                worst = max(worst, _slack_eq(saddle, direct))
    yield "saddle-form", worst, 1e-9

    worst = -math.inf
    for channel in channels:
        if channel.n_inputs > 4:
            continue
        for pair in (OrderPair(4.0, 2.0), OrderPair(2.0, 1.0)):
            grid = oracle.grid_search_inner(channel, pair, 200).nats
            exact = _abl(channel, pair, config)
            worst = max(worst, _slack_eq(exact, grid))
    yield "grid-oracle", worst, 5e-4  # grid truncation at resolution 200 nears 3e-4 at low-mass optima

    small = _random_channel(rng, 2, 2, allow_zeros)
    worst = -math.inf
    for pair in (OrderPair(2.0, 2.0), OrderPair(2.0, 1.0)):
        bound = oracle.definitional_leakage(small, pair, px_grid=15, shatter_cap=5).nats
        worst = max(worst, _slack_le(bound, _abl(small, pair, config) + 1e-9))
    yield "definitional-lower-bound", worst, search_tol

    channel = channels[0]
    low_alpha = maximal_alpha_leakage(channel, 1.0 + 1e-3, config).value.nats
    capacity = shannon_capacity(channel).nats
    slack = abs(low_alpha - capacity) if not math.isinf(low_alpha) else math.inf
    yield "capacity-limit", slack, 5e-3  # the alpha offset itself contributes at this scale


def cmd_verify(args: argparse.Namespace, error) -> int:
    rng = np.random.default_rng(args.seed)
    if args.channel is not None:
        channels = [read_channel_csv(args.channel)]
    else:
        count = max(int(args.random), 1)
        channels = [_random_channel(rng, 3, 3, args.allow_zeros) for _ in range(count)]

    gap = max(min(args.tolerance * 1e-2, 1e-8), 1e-12)
    config = OptimizerConfig(tolerance=gap, max_iterations=20_000)
    failures = 0
    results = list(_verify_battery(channels, rng, config, args.allow_zeros, args.tolerance))
    for name, slack, threshold in results:
        ok = slack <= threshold
        failures += 0 if ok else 1
        print(f"{name:<26} {'PASS' if ok else 'FAIL'}  worst_slack={slack:.3e}")
    print(f"{len(results) - failures} of {len(results)} properties passed")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args, parser.error)
        if args.command == "sweep":
            return cmd_sweep(args, parser.error)
        return cmd_verify(args, parser.error)
    except ChanleakError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
