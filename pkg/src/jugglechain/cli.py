"""Command-line interface.

Every subcommand emits a table (CSV with a header row and a trailing
metadata comment, or JSON) and reflects verification outcomes in its exit
status: 0 all good, 1 a check failed, 2 bad flags.  Given the same flags
and seed the output is byte-identical.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .asymptotics import density_curve, empirical_density
from .chain import (
    CoinConfig,
    backward_dist,
    simulate,
    stationary_weight,
    tv_distance,
    verify_stationarity,
)
from .errors import JuggleError
from .flagchain import (
    flag_backward_dist,
    flag_backward_step,
    flag_forward_edges,
    flag_stationary_weight,
    verify_flag_stationarity,
)
from .fqoracle import (
    flag_fraction_sweep,
    formula_flag_fraction,
    formula_group_fraction,
    formula_pivot_fraction,
    group_fraction_sweep,
    pivot_fraction_sweep,
)
from .rng import ChainRng
from .series import (
    DEFAULT_DEGREE,
    bundle_factorization_holds,
    flag_series,
    flag_series_enumerated,
    grassmannian_series_closed,
    grassmannian_series_enumerated,
    perm_inversion_series,
    perm_series_closed,
    state_partition_series,
    state_partition_series_enumerated,
)
from .siteswap import parse_siteswap, validate_siteswap
from .states import (
    FlagState,
    forward_edges,
    ground_state,
    parse_flag_state,
    parse_state,
    states_up_to_inversions,
    flag_states_up_to_inversions,
)


def _config_hash(args: argparse.Namespace) -> str:
    payload = json.dumps(
        {k: str(v) for k, v in sorted(vars(args).items()) if k != "func"},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def _emit(args, header: list[str], rows: list[list], seed=None) -> None:
    meta = {
        "version": __version__,
        "seed": "-" if seed is None else str(seed),
        "config": _config_hash(args),
    }
    if args.format == "json":
        payload = {
            "header": header,
            "rows": [[str(v) for v in row] for row in rows],
            "meta": meta,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(str(v) for v in row) + "\n")
        buf.write(
            f"# jugglechain {meta['version']} seed={meta['seed']} "
            f"config={meta['config']}\n"
        )
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_q(text: str) -> Fraction:
    return Fraction(text)


def _parse_labels(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(","))


# ---------------------------------------------------------------------------
# subcommands


def cmd_siteswap(args) -> int:
    sw = parse_siteswap(args.pattern)
    info = validate_siteswap(sw)  # raises InvalidPattern on failure
    rows = [[i, t, str(s)] for i, (t, s) in enumerate(zip(sw.throws, info.states))]
    rows.append(["<balls>", info.balls, "-"])
    _emit(args, ["beat", "throw", "state_before"], rows)
    return 0


def cmd_dist(args) -> int:
    coin = CoinConfig(_parse_q(args.q))
    if args.flag_state:
        state = parse_flag_state(args.flag_state)
        dist = flag_backward_dist(state, coin)
    else:
        state = parse_state(args.state)
        dist = backward_dist(state, coin)
    rows = [[str(s), str(p)] for s, p in dist.entries]
    _emit(args, ["state", "probability"], rows)
    return 0


def cmd_stationary_check(args) -> int:
    coin = CoinConfig(_parse_q(args.q))
    rows = []
    all_ok = True
    if args.labels:
        labels = _parse_labels(args.labels)
        for state in flag_states_up_to_inversions(labels, args.max_inversions):
            drop_cap = args.drop_cap or (len(state.cells) + len(labels) + 20)
            bracket = verify_flag_stationarity(state, coin, drop_cap)
            all_ok &= bracket.ok
            rows.append(
                [
                    str(state),
                    str(bracket.expected),
                    str(bracket.partial_sum),
                    str(bracket.tail_bound),
                    "pass" if bracket.ok else "FAIL",
                ]
            )
        header = ["state", "weight", "partial_sum", "tail_bound", "verdict"]
    else:
        for state in states_up_to_inversions(args.balls, args.max_inversions):
            ok = verify_stationarity(state, coin)
            all_ok &= ok
            rows.append(
                [str(state), str(stationary_weight(state, coin)), "pass" if ok else "FAIL"]
            )
        header = ["state", "weight", "verdict"]
    _emit(args, header, rows)
    return 0 if all_ok else 1


def cmd_oracle(args) -> int:
    p = args.p
    rows = []
    all_ok = True
    if args.labels:
        labels = _parse_labels(args.labels)
        balls = len(labels)
        sweep = group_fraction_sweep(labels, args.width, p)
        formula = lambda s: formula_group_fraction(labels, p, s)
    elif args.flag:
        balls = args.balls
        sweep = flag_fraction_sweep(args.balls, args.width, p)
        formula = lambda s: formula_flag_fraction(args.balls, p, s)
    else:
        balls = args.balls
        sweep = pivot_fraction_sweep(args.balls, args.width, p)
        formula = lambda s: formula_pivot_fraction(args.balls, p, s)
    total = p ** (balls * args.width)
    for state in sorted((s for s in sweep if s is not None), key=str):
        fraction = sweep[state]
        predicted = formula(state)
        ok = fraction == predicted
        all_ok &= ok
        rows.append(
            [
                str(state),
                fraction * total,
                str(fraction),
                str(predicted),
                "pass" if ok else "FAIL",
            ]
        )
    deficient = sweep.get(None, Fraction(0))
    rows.append(["<rank-deficient>", deficient * total, str(deficient), "-", "-"])
    _emit(args, ["state", "count", "fraction", "formula", "match"], rows)
    return 0 if all_ok else 1


def cmd_series(args) -> int:
    d = args.degree
    if args.dump:
        if args.dump == "partition":
            series = state_partition_series(args.balls, d)
        elif args.dump == "flag":
            series = flag_series(args.balls, d)
        elif args.dump == "permutation":
            series = perm_series_closed(args.balls, d)
        else:
            series = grassmannian_series_closed(args.j, args.h, d)
        rows = [[k, str(series[k])] for k in range(d + 1)]
        _emit(args, ["degree", "coefficient"], rows)
        return 0
    rows = []
    all_ok = True

    def record(name: str, ok: bool) -> None:
        nonlocal all_ok
        all_ok &= ok
        rows.append([name, d, "pass" if ok else "FAIL"])

    for b in range(1, args.partition_max + 1):
        record(
            f"state-partition b={b}",
            state_partition_series(b, d) == state_partition_series_enumerated(b, d),
        )
        record(f"flag b={b}", flag_series(b, d) == flag_series_enumerated(b, d))
        record(f"bundle-factorization b={b}", bundle_factorization_holds(b, d))
    for n in range(1, args.perm_max + 1):
        record(
            f"permutation n={n}",
            perm_inversion_series(n, d) == perm_series_closed(n, d),
        )
    for h in range(1, args.grassmann_max + 1):
        for j in range(h + 1):
            ok = grassmannian_series_closed(j, h, d) == grassmannian_series_enumerated(
                j, h, d
            )
            record(f"grassmannian j={j} h={h}", ok)
    _emit(args, ["identity", "degree", "verdict"], rows)
    return 0 if all_ok else 1


def cmd_density(args) -> int:
    if args.empirical:
        rows_data = empirical_density(
            balls=args.balls,
            e=args.e,
            mu_max=args.mu_max,
            steps=args.steps,
            burnin=args.burnin,
            seed=args.seed,
        )
        rows = [
            [f"{r.mu:.6f}", f"{r.empirical:.6f}", f"{r.predicted:.6f}", f"{r.absdiff:.6f}"]
            for r in rows_data
        ]
        _emit(args, ["mu", "empirical", "predicted", "absdiff"], rows, seed=args.seed)
    else:
        rows = [[f"{mu:.6f}", repr(dens)] for mu, dens in density_curve(args.e, args.mu_max, args.step)]
        _emit(args, ["mu", "density"], rows)
    return 0


def cmd_simulate(args) -> int:
    coin = CoinConfig(_parse_q(args.q))
    rng = ChainRng(args.seed)
    if args.labels:
        labels = _parse_labels(args.labels)
        state = FlagState(tuple(sorted(labels)))
        counts: dict[FlagState, int] = {}
        for step in range(args.steps):
            state = flag_backward_step(state, coin, rng)
            if step >= args.burnin:
                counts[state] = counts.get(state, 0) + 1
        samples = args.steps - args.burnin
        rows = [
            [str(s), c, str(Fraction(c, samples)), str(flag_stationary_weight(s, coin))]
            for s, c in sorted(counts.items(), key=lambda kv: str(kv[0]))
        ]
        _emit(args, ["state", "count", "empirical", "stationary"], rows, seed=args.seed)
        return 0
    sink = None
    trajectory_file = None
    if args.trajectory:
        trajectory_file = open(args.trajectory, "w")
        sink = lambda s: trajectory_file.write(str(s) + "\n")
    hist = simulate(
        ground_state(args.balls), coin, args.steps, args.burnin, rng, on_state=sink
    )
    if trajectory_file is not None:
        trajectory_file.close()
    tv = tv_distance(hist, coin, args.balls, args.max_inversions)
    rows = [
        [str(s), c, str(Fraction(c, hist.samples)), str(stationary_weight(s, coin))]
        for s, c in hist.counts
    ]
    rows.append(["<tv-distance>", "-", repr(tv), "-"])
    _emit(args, ["state", "count", "empirical", "stationary"], rows, seed=args.seed)
    return 0


def cmd_digraph(args) -> int:
    if args.flag_state:
        state = parse_flag_state(args.flag_state)
        rows = [
            [str(state), ",".join(map(str, sorted(tr.drops))) or "-", str(tr.target)]
            for tr in flag_forward_edges(state, args.max_drop)
        ]
        _emit(args, ["source", "drops", "target"], rows)
    else:
        state = parse_state(args.state)
        rows = [
            [str(state), t, str(target)]
            for t, target in forward_edges(state, args.max_throw)
        ]
        _emit(args, ["source", "throw", "target"], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jugglechain",
        description="Juggling-state digraphs, exact backward Markov chains, "
        "finite-field oracles, and ball-density asymptotics.",
    )
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", help="write the table here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("siteswap", help="parse and validate a throw sequence")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_siteswap)

    p = sub.add_parser("dist", help="exact backward transition distribution")
    p.add_argument("--state", help="plain state, e.g. --xx-x")
    p.add_argument("--flag-state", help="labeled state, e.g. --31-2")
    p.add_argument("--q", required=True, help="exact rational > 1, e.g. 2 or 7/2")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("stationary-check", help="exact/bracketed balance sweep")
    p.add_argument("--balls", type=int, default=2)
    p.add_argument("--labels", help="comma-separated label multiset for the flag chain")
    p.add_argument("--q", required=True)
    p.add_argument("--max-inversions", type=int, default=6)
    p.add_argument("--drop-cap", type=int)
    p.set_defaults(func=cmd_stationary_check)

    p = sub.add_parser("oracle", help="exhaustive matrix fraction sweeps")
    p.add_argument("--balls", type=int, default=2)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--p", type=int, default=2, choices=(2, 3, 5))
    p.add_argument("--flag", action="store_true", help="labeled pivot states")
    p.add_argument("--labels", help="group-coarsened sweep for this multiset")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("series", help="exact q-series identity checks")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    p.add_argument("--partition-max", type=int, default=4)
    p.add_argument("--perm-max", type=int, default=6)
    p.add_argument("--grassmann-max", type=int, default=8)
    p.add_argument(
        "--dump",
        choices=("partition", "flag", "permutation", "grassmannian"),
        help="emit one series' (degree, coefficient) rows instead of checks",
    )
    p.add_argument("--balls", type=int, default=3, help="b (or n) for --dump")
    p.add_argument("--j", type=int, default=1, help="subspace dim for --dump")
    p.add_argument("--h", type=int, default=3, help="ambient dim for --dump")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("density", help="ball-density curve / empirical comparison")
    p.add_argument(
        "--E", "--e", dest="e", type=float, required=True,
        help="all-heads probability E",
    )
    p.add_argument("--mu-max", type=float, default=6.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--balls", type=int, default=64)
    p.add_argument("--steps", type=int, default=200_000)
    p.add_argument("--burnin", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("simulate", help="trajectory histogram and TV report")
    p.add_argument("--balls", type=int, default=2)
    p.add_argument("--labels", help="simulate the flag chain over this multiset")
    p.add_argument("--q", required=True)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--burnin", type=int, default=1_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-inversions", type=int, default=10)
    p.add_argument("--trajectory", help="also write one state per line here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("digraph", help="forward edge dump with caps")
    p.add_argument("--state")
    p.add_argument("--flag-state")
    p.add_argument("--max-throw", type=int, default=9)
    p.add_argument("--max-drop", type=int, default=9)
    p.set_defaults(func=cmd_digraph)

    return parser


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Rewrite ['--state', '--xx-x'] as ['--state=--xx-x'] so state words
    beginning with '-' survive argparse."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--state", "--flag-state") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_values(list(argv)))
    if args.command == "dist" and bool(args.state) == bool(args.flag_state):
        parser.error("dist needs exactly one of --state / --flag-state")
    if args.command == "digraph" and bool(args.state) == bool(args.flag_state):
        parser.error("digraph needs exactly one of --state / --flag-state")
    try:
        return args.func(args)
    except JuggleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
