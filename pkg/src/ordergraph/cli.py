"""Command-line front end: ``ordergraph {order,score,oracle,synth,render}``.

Exit status is 0 on success, 2 for bad flags or invalid input, 1 for I/O
failures.  Every failure prints one line starting with ``error:`` on stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .anneal import AnnealConfig, multi_restart
from .errors import OrderingError
from .formats import (
    read_cm,
    read_ordering,
    read_taxonomy,
    render_heatmap,
    write_cm,
    write_cm_json,
    write_ordering,
    write_trace,
)
from .matrix import (
    ClassOrdering,
    TaskLayout,
    apply_ordering,
    coarse_grained_ordering,
    invert_ordering,
    random_ordering,
)
from .oracle import exhaustive_best
from .scoring import score
from .synth import SynthSpec, block_cm, shuffle_cm
from .weights import KINDS, TASK_KINDS, StrategySpec, build_weights

log = logging.getLogger("ordergraph")

ORDER_STRATEGIES = KINDS + ("random", "coarse", "native")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from None
    return lo, hi


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_task_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tasks", type=int, help="number of equal-size tasks (must divide n)")
    g.add_argument("--task-sizes", type=_int_list, help="explicit task sizes, e.g. 4,3,3")
    p.add_argument("--within-weight", type=int, default=1)
    p.add_argument("--cross-weight", type=int, default=0)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="confusion matrix (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"), help="override suffix detection")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordergraph", description="Class orderings from confusion matrices.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("order", help="compute a class ordering")
    _add_input(p)
    p.add_argument("--strategy", required=True, choices=ORDER_STRATEGIES)
    _add_task_flags(p)
    p.add_argument("--taxonomy", help="class_index,group_id CSV (coarse strategy)")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int, default=200_000)
    p.add_argument("--alpha", type=float, default=0.99995, help="geometric cooling factor")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--init-temp", type=float, help="fixed start temperature (default: calibrated)")
    p.add_argument("--reversal-prob", type=float, default=0.0)
    p.add_argument("--canonicalize", action="store_true")
    p.add_argument("--output", required=True)
    p.add_argument("--trace")
    p.add_argument("--trace-stride", type=int, default=1)
    p.add_argument("--render")
    p.add_argument("--scale", choices=("linear", "log1p"), default="linear")

    p = sub.add_parser("score", help="score an ordering")
    _add_input(p)
    p.add_argument("--ordering", required=True)
    p.add_argument("--strategy", required=True, choices=KINDS)
    _add_task_flags(p)

    p = sub.add_parser("oracle", help="exhaustive maximum for small matrices")
    _add_input(p)
    p.add_argument("--strategy", required=True, choices=KINDS)
    _add_task_flags(p)
    p.add_argument("--max-n", type=int, default=9)

    p = sub.add_parser("synth", help="generate a block-structured confusion matrix")
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--block-size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--diag", type=_int_pair, default=(50, 80))
    p.add_argument("--within", type=_int_pair, default=(20, 40))
    p.add_argument("--cross", type=_int_pair, default=(0, 2))
    p.add_argument("--shuffle", action="store_true")
    p.add_argument("--output", required=True)
    p.add_argument("--truth", help="write the ordering that restores the planted blocks")

    p = sub.add_parser("render", help="write a PGM heatmap")
    _add_input(p)
    p.add_argument("--ordering")
    p.add_argument("--scale", choices=("linear", "log1p"), default="linear")
    p.add_argument("--output", required=True)
    return parser


def _layout(args, n: int) -> Optional[TaskLayout]:
    if args.tasks is not None:
        return TaskLayout.equal(n, args.tasks)
    if args.task_sizes is not None:
        layout = TaskLayout(args.task_sizes)
        layout.check(n)
        return layout
    return None


def _weights(args, n: int, layout: Optional[TaskLayout]):
    if args.strategy in TASK_KINDS:
        if layout is None:
            raise UsageError(f"strategy {args.strategy} needs --tasks or --task-sizes")
        spec = StrategySpec(args.strategy, layout, args.within_weight, args.cross_weight)
    else:
        spec = StrategySpec(args.strategy)
    return build_weights(spec, n)


def cmd_order(args) -> int:
    M = read_cm(args.input, args.format)
    n = M.n
    layout = _layout(args, n)
    kind = args.strategy
    if kind == "coarse" and not args.taxonomy:
        raise UsageError("strategy coarse needs --taxonomy")
    if kind in KINDS + ("random",) and args.seed is None:
        raise UsageError(f"strategy {kind} needs an explicit --seed")
    if args.trace and kind not in KINDS:
        raise UsageError(f"--trace is only produced by optimized strategies, not {kind}")

    score_value = None
    result = None
    if kind == "random":
        ordering = random_ordering(n, args.seed)
    elif kind == "native":
        ordering = ClassOrdering.identity(n)
    elif kind == "coarse":
        ordering = coarse_grained_ordering(read_taxonomy(args.taxonomy, n), n)
    else:
        W = _weights(args, n, layout)
        init_temp = "calibrated" if args.init_temp is None else args.init_temp
        config = AnnealConfig(
            seed=args.seed,
            iterations=args.iterations,
            cooling=args.alpha,
            init_temp=init_temp,
            restarts=args.restarts,
            reversal_move_prob=args.reversal_prob,
            canonicalize=args.canonicalize,
        )
        result = multi_restart(M, W, config, layout if kind in TASK_KINDS else None)
        ordering, score_value = result.best, result.best_score
        log.info("best score %d from chain %d", score_value, result.restart_id)

    write_ordering(
        ordering, args.output, layout=layout, labels=M.labels,
        strategy=kind, seed=args.seed, score=score_value,
    )
    if args.trace:
        write_trace(result.trace, args.trace, args.trace_stride)
    if args.render:
        render_heatmap(apply_ordering(M, ordering), args.render, args.scale)
    return 0


def cmd_score(args) -> int:
    M = read_cm(args.input, args.format)
    ordering = read_ordering(args.ordering)
    W = _weights(args, M.n, _layout(args, M.n))
    print(score(M, W, ordering))
    return 0


def cmd_oracle(args) -> int:
    M = read_cm(args.input, args.format)
    W = _weights(args, M.n, _layout(args, M.n))
    res = exhaustive_best(M, W, args.max_n)
    print(f"max_score: {res.max_score}")
    print(f"argmax: {','.join(str(c) for c in res.argmax.perm)}")
    print(f"argmax_count: {res.argmax_count}")
    return 0


def cmd_synth(args) -> int:
    spec = SynthSpec(args.blocks, args.block_size, args.diag, args.within, args.cross, args.seed)
    M, planted = block_cm(spec)
    truth = ClassOrdering.identity(M.n)
    if args.shuffle:
        M, sigma = shuffle_cm(M, args.seed)
        truth = invert_ordering(sigma)
    if Path(args.output).suffix.lower() == ".json":
        write_cm_json(M, args.output)
    else:
        write_cm(M, args.output)
    if args.truth:
        write_ordering(truth, args.truth, layout=planted, strategy="planted", seed=args.seed)
    return 0


def cmd_render(args) -> int:
    M = read_cm(args.input, args.format)
    if args.ordering:
        M = apply_ordering(M, read_ordering(args.ordering))
    render_heatmap(M, args.output, args.scale)
    return 0


COMMANDS = {
    "order": cmd_order,
    "score": cmd_score,
    "oracle": cmd_oracle,
    "synth": cmd_synth,
    "render": cmd_render,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return COMMANDS[args.command](args)
    except (UsageError, OrderingError) as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return 1


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


if __name__ == "__main__":
    sys.exit(main())
