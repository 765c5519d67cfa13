"""``flexcut`` command line.

Exit status: 0 on success, 1 when the instance is infeasible or a
verification fails, 2 on usage, input or parameter errors.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .augment import brute_force_cover, links_from_edges
from .crossing import LemmaReport, analyze_crossing, crosses, split_violated_family
from .flex import NotFlexConnected, enumerate_violated_cuts, is_flex_connected_cutwise, is_flex_connected_definitional
from .generate import MODES, GenerationError, GeneratorParams, generate_instance
from .graph import FlexGraph, GraphFormatError, PreconditionError, format_graph, members, parse_graph
from .pipeline import (
    BRUTE_FORCE_EDGE_LIMIT,
    base_p2_solution,
    brute_force_p3_optimum,
    solve_p3_fgc,
    sweep_instances,
    verify_instance,
)
from .report import emit_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

NEEDS_INPUT = {"check", "cuts", "analyze", "split", "solve", "oracle"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandConfig:
    subcommand: str
    input: str | None
    p: int
    q: int
    seed: int
    k: int
    output: str | None
    verbosity: int
    sweep: int | None = None
    mode: str = "random"
    timing: bool = False

    def validate(self) -> None:
        if self.subcommand in NEEDS_INPUT and self.input is None:
            raise UsageError(f"{self.subcommand} needs an input graph")
        if self.subcommand == "verify" and (self.input is None) == (self.sweep is None):
            raise UsageError("verify takes either an input graph or --sweep N")
        if self.p < 1:
            raise UsageError("--p must be positive")
        if self.subcommand in {"cuts", "analyze", "split", "verify", "solve", "oracle"} and self.p < 2:
            raise UsageError("--p must be at least 2 here")
        if not 0 <= self.q <= 3:
            raise UsageError("--q must lie in 0..3")
        if self.k < 0:
            raise UsageError("--k must be nonnegative")
        if self.sweep is not None and self.sweep < 1:
            raise UsageError("--sweep must be positive")
        if self.subcommand == "split" and self.p % 2 == 0:
            raise UsageError("split applies to odd p")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2)
    common.add_argument("--q", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--k", type=int, default=2, help="largest link subset for property gamma")
    common.add_argument("--output", "-o", default=None, help="report path (default stdout)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="flexcut", description="(p,q)-flexible connectivity toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_ in [
        ("check", "flex-connectivity by both methods"),
        ("cuts", "list the violated cuts"),
        ("analyze", "crossing reports for every crossing violated pair"),
        ("split", "F1/F2 split of the violated family (odd p)"),
        ("solve", "two-phase (p,3) solver"),
        ("oracle", "brute-force optima"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("input", help="graph file, or - for stdin")
        if name == "solve":
            sp.add_argument("--timing", action="store_true", help="include wall-clock time")
    sp = sub.add_parser("verify", parents=[common], help="structural lemma checks")
    sp.add_argument("input", nargs="?", default=None)
    sp.add_argument("--sweep", type=int, default=None, help="number of generated instances")
    sp = sub.add_parser("gen", parents=[common], help="emit a generated instance")
    sp.add_argument("--mode", choices=MODES, default="random")
    return parser


def _config(ns: argparse.Namespace) -> CommandConfig:
    return CommandConfig(
        subcommand=ns.subcommand,
        input=getattr(ns, "input", None),
        p=ns.p,
        q=ns.q,
        seed=ns.seed,
        k=ns.k,
        output=ns.output,
        verbosity=ns.verbose,
        sweep=getattr(ns, "sweep", None),
        mode=getattr(ns, "mode", "random"),
        timing=getattr(ns, "timing", False),
    )


def _workers() -> int:
    raw = os.environ.get("FLEXCUT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"FLEXCUT_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("FLEXCUT_THREADS must be positive")
    return value


def _read_graph(path: str) -> FlexGraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise UsageError(f"{path} is not UTF-8 text") from None
    return parse_graph(text)


# ---------------------------------------------------------------------------
# subcommands; each returns (exit status, report)


def cmd_check(cfg: CommandConfig, G: FlexGraph):
    definitional = is_flex_connected_definitional(G, cfg.p, cfg.q)
    cutwise = is_flex_connected_cutwise(G, cfg.p, cfg.q)
    if definitional.ok != cutwise.ok:
        raise AssertionError("definitional and cutwise checks disagree")
    report = {"p": cfg.p, "q": cfg.q, "flex_connected": cutwise.ok, "definitional": definitional.ok,
              "cutwise": cutwise.ok}
    if not cutwise.ok:
        w = cutwise.witness
        report["witness"] = {"side": members(w.side), "removed": list(w.removed), "remaining": w.remaining}
    return (EXIT_OK if cutwise.ok else EXIT_FAIL), report


def cmd_cuts(cfg: CommandConfig, G: FlexGraph):
    return EXIT_OK, enumerate_violated_cuts(G, cfg.p).to_text()


def cmd_analyze(cfg: CommandConfig, G: FlexGraph):
    family = enumerate_violated_cuts(G, cfg.p)
    pairs = [(a, b) for a, b in itertools.combinations(family.sides, 2) if crosses(G, a, b)]
    parts = [f"# crossing pairs={len(pairs)} family={len(family)} p={cfg.p}\n"]
    parts += [analyze_crossing(G, cfg.p, a, b).to_text() for a, b in pairs]
    return EXIT_OK, "".join(parts)


def cmd_split(cfg: CommandConfig, G: FlexGraph):
    family = enumerate_violated_cuts(G, cfg.p)
    split = split_violated_family(G, cfg.p, family)
    return EXIT_OK, "# F1\n" + split.F1.to_text() + "# F2\n" + split.F2.to_text()


def _verify_one(args: tuple[str, FlexGraph, int, int]) -> tuple[str, LemmaReport]:
    name, G, p, k = args
    return name, verify_instance(G, p, k)


def cmd_verify(cfg: CommandConfig, G: FlexGraph | None):
    if G is not None:
        instances = [(cfg.input, G)]
    else:
        instances = sweep_instances(cfg.p, cfg.sweep, cfg.seed)
    jobs = [(name, g, cfg.p, cfg.k) for name, g in instances]
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_one, jobs))  # map keeps input order
    else:
        results = [_verify_one(j) for j in jobs]
    total = LemmaReport(cfg.p, 0, {})
    nonvacuous = 0
    failing = []
    for name, rep in results:
        total.merge(rep)
        nonvacuous += not rep.vacuous
        if not rep.passed:
            failing.append(name)
    head = [f"# instances={len(results)} nonvacuous={nonvacuous} counterexamples={total.counterexample_count}"]
    if cfg.verbosity:
        head += [f"# failing instance {name}" for name in failing]
    text = "\n".join(head) + "\n" + total.to_text()
    return (EXIT_OK if total.passed else EXIT_FAIL), text


def cmd_solve(cfg: CommandConfig, G: FlexGraph):
    report = solve_p3_fgc(G, cfg.p)
    return (EXIT_OK if report.feasible else EXIT_FAIL), report.to_dict(timing=cfg.timing)


def cmd_oracle(cfg: CommandConfig, G: FlexGraph):
    report: dict = {"p": cfg.p, "q": cfg.q, "m": G.m}
    if G.m <= BRUTE_FORCE_EDGE_LIMIT:
        opt = brute_force_p3_optimum(G, cfg.p, cfg.q)
        report["optimum"] = {"edges": opt, "cost": G.cost_of(opt)}
    else:
        report["optimum"] = None
        report["note"] = f"full optimum skipped above {BRUTE_FORCE_EDGE_LIMIT} edges"
    if cfg.q == 3:
        base = base_p2_solution(G, cfg.p)
        sub, _ = G.restrict(base)
        family = enumerate_violated_cuts(sub, cfg.p)
        links = links_from_edges(G, set(range(G.m)) - set(base))
        ids, cost = brute_force_cover(family, links) if len(family) else ([], 0)
        report["augmentation"] = {"base": base, "family_size": len(family), "links": ids, "cost": cost}
    return EXIT_OK, report


def cmd_gen(cfg: CommandConfig):
    params = GeneratorParams(cfg.mode, cfg.p, cfg.seed)
    G = generate_instance(params)
    return EXIT_OK, format_graph(G, comment=f"mode={cfg.mode} p={cfg.p} seed={cfg.seed}")


COMMANDS = {
    "check": cmd_check,
    "cuts": cmd_cuts,
    "analyze": cmd_analyze,
    "split": cmd_split,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
}


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = _config(ns)
    start = time.perf_counter()
    try:
        cfg.validate()
        _workers()
        G = _read_graph(cfg.input) if cfg.input is not None and cfg.subcommand != "gen" else None
        if cfg.subcommand == "gen":
            status, report = cmd_gen(cfg)
        elif cfg.subcommand == "verify":
            status, report = cmd_verify(cfg, G)
        else:
            status, report = COMMANDS[cfg.subcommand](cfg, G)
    except (UsageError, GraphFormatError) as exc:
        print(f"flexcut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotFlexConnected as exc:
        print(f"flexcut: infeasible: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (PreconditionError, GenerationError) as exc:
        print(f"flexcut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit_report(report, cfg.output)
    except OSError as exc:
        print(f"flexcut: cannot write report: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.verbosity:
        print(f"flexcut: {cfg.subcommand} finished in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run_command())


__all__ = ["CommandConfig", "build_parser", "run_command", "main"]
