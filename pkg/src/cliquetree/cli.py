"""Command-line front end.

Exit codes: 0 success, 1 verification failure or non-convergence, 2 usage
error, 3 input/output error. Every command that writes files also writes
``<output>.manifest.json`` recording the command line and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .analysis import (BudgetExceeded, Sampled, diameter, parse_mode, predicted_diameter,
                       semantic_digraph, verify_decides_k_parity, verify_plus_one_invariance,
                       verify_radius_claim, verify_synchronises)
from .builder import build_ct, extend_even, make_plan, parse_shape, project, to_synchroniser
from .core import ct_invariant_violations, parse_configuration
from .engine import UndeterminedError, find_limit, read_trajectory, simulate, write_trajectory
from .netfile import NetworkFileError, plan_mismatch, read_network, write_network
from .render import flatten, identity_order, render_dynamics_dot, render_pgm
from .rng import random_configuration

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    command: list[str]
    seed: int | None = None
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    version: str = __version__

    def write(self, path: str) -> None:
        with open(path + ".manifest.json", "w", newline="\n") as fh:
            json.dump(asdict(self), fh, indent=2)
            fh.write("\n")


def _load(path, strict=True):
    return read_network(path, strict)


def _bound(network) -> int:
    return diameter(semantic_digraph(network))


def cmd_build(args) -> int:
    if args.cliques < 1:
        raise UsageError("--cliques must be >= 1")
    attach = None
    if args.attach is not None:
        attach = [int(a) for a in args.attach.split(",") if a.strip()]
    shape = args.shape
    try:
        kind, seed = parse_shape(shape, args.seed)
        plan = make_plan(args.k, args.cliques, kind, seed, attach)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    network = build_ct(plan)
    if args.project_to is not None:
        try:
            network = project(network, args.project_to)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.sync or args.extend_even is not None:
        network = to_synchroniser(network)
    if args.extend_even is not None:
        try:
            network = extend_even(network, args.extend_even)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    write_network(network, args.out)
    RunManifest(sys.argv, seed, [], [args.out]).write(args.out)
    D = _bound(network)
    print(f"n={network.n} k={network.k} diameter={D} predicted_convergence={D}")
    return EXIT_OK


def _initial(spec: str, network):
    if spec.startswith("random:"):
        seed = int(spec.split(":", 1)[1])
        return random_configuration(network.n, network.k, seed), seed
    if spec.startswith("single:"):
        i = int(spec.split(":", 1)[1])
        if not 0 <= i < network.n:
            raise UsageError(f"single:{i} out of range")
        x = [0] * network.n
        x[i] = 1
        return tuple(x), None
    if spec.startswith("file:") or os.path.isfile(spec):
        path = spec[5:] if spec.startswith("file:") else spec
        with open(path) as fh:
            text = fh.read().strip().splitlines()[0]
        return parse_configuration(text, network.k), None
    return parse_configuration(spec, network.k), None


def cmd_simulate(args) -> int:
    network = _load(args.network)
    try:
        x0, seed = _initial(args.init, network)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(x0) != network.n:
        raise UsageError(f"initial configuration has length {len(x0)}, network has {network.n}")
    D = _bound(network)
    if args.steps == "auto":
        steps = D + network.k
    else:
        try:
            steps = int(args.steps)
        except ValueError:
            raise UsageError("--steps must be an integer or 'auto'") from None
        if steps < 0:
            raise UsageError("--steps must be non-negative")
    traj = simulate(network, x0, steps)
    with open(args.out, "w", newline="\n") as fh:
        fh.write(write_trajectory(traj))
    RunManifest(sys.argv, seed, [args.network], [args.out]).write(args.out)
    try:
        res = find_limit(network, x0, D + network.k + 1)
    except UndeterminedError as exc:
        print(f"limit: undetermined ({exc})")
        return EXIT_FAIL
    print(f"limit: {res.classification} transient={res.transient_length} "
          f"cycle_length={res.cycle_length}")
    return EXIT_OK


PROPERTY_ALIASES = {"parity": "decides_k_parity", "sync": "synchronises",
                    "radius": "radius_claim", "plus1": "plus_one_invariance"}


def cmd_verify(args) -> int:
    network = _load(args.network)
    try:
        mode = parse_mode(args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prop = PROPERTY_ALIASES[args.property]
    offsets = set(network.offsets)
    if prop == "synchronises" and offsets != {1}:
        raise UsageError("sync property requires a synchroniser (all offsets 1)")
    if prop != "synchronises" and offsets != {0}:
        raise UsageError(f"{args.property} property requires a parity network (all offsets 0)")
    try:
        if prop == "decides_k_parity":
            report = verify_decides_k_parity(network, mode, workers=args.workers)
        elif prop == "synchronises":
            report = verify_synchronises(network, mode, workers=args.workers)
        else:
            if not isinstance(mode, Sampled):
                raise UsageError(f"{args.property} needs --mode sample:<count>:<seed>")
            fn = verify_radius_claim if prop == "radius_claim" else verify_plus_one_invariance
            report = fn(network, mode.count, mode.seed)
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    text = report.to_text(network.k)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        seed = mode.seed if isinstance(mode, Sampled) else None
        RunManifest(sys.argv, seed, [args.network], [args.out]).write(args.out)
    sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_render(args) -> int:
    network = _load(args.network)
    with open(args.trajectory) as fh:
        try:
            traj = read_trajectory(fh.read())
        except ValueError as exc:
            raise UsageError(f"bad trajectory: {exc}") from None
    if traj.n != network.n or traj.k != network.k:
        raise UsageError(f"trajectory is k={traj.k} n={traj.n}, network is k={network.k} n={network.n}")
    plan = network.plan
    order = flatten(plan) if plan is not None and plan.n == network.n else identity_order(network.n)
    data = render_pgm(traj, order)
    with open(args.out, "wb") as fh:
        fh.write(data)
    RunManifest(sys.argv, None, [args.trajectory, args.network], [args.out]).write(args.out)
    print(f"{traj.n}x{len(traj)}")
    return EXIT_OK


def cmd_info(args) -> int:
    network = _load(args.network, strict=False)
    offsets = sorted(set(network.offsets))
    print(f"k={network.k} n={network.n}")
    print(f"offsets: {','.join(map(str, offsets))}"
          + (" (parity)" if offsets == [0] else " (synchroniser)" if offsets == [1] else ""))
    plan = network.plan
    if plan is not None:
        print(f"plan: shape={plan.shape} cliques={plan.cliques} clique_size={plan.k + 1}")
    problems = ct_invariant_violations(network)
    mismatch = plan_mismatch(network)
    if mismatch:
        problems.append(f"plan mismatch: {mismatch}")
    if problems:
        print("invariants: FAIL")
        for p in problems:
            print(f"  {p}")
    else:
        print("invariants: OK")
    try:
        print(f"diameter: {_bound(network)}")
    except ValueError as exc:
        print(f"diameter: undefined ({exc})")
    if plan is not None and plan.shape == "line" and plan.n == network.n and plan.cliques:
        print(f"predicted: {predicted_diameter(plan.k, plan.n)}")
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_dot(args) -> int:
    network = _load(args.network)
    try:
        text = render_dynamics_dot(network, args.states)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cliquetree", description="Clique-tree automata networks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a network file")
    b.add_argument("--k", type=int, default=2)
    b.add_argument("--cliques", type=int, required=True)
    b.add_argument("--shape", default="line", help="line | star | random[:seed] | explicit")
    b.add_argument("--seed", type=int)
    b.add_argument("--attach", help="comma-separated attach points for --shape explicit")
    b.add_argument("--project-to", type=int, help="project the alphabet down to this size")
    b.add_argument("--sync", action="store_true", help="emit the synchronising variant")
    b.add_argument("--extend-even", type=int, metavar="SOURCE",
                   help="synchroniser plus one automaton copying SOURCE + 1")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("simulate", help="run the parallel dynamics")
    s.add_argument("network")
    s.add_argument("--init", required=True, help="random:<seed> | single:<i> | literal | file:<path>")
    s.add_argument("--steps", default="auto")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="check a property")
    v.add_argument("network")
    v.add_argument("--property", choices=sorted(PROPERTY_ALIASES), required=True)
    v.add_argument("--mode", default="exhaustive", help="exhaustive | sample:<count>:<seed>")
    v.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="space-time diagram as PGM")
    r.add_argument("trajectory")
    r.add_argument("network")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    i = sub.add_parser("info", help="summarise a network file")
    i.add_argument("network")
    i.set_defaults(func=cmd_info)

    d = sub.add_parser("dot", help="interaction digraph in DOT format")
    d.add_argument("network")
    d.add_argument("--states", action="store_true", help="also emit the configuration graph")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, NetworkFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
