"""Space-time diagram scenarios for size-289 line-of-cliques networks."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import diameter, semantic_digraph
from .builder import build_ct, make_plan, project, to_synchroniser
from .core import NetworkSpec
from .engine import Trajectory, simulate
from .render import flatten, render_pgm
from .rng import random_configuration


@dataclass(frozen=True)
class FigureConfig:
    name: str
    k: int                       # alphabet the clique tree is built over
    n: int = 289
    project_to: int | None = None
    sync: bool = False
    seed: int = 289
    extra_steps: int = 0         # rows beyond the diameter

    def network(self) -> NetworkSpec:
        plan = make_plan(self.k, (self.n - 1) // self.k, "line")
        net = build_ct(plan)
        if self.project_to is not None:
            net = project(net, self.project_to)
        if self.sync:
            net = to_synchroniser(net)
        return net


FIGURES = {
    cfg.name: cfg
    for cfg in [
        FigureConfig("parity", k=2),
        FigureConfig("synchronisation", k=2, sync=True, extra_steps=2),
        FigureConfig("3arity", k=3),
        FigureConfig("3sync", k=3, sync=True, extra_steps=3),
        FigureConfig("fastparity", k=4, project_to=2),
        FigureConfig("fastsync", k=4, project_to=2, sync=True, extra_steps=2),
    ]
}

GOLDEN_FIGURES = ("parity", "3arity", "fastparity")


def run_figure(cfg: FigureConfig) -> tuple[NetworkSpec, Trajectory, bytes]:
    net = cfg.network()
    steps = diameter(semantic_digraph(net)) + cfg.extra_steps
    x0 = random_configuration(net.n, net.k, cfg.seed)
    traj = simulate(net, x0, steps)
    return net, traj, render_pgm(traj, flatten(net.plan))
