"""Clique-tree network construction.

A network in CT^k is grown from the single self-regulated automaton 0 by
repeatedly picking an existing automaton ``a`` and adding ``k`` fresh automata
that form a clique of size ``k + 1`` together with ``a``. A plan records the
sequence of attach points; its size is ``1 + k * len(attach)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import LocalRule, NetworkSpec
from .rng import SeededDraws

SHAPES = ("line", "star", "random", "explicit")


@dataclass(frozen=True)
class CliqueTreePlan:
    k: int
    attach: tuple[int, ...] = ()
    shape: str = "explicit"

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        attach = tuple(int(a) for a in self.attach)
        object.__setattr__(self, "attach", attach)
        for t, a in enumerate(attach):
            if not 0 <= a < 1 + t * self.k:
                raise ValueError(
                    f"attach point {a} at step {t} does not exist yet "
                    f"(automata 0..{t * self.k})")
        kind = self.shape.split(":", 1)[0]
        if kind not in SHAPES:
            raise ValueError(f"unknown plan shape {self.shape!r}")

    @property
    def cliques(self) -> int:
        return len(self.attach)

    @property
    def n(self) -> int:
        return 1 + self.k * len(self.attach)

    def new_automata(self, t: int) -> range:
        """Automata appended at construction step ``t``."""
        return range(1 + t * self.k, 1 + (t + 1) * self.k)

    def clique_members(self) -> list[tuple[int, ...]]:
        """One tuple per construction clique: the attach point, then the new automata."""
        return [(a, *self.new_automata(t)) for t, a in enumerate(self.attach)]

    def extended(self, attach_point: int) -> "CliqueTreePlan":
        return CliqueTreePlan(self.k, self.attach + (attach_point,), "explicit")


def parse_shape(shape: str, seed: int | None = None) -> tuple[str, int | None]:
    """Split ``"random:7"`` into ``("random", 7)``; validate the shape name."""
    kind, _, rest = shape.partition(":")
    if kind not in SHAPES:
        raise ValueError(f"unknown plan shape {shape!r}; expected one of {SHAPES}")
    if kind == "random":
        if rest:
            seed = int(rest)
        if seed is None:
            raise ValueError("random shape requires a seed")
    elif rest:
        raise ValueError(f"shape {kind!r} takes no argument")
    return kind, seed


def make_plan(k: int, cliques: int, shape: str = "line", seed: int | None = None,
              attach=None) -> CliqueTreePlan:
    """Build a plan with ``cliques`` cliques of size ``k + 1``.

    ``line`` chains each clique onto the last automaton of the previous one,
    ``star`` hangs every clique off automaton 0, ``random`` draws each attach
    point uniformly among existing automata from ``seed``, and ``explicit``
    takes ``attach`` verbatim.
    """
    if cliques < 1:
        raise ValueError(f"need at least one clique, got {cliques}")
    kind, seed = parse_shape(shape, seed)
    if kind == "line":
        seq = [t * k for t in range(cliques)]
    elif kind == "star":
        seq = [0] * cliques
    elif kind == "random":
        draws = SeededDraws(seed)
        seq = [draws.below(1 + t * k) for t in range(cliques)]
        return CliqueTreePlan(k, tuple(seq), f"random:{seed}")
    else:
        if attach is None or len(attach) != cliques:
            raise ValueError("explicit shape needs an attach sequence of length `cliques`")
        seq = list(attach)
    return CliqueTreePlan(k, tuple(seq), kind)


def build_ct(plan: CliqueTreePlan) -> NetworkSpec:
    """Parity network (all offsets 0) realising ``plan``."""
    nbrs: list[set[int]] = [{0}]
    for t, a in enumerate(plan.attach):
        new = list(plan.new_automata(t))
        clique = {a, *new}
        nbrs.extend(set(clique) for _ in new)
        nbrs[a].update(new)
    rules = tuple(LocalRule(tuple(sorted(nb)), 0) for nb in nbrs)
    return NetworkSpec(plan.k, rules, plan)


def to_synchroniser(network: NetworkSpec) -> NetworkSpec:
    """Compose a parity network with +1: every offset becomes 1."""
    if any(network.offsets):
        raise ValueError("network already has nonzero offsets; expected a parity network")
    return network.with_offsets([1] * network.n)


def project(network: NetworkSpec, target_k: int) -> NetworkSpec:
    """Reduce the alphabet from ``m * target_k`` to ``target_k``.

    Summing then reducing mod ``m * target_k`` and then mod ``target_k`` equals
    reducing mod ``target_k`` directly, so swapping the modulus is exact.
    """
    if target_k < 2 or network.k % target_k:
        raise ValueError(f"target alphabet {target_k} does not divide k={network.k}")
    return NetworkSpec.from_lists(
        target_k, network.neighbors, [o % target_k for o in network.offsets], network.plan)


def extend_even(network: NetworkSpec, source: int) -> NetworkSpec:
    """Append one automaton computing ``x[source] + 1`` (negation when k=2).

    The new automaton influences nobody, so the result is no longer strongly
    connected and carries no plan.
    """
    if not all(o == 1 for o in network.offsets):
        raise ValueError("extend_even expects a synchroniser (all offsets 1)")
    if not 0 <= source < network.n:
        raise ValueError(f"source {source} out of range 0..{network.n - 1}")
    rules = network.rules + (LocalRule((source,), 1),)
    return NetworkSpec(network.k, rules, None)
