"""Canonical network files.

A network file is compact JSON with sorted keys::

    {"k":2,"n":3,"neighbors":[[0,1,2],[0,1,2],[0,1,2]],"offsets":[0,0,0],
     "plan":{"attach":[0],"k":2,"shape":"line"}}

``plan`` is optional. When present, the reader rebuilds the clique tree from
it and rejects the file unless the stored neighbour lists match exactly.
"""

from __future__ import annotations

import hashlib
import json

from .builder import CliqueTreePlan, build_ct, make_plan, parse_shape
from .core import NetworkSpec


class NetworkFileError(ValueError):
    pass


def plan_to_dict(plan: CliqueTreePlan) -> dict:
    return {"k": plan.k, "shape": plan.shape, "attach": list(plan.attach)}


def network_to_dict(network: NetworkSpec) -> dict:
    d = {
        "k": network.k,
        "n": network.n,
        "offsets": network.offsets,
        "neighbors": [list(nb) for nb in network.neighbors],
    }
    if network.plan is not None:
        d["plan"] = plan_to_dict(network.plan)
    return d


def dumps_network(network: NetworkSpec) -> str:
    return json.dumps(network_to_dict(network), sort_keys=True, separators=(",", ":")) + "\n"


def network_digest(network: NetworkSpec) -> str:
    return hashlib.sha256(dumps_network(network).encode()).hexdigest()[:16]


def plan_mismatch(network: NetworkSpec) -> str | None:
    """Describe how the stored plan disagrees with the topology, or ``None``."""
    plan = network.plan
    if plan is None:
        return None
    kind, seed = parse_shape(plan.shape)
    if kind in ("line", "star", "random"):
        expected = make_plan(plan.k, plan.cliques, kind, seed).attach if plan.cliques else ()
        if expected != plan.attach:
            return f"attach sequence does not follow shape {plan.shape!r}"
    rebuilt = build_ct(plan)
    if rebuilt.n != network.n:
        return f"plan builds {rebuilt.n} automata, file has {network.n}"
    for i, (a, b) in enumerate(zip(rebuilt.neighbors, network.neighbors)):
        if a != b:
            return f"automaton {i}: plan gives neighbours {list(a)}, file has {list(b)}"
    return None


def loads_network(text: str, strict: bool = True) -> NetworkSpec:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(f"not valid JSON: {exc}") from None
    try:
        k, n = int(d["k"]), int(d["n"])
        neighbors, offsets = d["neighbors"], d["offsets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise NetworkFileError(f"missing or malformed field: {exc}") from None
    if len(neighbors) != n or len(offsets) != n:
        raise NetworkFileError(f"expected {n} neighbour lists and offsets")
    plan = None
    if d.get("plan") is not None:
        p = d["plan"]
        try:
            plan = CliqueTreePlan(int(p["k"]), tuple(p["attach"]), str(p["shape"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFileError(f"bad plan: {exc}") from None
    try:
        network = NetworkSpec.from_lists(k, neighbors, offsets, plan)
    except ValueError as exc:
        raise NetworkFileError(str(exc)) from None
    if strict:
        problem = plan_mismatch(network)
        if problem:
            raise NetworkFileError(f"plan mismatch: {problem}")
    return network


def write_network(network: NetworkSpec, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps_network(network))


def read_network(path, strict: bool = True) -> NetworkSpec:
    with open(path) as fh:
        return loads_network(fh.read(), strict)
