"""Clique-tree automata networks deciding k-parity and k-synchronisation."""

__version__ = "0.1.0"

from .analysis import (
    Exhaustive, InteractionDigraph, Sampled, VerificationReport, diameter, empirical_digraph,
    neighbourhood, predicted_diameter, semantic_digraph, verify_decides_k_parity,
    verify_plus_one_invariance, verify_radius_claim, verify_synchronises,
)
from .builder import CliqueTreePlan, build_ct, extend_even, make_plan, project, to_synchroniser
from .core import (
    LocalRule, NetworkSpec, TableNetwork, eval_local, format_configuration,
    parse_configuration, step,
)
from .engine import ConvergenceResult, Trajectory, convergence_time, find_limit, reference_k_parity, simulate
from .render import flatten, render_dynamics_dot, render_pgm
