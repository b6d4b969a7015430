"""Regenerate tests/golden/*.pgm. Only run this after an intentional rendering change."""

import os

from cliquetree.figures import FIGURES, GOLDEN_FIGURES, run_figure

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "golden")

if __name__ == "__main__":
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    for name in GOLDEN_FIGURES:
        _, traj, data = run_figure(FIGURES[name])
        with open(os.path.join(GOLDEN_DIR, f"{name}.pgm"), "wb") as fh:
            fh.write(data)
        print(f"{name}: {traj.n}x{len(traj)}")
