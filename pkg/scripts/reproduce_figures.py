"""Write the six size-289 space-time diagrams as PGM files.

    python scripts/reproduce_figures.py --out figures/
"""

import argparse
import os
import time

from cliquetree.figures import FIGURES, run_figure


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="figures")
    ap.add_argument("--only", nargs="*", choices=sorted(FIGURES))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name in args.only or FIGURES:
        t0 = time.perf_counter()
        net, traj, data = run_figure(FIGURES[name])
        path = os.path.join(args.out, f"{name}.pgm")
        with open(path, "wb") as fh:
            fh.write(data)
        # first row at which the state is uniform
        rows = traj.states
        first_uniform = next(t for t in range(len(rows)) if (rows[t] == rows[t, 0]).all())
        print(f"{name:16s} k={net.k} n={net.n} image={traj.n}x{len(traj)} "
              f"uniform_from_row={first_uniform} ({time.perf_counter() - t0:.2f}s) -> {path}")


if __name__ == "__main__":
    main()
