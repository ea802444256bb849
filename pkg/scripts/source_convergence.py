"""Convergence of the three isotropic models on the sine field with a linear source.

    python scripts/source_convergence.py [--eps 0.1 0.2] [--finest 160] [--out DIR]
"""

import argparse
import os
import warnings

import numpy as np

from mrtlb.bench import convergence_study, model_factory, sine_source_case, write_convergence_csv

XI = 16.0
T_FINAL = 1.0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.2])
    parser.add_argument("--finest", type=int, default=160, help="finest 1/dx (40, 80, 160, 240 or 320)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="out/source_convergence")
    args = parser.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    dx_list = [1 / n for n in (40, 80, 160, 240, 320) if n <= args.finest]

    warnings.simplefilter("ignore", RuntimeWarning)
    for eps in args.eps:
        case = sine_source_case(eps / XI, eps / XI)
        for method in ("general", "isotropic", "axis"):
            # the axis model is run even where its rest weight is negative
            factory = model_factory(method, check=False)
            with np.errstate(all="ignore"):
                rows = convergence_study(case, factory, dx_list, XI, T_FINAL, "fourth_order", args.threads)
            path = os.path.join(args.out, f"eps{eps:g}_{method}.csv")
            write_convergence_csv(path, {"fourth_order": rows})
            cells = " ".join(f"{r.l2:.4e}({'-' if r.rate is None else f'{r.rate:.4f}'})" for r in rows)
            print(f"eps={eps:g} {method:9s} {cells}")


if __name__ == "__main__":
    main()
