"""Print the synthesized parameter sets for the anisotropic and source benchmarks.

    python scripts/parameter_tables.py [--out DIR]
"""

import argparse
import math
import os
from fractions import Fraction

from mrtlb.cli import write_rows
from mrtlb.params import (Discretization, PDEParams, axis_lattice_closed_form, isotropic_closed_form,
                          parameter_rows, solve_model)

# (eps~, omega~, branch); dx = 1/100, dt = 1/40, no source
ANISOTROPIC = [
    ((0.40, 0.10), 1 / 36, (0, 1)),
    ((0.20, 0.20), 1 / 36, (0, 0)),
    ((0.10, 0.30), 1 / 36, (1, 0)),
    ((0.10, 0.40, 0.15), 1 / 180, (0, 0, 1)),
    ((0.15, 0.20, 0.10, 0.05), 1 / 360, (0, 0, 0, 0)),
]

# eta = -pi^2, dx = 1/80, dt = 1/400
WITH_SOURCE = [((0.25, 0.10), (0, 1)), ((0.40, 0.40), (0, 0)), ((0.15, 0.40), (0, 0))]


def _tag(eps):
    return "_".join(f"{e:g}" for e in eps)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out/tables")
    args = parser.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)

    disc = Discretization(1 / 100, 1 / 40)
    for eps, wt, branch in ANISOTROPIC:
        model = solve_model(PDEParams.from_eps_tilde(eps, disc), disc, wt, 1.0, branch)
        rows = parameter_rows(model)
        write_rows(os.path.join(args.out, f"anisotropic_{_tag(eps)}.csv"), rows)
        print(f"eps~={eps}: omega0={float(model.weights.omega0):.15f} s={model.rates.s_axis}")

    disc = Discretization(1 / 80, 1 / 400)
    for eps, branch in WITH_SOURCE:
        pde = PDEParams.from_eps_tilde(eps, disc, eta=-math.pi ** 2)
        model = solve_model(pde, disc, 1 / 36, 1.0, branch)
        write_rows(os.path.join(args.out, f"source_{_tag(eps)}.csv"), parameter_rows(model))
        print(f"eps~={eps} (source): omega0={float(model.weights.omega0):.15f} s={model.rates.s_axis}")

    for eps in (Fraction(1, 10), Fraction(1, 5)):
        form = isotropic_closed_form(eps, Fraction(1, 36), 2)
        print(f"isotropic closed form eps={eps}: omega0={form.omega0} omega={form.omega_axis} "
              f"s2={form.s2_axis} s_xy={form.s_cross}")
    for eps, dt in ((0.1, 0.01), (0.2, 1 / 400)):
        form = axis_lattice_closed_form(eps, -math.pi ** 2, dt, 2, check=False)
        print(f"D2Q5 closed form eps={eps}: omega0={form.omega0:.6f} s_x={form.s_axis:.15f}")


if __name__ == "__main__":
    main()
