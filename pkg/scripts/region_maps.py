"""Stability and solvability rasters for several values of omega~.

    python scripts/region_maps.py [--n 25] [--resolution 24] [--out DIR]

Writes one ``x,y,verdict`` CSV per raster and prints the region sizes,
which shrink monotonically as omega~ grows.
"""

import argparse
import os

from mrtlb.stability import solvability_region, stability_region

OMEGA_TILDES = {"1_18": 1 / 18, "1_36": 1 / 36, "1_180": 1 / 180}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=25)
    parser.add_argument("--resolution", type=int, default=24)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="out/regions")
    args = parser.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    for tag, wt in OMEGA_TILDES.items():
        stab = stability_region(omega_tilde=wt, x_range=(0.0, 0.6), y_range=(0.0, 0.6), n=(args.n, args.n),
                                resolution=args.resolution, threads=args.threads)
        stab.write_csv(os.path.join(args.out, f"stability_{tag}.csv"))
        solv = solvability_region(omega_tilde=wt, eta=1.0, dt=1 / 40, n=(30, 30), threads=args.threads)
        solv.write_csv(os.path.join(args.out, f"solvability_{tag}.csv"))
        print(f"omega~={tag.replace('_', '/')}: stable {int(stab.verdict.sum())}/{stab.verdict.size}, "
              f"solvable {int(solv.verdict.sum())}/{solv.verdict.size}")


if __name__ == "__main__":
    main()
