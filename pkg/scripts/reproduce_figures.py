#!/usr/bin/env python3
"""Regenerate the reference plot data for the z = 3.2+1i filter family.

For each ell in 0..3 this writes, under OUTDIR/ell{n}/:
  filter_h0.csv            the refinement filter on the torus grid
  cascade_phihat.csv       the refinable function in the frequency domain
  cascade_phi_time.csv     the refinable function in the time domain
  framelet_psihat_n*.csv   the three framelets in the frequency domain
  framelet_psi_n*.csv      the three framelets in the time domain

Each block is one CLI invocation; the equivalent shell command is printed
before it runs, so any single file can be regenerated by hand.
"""

import argparse
import pathlib
import sys

from pseudosplines.cli import main as cli_main

Z = "3.2+1i"


def run(args):
    print("$ pseudosplines " + " ".join(args))
    rc = cli_main(args)
    if rc != 0:
        sys.exit(rc)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="figures_data", help="output root")
    parser.add_argument("--grid", type=int, default=1024, help="filter sampling resolution")
    ns = parser.parse_args()

    root = pathlib.Path(ns.outdir)
    for ell in range(4):
        out = root / f"ell{ell}"
        out.mkdir(parents=True, exist_ok=True)
        base = ["--z", Z, "--ell", str(ell), "--out", str(out)]
        run(["filter"] + base + ["--grid", str(ns.grid)])
        run(
            ["cascade"] + base
            + ["--time-half-width", "8", "--dt", "1/32", "--time-tolerance", "1e-2"]
        )
        run(
            ["framelets"] + base
            + ["--grid", "8192", "--with-hats", "--psi-window", "8",
               "--with-time", "--time-half-width", "8", "--dt", "1/32",
               "--time-tolerance", "1e-2"]
        )
    print(f"done: {root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
