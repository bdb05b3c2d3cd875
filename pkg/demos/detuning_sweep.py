"""Detuning sweep of the right-trap frequency in the slow regime.

Runs a parameter sweep over the relative offset of omega_R from resonance
and prints the transfer and parity at each point.  The sweep machinery is
the same one the ``spatial-stirap sweep`` command uses, so ``--workers``
parallelizes the points.

    python demos/detuning_sweep.py --branch + --points 5 --workers 4
"""

import argparse

from spatial_stirap import ExperimentConfig
from spatial_stirap.experiment import linspace_values, run_sweep
from spatial_stirap.report import emit_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--branch", default="+", choices=["+", "-"])
    ap.add_argument("--span", type=float, default=0.1)
    ap.add_argument("--points", type=int, default=5)
    ap.add_argument("--scale", type=float, default=400, help="multiple of the default approach time")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--output", help="directory for the report")
    args = ap.parse_args()

    base = ExperimentConfig(branch=args.branch)
    cfg = ExperimentConfig(branch=args.branch, T_scale=base.T_scale * args.scale, delta_t_fraction=0.25,
                           n_points=1024, dt=0.025, record_stride=40, hold_time=0.0,
                           sweep_axis="detuning_fraction",
                           sweep_values=linspace_values(-args.span, args.span, args.points),
                           workers=args.workers)
    result = run_sweep(cfg, four_level=False, abort_on_leak=False)
    cols = ("detuning_fraction", "double_well", "max_rho_M", "fid_target", "S_R", "S_I", "S_dominant")
    print("  ".join(f"{c:>17}" for c in cols))
    for row in result.table():
        print("  ".join(f"{row.get(c, float('nan')):17.4f}" for c in cols))
    if args.output:
        emit_report(result, args.output)


if __name__ == "__main__":
    main()
