"""Four-level model alone: how slow must the passes be?

Integrates the reduced model over the approach/reproach sequence for a range
of time scales and prints where the population ends up.  No grid simulation,
so this runs in seconds and is the quickest way to see the adiabatic
threshold.

    python demos/four_level_timing.py --branch +
"""

import argparse

import numpy as np

from spatial_stirap import ExperimentConfig
from spatial_stirap.fourlevel import FourLevelState, integrate_four_level


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--branch", default="+", choices=["+", "-"])
    ap.add_argument("--scales", type=float, nargs="+", default=[1, 10, 30, 100, 300, 1000],
                    help="multiples of the default approach time")
    ap.add_argument("--delta-t-fraction", type=float, default=0.25)
    ap.add_argument("--dt", type=float, default=0.05)
    args = ap.parse_args()

    base = ExperimentConfig(branch=args.branch)
    print(f"branch {args.branch}: omega_R = {base.omega_R:.6f}, Omega_R = {base.Omega_R:.4f}")
    print(f"{'scale':>7} {'T0*Om_R':>9} {'rho_L':>7} {'rho_M':>7} {'rho_RL':>7} {'rho_RR':>7} "
          f"{'max_M':>7} {'phase':>7}")
    for scale in args.scales:
        cfg = ExperimentConfig(branch=args.branch, T_scale=base.T_scale * scale,
                               delta_t_fraction=args.delta_t_fraction if scale > 1 else base.delta_t_fraction)
        sched = cfg.schedule()
        traj = integrate_four_level(FourLevelState.left(), cfg.layout(), sched, args.dt, sched.T0)
        pops = np.array([s.populations for s in traj])
        end = traj[-1]
        print(f"{scale:7g} {cfg.T0 * cfg.Omega_R:9.3g} "
              + " ".join(f"{p:7.4f}" for p in end.populations)
              + f" {pops[:, 1].max():7.4f} {end.relative_phase:7.4f}")


if __name__ == "__main__":
    main()
