"""Optimised concurrence against z for the single link, the shared link and the ring."""

import time

import numpy as np
from _common import parser, save_csv

from resonator_net.sweeps import crossover, z_sweep

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--points", type=int, default=28)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    t0 = time.perf_counter()
    grid = sorted(set(np.round(np.linspace(1.0, 6.0, args.points), 6)) | {1.221, 4.03})
    res = z_sweep(["config_i", "config_ii", "config_iii"], grid, restarts=args.restarts, seed=args.seed,
                  threads=args.threads)
    z = res.column("z")
    m = z > 1
    zc = crossover(z[m], res.column("C_config_iii")[m], res.column("C_config_i")[m])
    print(f"ring drops below the single link at z = {zc}")
    save_csv(args.outdir, "loss_scan.csv", res, None, args.seed, t0, "loss_scan")
