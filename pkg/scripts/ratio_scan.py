"""Best concurrence per drive direction (x_1, x_3) ~ (cos t, sin t) on the 3-ring."""

import math
import time

from _common import parser, save_csv

from resonator_net.network import scenario_catalog
from resonator_net.sweeps import ratio_scan

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--points", type=int, default=72)
    args = p.parse_args()
    t0 = time.perf_counter()
    net = scenario_catalog("config_iii")
    thetas = [2 * math.pi * k / args.points for k in range(args.points)]
    res = ratio_scan(net, thetas, threads=args.threads)
    save_csv(args.outdir, "ratio_scan.csv", res, net, None, t0, "ratio_scan")
