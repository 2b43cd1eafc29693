"""Maximise the concurrence of the two cavities sharing the strong waveguide."""

import time

from _common import parser, save_json

from resonator_net.cli import default_optimize_spec
from resonator_net.network import scenario_catalog
from resonator_net.optimize import maximize_concurrence, with_overrides

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    t0 = time.perf_counter()
    net = scenario_catalog("config_ii")
    spec = with_overrides(default_optimize_spec(net, (0, 1)), restarts=args.restarts, seed=args.seed)
    res = maximize_concurrence(spec, args.threads)
    save_json(args.outdir, "optimise_shared_link.json", res.to_dict(), net, args.seed, t0, "optimise")
