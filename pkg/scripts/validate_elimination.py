"""Full polariton + waveguide model against the eliminated model at desk-scale parameters."""

import time

from _common import parser, save_json

from resonator_net.fullmodel import validate_elimination
from resonator_net.network import scaled_config_i

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=10.0)
    p.add_argument("--n-max", type=int, default=3)
    args = p.parse_args()
    t0 = time.perf_counter()
    net = scaled_config_i(alpha=args.alpha, kappa=args.kappa)
    rep = validate_elimination(net, n_max=args.n_max)
    save_json(args.outdir, "validate_elimination.json", rep, net, None, t0, "validate_elimination")
