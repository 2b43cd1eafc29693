"""Weak-link concurrence of a 4-ring against the 3-ring."""

import time

from _common import parser, save_json

from resonator_net.sweeps import size_check

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    t0 = time.perf_counter()
    rep = size_check(args.n, restarts=args.restarts, seed=args.seed, threads=args.threads)
    save_json(args.outdir, f"ring_size_{args.n}.json", rep, None, args.seed, t0, "ring_size")
