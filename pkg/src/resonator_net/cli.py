"""Command-line entry point: ``resonator-net <command> ...``.

Exit codes: 0 ok, 1 bad input or violated precondition, 2 solver failure,
3 validation deviation above threshold.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .entanglement import (
    DegenerateDenominator,
    concurrence,
    cross_correlation,
    factorization_diagnostic,
    partial_trace,
    populations,
)
from .fullmodel import TruncationError, validate_elimination
from .network import Network, ScenarioError, derive_effective, load_scenario
from .optimize import FreeParam, OptimizeSpec, maximize_concurrence, spec_from_dict, with_overrides
from .records import atomic_write_text, sweep_to_csv, to_json, write_manifest
from .steadystate import NoConvergence, SteadyStateError, steady_state
from .sweeps import phase_sweep, ratio_scan, z_sweep

log = logging.getLogger("resonator_net")

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_THRESHOLD = 0, 1, 2, 3
THREADS_ENV = "RESONATOR_NET_THREADS"


class InputError(ValueError):
    pass


def parse_pair(text: str | None) -> tuple[int, int] | None:
    """``"2,3"`` (1-based) -> ``(1, 2)``."""
    if text is None:
        return None
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"--pair expects two comma-separated integers, got {text!r}") from None
    if a == b or min(a, b) < 1:
        raise InputError(f"--pair needs two distinct 1-based sites, got {text!r}")
    return a - 1, b - 1


def resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if value < 0:
        raise InputError("--threads must be >= 0")
    return value


def _effective(net: Network) -> Network:
    return derive_effective(net) if net.mode == "physical" else net


def _check_pair(net: Network, pair) -> None:
    if pair is not None and max(pair) >= net.n:
        raise InputError(f"pair {pair[0] + 1},{pair[1] + 1} out of range for {net.n} sites")


def _key(i: int, j: int) -> str:
    return f"{i + 1},{j + 1}"


def steady_report(net: Network, pair: tuple[int, int] | None = None) -> dict:
    eff = _effective(net)
    _check_pair(eff, pair)
    res = steady_state(eff)
    rho = res.rho
    n = eff.n
    pairs = [pair] if pair is not None else [(i, j) for i in range(n) for j in range(i + 1, n)]
    conc, xcorr, fact = {}, {}, {}
    for i, j in pairs:
        conc[_key(i, j)] = concurrence(partial_trace(rho, [i, j]))
        try:
            xcorr[_key(i, j)] = cross_correlation(rho, i, j)
        except DegenerateDenominator:
            xcorr[_key(i, j)] = None
        for k in range(n):
            if n >= 3 and k not in (i, j):
                purity, ground = factorization_diagnostic(rho, k)
                fact[f"{_key(i, j)}|{k + 1}"] = {"site": k + 1, "purity": purity, "ground_fidelity": ground}
    return {
        "scenario": eff.name,
        "n_sites": n,
        "rho_real": rho.real,
        "rho_imag": rho.imag,
        "residual": res.residual,
        "uniqueness_gap": res.uniqueness_gap,
        "min_eigenvalue": res.min_eigenvalue,
        "populations": populations(rho),
        "ground_population": float(rho[0, 0].real),
        "concurrence": conc,
        "cross_correlation": xcorr,
        "factorization": fact,
    }


def default_optimize_spec(net: Network, pair: tuple[int, int]) -> OptimizeSpec:
    """Common drive magnitude on every driven link, free relative phases."""
    driven = tuple(i for i, l in enumerate(net.links) if l.x != 0)
    if not driven:
        raise InputError("no driven links to optimise; pass --spec")
    top = 10.0 * max(abs(net.links[i].x) for i in driven)
    free = [FreeParam("abs_x", driven, 0.0, top)]
    free += [FreeParam("arg_x", (i,), 0.0, 2 * math.pi) for i in driven[1:]]
    return OptimizeSpec(net, tuple(free), pair=pair)


# ---------------------------------------------------------------------------
# commands


def cmd_steady(args) -> tuple[dict, Network]:
    net = load_scenario(args.config)
    return steady_report(net, parse_pair(args.pair)), net


def cmd_sweep(args) -> tuple[str, Network | None]:
    threads = resolve_threads(args.threads)
    if args.grid < 1:
        raise InputError("--grid must be >= 1")
    pair = parse_pair(args.pair)
    if args.kind == "z":
        configs = ["config_i", "config_ii", "config_iii"]
        if args.z_min < 1 or args.z_max > 6 or args.z_min > args.z_max:
            raise InputError("z range must satisfy 1 <= z-min <= z-max <= 6")
        grid = np.linspace(args.z_min, args.z_max, args.grid) if args.grid > 1 else [args.z_min]
        res = z_sweep(configs, [float(z) for z in grid], restarts=args.restarts, seed=args.seed,
                      threads=threads)
        return sweep_to_csv(res), None
    if args.config is None:
        raise InputError(f"sweep {args.kind} needs --config")
    net = _effective(load_scenario(args.config))
    _check_pair(net, pair)
    links = parse_pair(args.links)
    if max(links) >= len(net.links):
        raise InputError(f"--links {args.links} out of range for {len(net.links)} links")
    if args.kind == "phase":
        res = phase_sweep(net, args.grid, links=links, pair=pair, threads=threads)
    else:
        thetas = [2 * math.pi * k / args.grid for k in range(args.grid)]
        res = ratio_scan(net, thetas, links=links, pair=pair, threads=threads)
    return sweep_to_csv(res), net


def cmd_optimize(args) -> tuple[dict, Network]:
    net = _effective(load_scenario(args.config))
    pair = parse_pair(args.pair)
    if args.spec is not None:
        try:
            with open(args.spec) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.spec}: malformed JSON ({exc})") from exc
        except OSError as exc:
            raise InputError(str(exc)) from exc
        if not isinstance(doc, dict):
            raise InputError(f"{args.spec}: expected a JSON object")
        try:
            spec = spec_from_dict(net, doc)
        except (KeyError, TypeError) as exc:
            raise InputError(f"{args.spec}: {exc}") from exc
        if pair is not None:
            spec = with_overrides(spec, pair=pair)
    else:
        spec = default_optimize_spec(net, pair if pair is not None else (0, 1))
    _check_pair(net, spec.pair)
    for p in spec.free:
        if max(p.links, default=-1) >= len(net.links):
            raise InputError(f"free parameter {p.name} refers to a missing link")
    spec = with_overrides(spec, restarts=args.restarts, seed=args.seed)
    res = maximize_concurrence(spec, resolve_threads(args.threads))
    out = res.to_dict()
    out["pair"] = [spec.pair[0] + 1, spec.pair[1] + 1]
    out["seed"] = spec.seed
    out["restarts"] = spec.restarts
    return out, net


def cmd_validate_full(args) -> tuple[dict, Network, int]:
    net = load_scenario(args.config)
    if net.mode != "physical":
        raise InputError("validate-full needs a physical-mode scenario")
    pair = parse_pair(args.pair) or (0, 1)
    _check_pair(net, pair)
    report = validate_elimination(net, n_max=args.n_max, pair=pair, threshold=args.threshold)
    code = EXIT_OK if report["deviation"] < args.threshold else EXIT_THRESHOLD
    return report, net, code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="resonator-net", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="scenario JSON file or catalog name")
        sp.add_argument("--out", required=True)
        sp.add_argument("--pair", help="1-based site pair, e.g. 2,3")
        sp.add_argument("--threads", type=int, default=None, help=f"workers, 0 = all CPUs (env {THREADS_ENV})")

    sp = sub.add_parser("steady", help="steady state and its observables")
    common(sp)

    sp = sub.add_parser("sweep", help="grid data as CSV")
    sp.add_argument("kind", choices=["phase", "ratio", "z"])
    common(sp, config_required=False)
    sp.add_argument("--grid", type=int, default=51)
    sp.add_argument("--links", default="1,3", help="the two driven links (1-based) for phase/ratio")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=16)
    sp.add_argument("--z-min", type=float, default=1.0)
    sp.add_argument("--z-max", type=float, default=6.0)

    sp = sub.add_parser("optimize", help="maximise a pair concurrence")
    common(sp)
    sp.add_argument("--spec", help="optimisation spec JSON")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=None)

    sp = sub.add_parser("validate-full", help="compare full and eliminated models")
    common(sp)
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--threshold", type=float, default=0.10)
    return p


def _manifest_args(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "verbose")}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    code = EXIT_OK
    net = None
    try:
        if args.command == "steady":
            doc, net = cmd_steady(args)
            text = to_json(doc)
        elif args.command == "sweep":
            text, net = cmd_sweep(args)
        elif args.command == "optimize":
            doc, net = cmd_optimize(args)
            text = to_json(doc)
        else:
            doc, net, code = cmd_validate_full(args)
            text = to_json(doc)
    except (ScenarioError, InputError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SteadyStateError, NoConvergence, TruncationError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    atomic_write_text(args.out, text)
    seed = getattr(args, "seed", None)
    write_manifest(args.out, args.command, net, seed, time.perf_counter() - start,
                   extra={"arguments": _manifest_args(args)})
    if code == EXIT_THRESHOLD:
        print(f"validation failed: deviation {doc['deviation']:.3%} >= threshold {args.threshold:.1%}",
              file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
