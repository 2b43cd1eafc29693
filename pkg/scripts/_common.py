import argparse
import json
import os
import time

from resonator_net.records import atomic_write_text, sweep_to_csv, to_json, write_manifest


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--outdir", default="results")
    p.add_argument("--threads", type=int, default=1)
    return p


def save_csv(outdir, name, result, net, seed, t0, command):
    path = os.path.join(outdir, name)
    atomic_write_text(path, sweep_to_csv(result))
    write_manifest(path, command, net, seed, time.perf_counter() - t0)
    print(f"wrote {path}")


def save_json(outdir, name, doc, net, seed, t0, command):
    path = os.path.join(outdir, name)
    atomic_write_text(path, to_json(doc))
    write_manifest(path, command, net, seed, time.perf_counter() - t0)
    print(f"wrote {path}")
    print(json.dumps(doc, indent=2, default=str)[:2000])
