"""Run the desk-scale scans and write one JSON report per scan.

    python scripts/desk_scans.py --outdir results
    python scripts/desk_scans.py --theorem-bound 100000 --jobs 4
"""

import argparse
import json
import os
import time
from dataclasses import asdict, dataclass

from ptl.cli import result_digest, write_atomic
from ptl.powerful import consecutive_runs
from ptl.theorem import corollary_scan, stderr_progress, theorem_scan
from ptl.verify import run_all


@dataclass
class ScanConfig:
    theorem_bound: int = 1_000_000
    corollary_bound: int = 100_000
    powerful_limit: int = 1_000_000
    lemma_bound: int = 100_000
    jobs: int = os.cpu_count() or 1
    outdir: str = "results"


def _dump(cfg, name, result, seconds):
    path = os.path.join(cfg.outdir, f"{name}.json")
    doc = {"config": asdict(cfg), "seconds": round(seconds, 2),
           "result_digest": result_digest(result), "result": result}
    write_atomic(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(f"{name:<10} {seconds:8.1f}s  digest {doc['result_digest'][:16]}  -> {path}")


def main(cfg: ScanConfig):
    os.makedirs(cfg.outdir, exist_ok=True)

    t = time.perf_counter()
    checks = run_all(cfg.lemma_bound)
    _dump(cfg, "lemmas", [c.to_dict() for c in checks], time.perf_counter() - t)

    t = time.perf_counter()
    runs = {"pairs": consecutive_runs(cfg.powerful_limit, 2), "triples": consecutive_runs(cfg.powerful_limit, 3)}
    _dump(cfg, "powerful", runs, time.perf_counter() - t)

    t = time.perf_counter()
    rep = theorem_scan(-cfg.theorem_bound, cfg.theorem_bound, jobs=cfg.jobs, progress=stderr_progress())
    _dump(cfg, "theorem", rep.to_dict(), time.perf_counter() - t)

    t = time.perf_counter()
    rep = corollary_scan(1, cfg.corollary_bound, jobs=cfg.jobs, progress=stderr_progress())
    _dump(cfg, "corollary", rep.to_dict(), time.perf_counter() - t)


if __name__ == "__main__":
    defaults = ScanConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(defaults).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    main(ScanConfig(**vars(ap.parse_args())))
