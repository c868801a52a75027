"""List the x whose x^3 - 1 (or x^3 + 1) already has the p^2 a^3 shape.

These are the only candidates the theorem scan ever has to factor in full;
printing them is a quick sanity view of how thin the search space is.
"""

import argparse
from dataclasses import dataclass

from ptl.theorem import classify_p2a3


@dataclass
class Config:
    bound: int = 20_000


def main(cfg: Config):
    for x in range(-cfg.bound, cfg.bound + 1):
        if x in (-1, 0, 1):
            continue
        for label, m in (("x^3-1", x**3 - 1), ("x^3+1", x**3 + 1)):
            w = classify_p2a3(m)
            if w is not None:
                print(f"x={x:>7}  {label} = {w.primes[0]}^2 * ({w.a})^3")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bound", type=int, default=Config.bound)
    main(Config(**vars(ap.parse_args())))
