"""Odd-word transport of Gaudin eigenvectors in a gl(4|4)-type window.

    python3 scripts/worked_example.py [--z 0,1,3,7,15,31] [--out report.json]
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from superdual.duality import worked_example_s5
from superdual.exact import pstr


@dataclass
class Config:
    z: list = field(default_factory=lambda: [0, 1, 3, 7, 15, 31])
    out: str | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--z", default="0,1,3,7,15,31")
    ap.add_argument("--out")
    a = ap.parse_args()
    cfg = Config([Fraction(v) for v in a.z.split(",")], a.out)
    t0 = time.perf_counter()
    rep = worked_example_s5(cfg.z, factors=len(cfg.z))
    dt = time.perf_counter() - t0
    s = rep["steps"]
    print(f"lie block {rep['mu0']}: dim {s['lie_block_dim']}, singular {s['lie_singular_dim']}")
    print(f"bar block {rep['mubar']}: dim {s['bar_block_dim']}, singular {s['bar_singular_dim']}")
    print(f"rank of the word image: {s['image_rank']}")
    for h in rep["hamiltonians"]:
        mp = [Fraction(c) for c in h["minimal_polynomial"]]
        degs = [len(f["factor"]) - 1 for f in h["factors"]]
        print(f"H{h['hamiltonian']}: minimal polynomial degree {len(mp) - 1}, "
              f"irreducible factor degrees {degs}, transported {sum(f['transported'] for f in h['factors'])}")
    print(f"H1 minimal polynomial: {pstr([Fraction(c) for c in rep['hamiltonians'][0]['minimal_polynomial']])}")
    print(("PASS" if rep["passed"] else "FAIL") + f" in {dt:.1f}s")
    for f in rep["failures"]:
        print("  ", f)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(rep, fh, sort_keys=True, indent=1)
    return 0 if rep["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
