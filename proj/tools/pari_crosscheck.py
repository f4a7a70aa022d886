#!/usr/bin/env python3
"""Compare qiw's logarithmic class groups with PARI's bnflog.

Picks split pairs (D, l) with |D| < 500 and l in {3, 5, 7, 11, 13}, runs
`qiw field --format json` on each and compares the wCl invariant factors with
bnflog(bnf, l)[1]. Exit status: 0 all agree, 1 mismatch, 77 PARI unavailable.
"""

import argparse
import json
import random
import subprocess
import sys


def fundamental(d):
    if d in (0, 1):
        return False
    def squarefree(n):
        n = abs(n)
        p = 2
        while p * p <= n:
            if n % (p * p) == 0:
                return False
            p += 1
        return True
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qiw", required=True, help="path to the qiw binary")
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--precision", type=int, default=8)
    args = ap.parse_args()

    try:
        from cypari import pari
    except ImportError:
        print("cypari not available", file=sys.stderr)
        return 77
    pari.allocatemem(10**9)

    pool = [(d, l) for d in range(-499, 500) if fundamental(d)
            for l in (3, 5, 7, 11, 13) if pari.kronecker(d, l) == 1]
    rng = random.Random(args.seed)
    # make sure at least one nontrivial group is in the sample
    pairs = [(253, 3)] + rng.sample(pool, args.count - 1)

    bad = 0
    for d, l in pairs:
        out = subprocess.run([args.qiw, "field", "-d", str(d), "-l", str(l),
                              "-m", str(args.precision), "--format", "json"],
                             capture_output=True, text=True)
        if out.returncode not in (0, 1, 2) or not out.stdout.strip():
            print(f"({d},{l}): qiw failed: {out.stderr.strip()}")
            bad += 1
            continue
        ours = sorted(int(x) for x in json.loads(out.stdout)["wcl"])
        bnf = pari(f"bnfinit(polredbest(x^2-({d})),1)")
        theirs = sorted(int(x) for x in pari.bnflog(bnf, l)[0])
        ok = ours == theirs
        bad += not ok
        print(f"({d},{l}): qiw {ours} pari {theirs} {'ok' if ok else 'MISMATCH'}")
    print(f"{len(pairs) - bad}/{len(pairs)} agree")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
