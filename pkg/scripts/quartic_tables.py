"""Ordinary vs fully simple quadrangulation counts with one boundary, next to the census."""
import argparse

from fsmaps import census
from fsmaps.curve import Potential, build_curves, solve_disc_data
from fsmaps.extract import extract_fsmap_counts, extract_map_counts
from fsmaps.tr import TREngine


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=int, default=0)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--order", type=int, default=16)
    ap.add_argument("--cap", type=int, default=14, help="census edge cap; 0 skips the census")
    args = ap.parse_args()

    V = Potential.from_couplings({4: 1})
    o, x = build_curves(V, solve_disc_data(V, args.order))
    ordinary = extract_map_counts(o, args.g, (args.k,), TREngine(o))
    simple = extract_fsmap_counts(x, args.g, (args.k,), TREngine(x))
    print(f"g={args.g} boundary {args.k}: quadrangles, ordinary, fully simple, census (ord / fs)")
    for (V_, prof), n in sorted(ordinary.entries.items()):
        f = dict(prof).get(4, 0)
        fs = simple.get(prof)
        row = f"{f:3d} {str(n):>12} {str(fs):>12}"
        if args.cap and args.k + 4 * f <= args.cap:
            c = census.count_profile(args.g, (args.k,), {4: f}, cap=args.cap)
            row += f"   {c['ordinary']} / {c['fully_simple']}"
        print(row)


if __name__ == "__main__":
    main()
