"""Run every reference chart through the analysis and print one row each.

    python3 demos/classify_catalog.py [--workers 4]
"""

import argparse

from lcsurf.analysis import analyze_chart
from lcsurf.fixtures import CATALOG, build
from lcsurf.invariants import FUNDAMENTAL_KEYS, STRUCTURE_KEYS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    print(f"{'chart':28s} {'branch':27s} {'ok':3s} {'phi_max':>9s} {'|psi| range':>21s} {'rank':>4s} {'identities':>10s}")
    for key in CATALOG:
        chart, exp = build(key)
        an = analyze_chart(chart, workers=args.workers)
        rep = an.classification
        ok = "yes" if rep.branch == exp.branch else "NO"
        if an.residuals is None:
            print(f"{key:28s} {rep.branch:27s} {ok:3s}   ({len(an.failures)} degenerate points)")
            continue
        worst = an.residuals.max_of(STRUCTURE_KEYS + FUNDAMENTAL_KEYS)
        psi = f"[{rep.psi_min:.3g}, {rep.psi_max:.3g}]"
        print(
            f"{key:28s} {rep.branch:27s} {ok:3s} {rep.phi_max:9.2e} {psi:>21s} "
            f"{rep.essential_rank:4d} {worst:10.1e}"
        )
        for w in rep.warnings:
            print(f"{'':28s}   note: {w}")


if __name__ == "__main__":
    main()
