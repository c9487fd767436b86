"""Structure reports and MV-layers for a small corpus of finite Boolean inverse monoids."""

import argparse

from boolinv.finmon import direct_product
from boolinv.groups import GroupTable
from boolinv.rook import rook_monoid, symmetric_inverse_monoid
from boolinv.structure import StructureReport
from boolinv.typemv import enumerate_invariant_means, is_foulis, lukasiewicz, mv_algebra, mv_iso


def corpus():
    I = symmetric_inverse_monoid
    z2 = GroupTable.cyclic(2)
    return [
        I(1),
        I(2),
        I(3),
        I(4),
        direct_product(I(2), I(2)),
        direct_product(I(2), I(1)),
        rook_monoid(2, z2),
        rook_monoid(3, z2),
        rook_monoid(1, z2),
        direct_product(I(1), I(1)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    for S in corpus():
        rep = StructureReport.of(S)
        if args.json:
            print(rep.to_json())
            continue
        flags = [k for k in ("fundamental", "basic", "clifford", "zero_simplifying", "j_linear") if getattr(rep, k)]
        layer = ""
        if is_foulis(S):
            L = mv_algebra(S)
            chain = mv_iso(L, lukasiewicz(len(L))) is not None
            layer = f"L(S) has {len(L)} elements" + (" (a chain)" if chain else "")
        means = len(enumerate_invariant_means(S))
        print(f"{S.name:>16}  n={rep.elements:<4} atoms={rep.atoms:<3} means={means}  {' '.join(flags)}  {layer}")
        bad = rep.violated_implications()
        if bad:
            print("  violated:", ", ".join(bad))


if __name__ == "__main__":
    main()
