"""Put random morphisms R_m -> R_{sm} into standard form and report the block structure."""

import argparse
import random

from boolinv.finmon import Morphism
from boolinv.rook import RookAlgebra, StandardMorphism, inner_automorphism, normal_form, standard_map


def random_morphism(m, s, rng):
    p, q = list(range(1, m + 1)), list(range(1, m * s + 1))
    rng.shuffle(p)
    rng.shuffle(q)
    theta = inner_automorphism(m * s, q).compose(standard_map(StandardMorphism(m, s)).compose(inner_automorphism(m, p)))
    return theta, p, q


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("m", type=int)
    ap.add_argument("s", type=int)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    Rm = RookAlgebra(args.m)
    for t in range(args.trials):
        theta, p, q = random_morphism(args.m, args.s, rng)
        nf = normal_form(theta, Morphism.identity(Rm))
        blocks = [[next(j + 1 for j, c in enumerate(f.cols) if c is not None) for f in b] for b in nf.blocks]
        print(f"trial {t}: source perm {p}, target perm {q}")
        print(f"  sigma_{nf.sigma.s}: R_{nf.sigma.m} -> R_{nf.sigma.n}; blocks of atoms {blocks}")


if __name__ == "__main__":
    main()
