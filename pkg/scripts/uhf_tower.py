"""Walk the stages of a UHF tower: sizes, attainable means and finite-stage certificates."""

import argparse
from fractions import Fraction

from boolinv import config
from boolinv.colimit import finite_type_certificate, parse_spec, uhf_mv_probe
from boolinv.errors import ResourceLimitError


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spec", help="supernatural literal such as '2^inf * 3^2' or 'seq: 2,4,8'")
    ap.add_argument("--probe", nargs="*", default=["1/2", "1/3", "3/8", "5/36"])
    ap.add_argument("--horizon", type=int, default=None)
    args = ap.parse_args()
    limits = {} if args.horizon is None else {"horizon": args.horizon}
    with config.override(**limits):
        spec = parse_spec(args.spec)
        top = spec.max_level()
        print(f"{spec}: levels 1..{top} within the horizon")
        print("  sizes:", ", ".join(str(spec.size(k)) for k in range(1, top + 1)))
        for text in args.probe:
            x = Fraction(text)
            v = uhf_mv_probe(spec, x.numerator, x.denominator)
            print(f"  mean {x}: {'unknown' if v is None else v}")
        k = top
        while k:
            try:
                print(finite_type_certificate(spec, k).summary())
                break
            except ResourceLimitError:
                k -= 1


if __name__ == "__main__":
    main()
