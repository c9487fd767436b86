"""Command-line front end.

Exit codes: 0 success, 1 other errors, 2 parse errors, 3 validation
failures, 4 resource limits.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from fractions import Fraction

from . import colimit, config
from .errors import BIMError, ParseError, ResourceLimitError, ValidationError
from .finmon import FinBIM, direct_product, format_bim, parse_bim
from .groups import GroupTable, parse_group
from .rook import rook_monoid, symmetric_inverse_monoid
from .structure import StructureReport, decompose, reconstruct
from .typemv import enumerate_invariant_means, lukasiewicz, mv_algebra, mv_is_simple, mv_iso, format_mv

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3, 4


# ---------------------------------------------------------------------------
# monoid expressions


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        return ParseError(msg, 1, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self):
        self.skip()
        m = re.compile(r"[A-Za-z_]+").match(self.text, self.pos)
        if not m:
            raise self.error("expected a name")
        self.pos = m.end()
        return m.group(0), m.start()

    def number(self):
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            raise self.error("expected a positive integer")
        self.pos = m.end()
        return int(m.group(0))

    def path(self):
        self.skip()
        if self.peek() in "\"'":
            quote = self.text[self.pos]
            end = self.text.find(quote, self.pos + 1)
            if end < 0:
                raise self.error("unterminated quoted path")
            out = self.text[self.pos + 1 : end]
            self.pos = end + 1
            return out
        end = self.text.find(")", self.pos)
        if end < 0:
            raise self.error("expected ')' after path")
        out = self.text[self.pos : end].strip()
        self.pos = end
        if not out:
            raise self.error("empty path")
        return out

    def group(self):
        name, at = self.word()
        if name == "trivial":
            return ("trivial",)
        if name == "cyclic":
            self.expect("(")
            k = self.number()
            self.expect(")")
            return ("cyclic", k)
        if name == "table":
            self.expect("(")
            p = self.path()
            self.expect(")")
            return ("gtable", p)
        raise self.error(f"unknown group {name!r}", at)

    def expr(self):
        name, at = self.word()
        self.expect("(")
        if name == "symmetric":
            node = ("symmetric", self.number())
        elif name == "rook":
            n = self.number()
            self.expect(",")
            node = ("rook", n, self.group())
        elif name == "product":
            parts = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.expr())
            node = ("product", *parts)
        elif name == "table":
            node = ("table", self.path())
        else:
            raise self.error(f"unknown monoid constructor {name!r}", at)
        self.expect(")")
        return node


def parse_expr(text: str):
    """Parse a monoid expression into a nested tuple."""
    p = _Parser(text)
    node = p.expr()
    if p.peek():
        raise p.error("trailing input")
    return node


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _eval_group(node) -> GroupTable:
    if node[0] == "trivial":
        return GroupTable.trivial()
    if node[0] == "cyclic":
        return GroupTable.cyclic(node[1])
    return parse_group(_read(node[1]), name=node[1])


def evaluate(node) -> FinBIM:
    kind = node[0]
    if kind == "symmetric":
        return symmetric_inverse_monoid(node[1])
    if kind == "rook":
        return rook_monoid(node[1], _eval_group(node[2]))
    if kind == "product":
        out = evaluate(node[1])
        for part in node[2:]:
            out = direct_product(out, evaluate(part))
        return out
    return parse_bim(_read(node[1]), name=node[1])


def load(text: str) -> FinBIM:
    return evaluate(parse_expr(text))


# ---------------------------------------------------------------------------
# commands


def _emit(args, text, doc):
    if args.json:
        print(json.dumps(doc, sort_keys=True, default=str))
    else:
        print(text)


def cmd_analyze(args):
    S = load(args.spec)
    report = StructureReport.of(S)
    comps = decompose(S)
    lines = [report.to_text()]
    for c in comps:
        lines.append(f"component size={c.size} isotropy_order={c.group.order} objects={list(c.objects)}")
    doc = report.as_dict()
    doc["decompose"] = [{"size": c.size, "isotropy_order": c.group.order, "objects": list(c.objects)} for c in comps]
    _emit(args, "\n".join(lines), doc)


def cmd_mv(args):
    S = load(args.spec)
    L = mv_algebra(S)
    text = format_mv(L)
    ident = None
    if mv_is_simple(L) and mv_iso(L, lukasiewicz(len(L))) is not None:
        ident = f"L_{len(L)}"
    if ident:
        text += f"simple: isomorphic to {ident}"
    else:
        text += "simple: false" if not mv_is_simple(L) else "simple: true"
    doc = {"size": len(L), "oplus": L.oplus, "neg": L.neg, "zero": L.zero, "one": L.one, "lukasiewicz": ident}
    _emit(args, text.rstrip("\n"), doc)


def cmd_mean(args):
    S = load(args.spec)
    means = enumerate_invariant_means(S)
    head = "unique invariant mean" if len(means) == 1 else f"family with {len(means)} extreme points"
    lines = [head]
    for i, nu in enumerate(means):
        lines.append(f"mean {i}: " + " ".join(f"{e}={v}" for e, v in nu.values))
    doc = {"count": len(means), "means": [{str(e): str(v) for e, v in nu.values} for nu in means]}
    _emit(args, "\n".join(lines), doc)


def cmd_reconstruct(args):
    S = load(args.spec)
    reconstruct(S)
    _emit(args, f"isomorphism verified over {S.n} elements", {"verified": True, "elements": S.n})


def cmd_table(args):
    S = load(args.spec)
    sys.stdout.write(format_bim(S))


def _verdict(v):
    return "unknown" if v is None else str(v).lower()


def cmd_uhf(args):
    if args.sub == "iso":
        a, b = colimit.parse_spec(args.a), colimit.parse_spec(args.b)
        v = colimit.uhf_isomorphic(a, b)
        _emit(args, _verdict(v), {"isomorphic": _verdict(v)})
    elif args.sub == "probe":
        spec = colimit.parse_spec(args.n)
        m = re.fullmatch(r"\s*(\d+)\s*/\s*(\d+)\s*|\s*(\d+)\s*", args.fraction)
        if not m:
            raise ParseError(f"bad fraction {args.fraction!r}", 1, 1)
        p, q = (int(m.group(1)), int(m.group(2))) if m.group(1) else (int(m.group(3)), 1)
        if q == 0:
            raise ParseError("zero denominator", 1, args.fraction.index("/") + 2)
        x = Fraction(p, q)
        v = colimit.uhf_mv_probe(spec, x.numerator, x.denominator)
        _emit(args, _verdict(v), {"member": _verdict(v), "fraction": str(x)})
    else:
        spec = colimit.parse_spec(args.n)
        cert = colimit.finite_type_certificate(spec, args.k)
        doc = {"ok": cert.ok, "members": [dataclasses.asdict(m) for m in cert.members]}
        _emit(args, cert.summary(), doc)


def build_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--max-elements", type=int, help="largest monoid to materialize")
    common.add_argument("--horizon", type=int, help="largest stage size of a UHF tower")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="boolinv", parents=[common], description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
        ("analyze", cmd_analyze, "structure report and decomposition"),
        ("mv", cmd_mv, "MV-algebra of a Foulis monoid"),
        ("mean", cmd_mean, "invariant means"),
        ("reconstruct", cmd_reconstruct, "rebuild from the atom groupoid"),
        ("table", cmd_table, "print the multiplication table"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("spec", help="e.g. 'symmetric(3)', 'rook(2, cyclic(2))', 'product(symmetric(2), symmetric(1))'")
        p.set_defaults(func=fn)
    u = sub.add_parser("uhf", parents=[common], help="UHF towers")
    usub = u.add_subparsers(dest="sub", required=True)
    p = usub.add_parser("iso", parents=[common])
    p.add_argument("a")
    p.add_argument("b")
    p = usub.add_parser("probe", parents=[common])
    p.add_argument("n")
    p.add_argument("fraction")
    p = usub.add_parser("certify", parents=[common])
    p.add_argument("n")
    p.add_argument("k", type=int)
    u.set_defaults(func=cmd_uhf)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    base = config.Config.from_env()
    limits = {
        "max_elements": getattr(args, "max_elements", base.max_elements),
        "horizon": getattr(args, "horizon", base.horizon),
    }
    args.json = getattr(args, "json", False)
    try:
        with config.override(**limits):
            args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation failed: {exc.report}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (BIMError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
