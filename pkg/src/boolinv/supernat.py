"""Supernatural numbers, division sequences and rational MV-chains.

Infinite exponents are ``math.inf``.  Only supernaturals with finitely many
primes are values of :class:`Supernatural`; anything else has to come in as a
generator-backed :class:`DivisionSequence`, whose supernatural is then only
known up to the configured horizon.
"""

from __future__ import annotations

import dataclasses
import math
import re
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from sympy import factorint, isprime

from . import config
from .errors import DomainError, ParseError

INF = math.inf


@dataclasses.dataclass(frozen=True)
class Supernatural:
    exps: tuple = ()  # ((prime, exponent), ...) with primes increasing and exponents > 0

    def __post_init__(self):
        primes = [p for p, _ in self.exps]
        if primes != sorted(set(primes)):
            raise DomainError("primes must be strictly increasing")
        for p, e in self.exps:
            if not isprime(p):
                raise DomainError(f"{p} is not prime")
            if not (e == INF or (isinstance(e, int) and e > 0)):
                raise DomainError(f"exponent of {p} must be a positive integer or inf")

    @classmethod
    def of(cls, mapping: dict):
        return cls(tuple(sorted((int(p), e) for p, e in mapping.items() if e)))

    @classmethod
    def from_int(cls, n: int):
        if n < 1:
            raise DomainError("only positive integers are supernatural")
        return cls.of(factorint(n))

    @property
    def primes(self):
        return tuple(p for p, _ in self.exps)

    def exponent(self, p):
        return dict(self.exps).get(p, 0)

    def as_dict(self):
        return dict(self.exps)

    def is_finite(self):
        return all(e != INF for _, e in self.exps)

    def value(self):
        if not self.is_finite():
            raise DomainError(f"{self} is infinite")
        return math.prod(p**e for p, e in self.exps)

    def contains(self, k: int) -> bool:
        """Membership of the natural number ``k`` in the ideal of this supernatural (``k | n``)."""
        if k < 1:
            raise DomainError("ideal members are positive integers")
        return all(e <= self.exponent(p) for p, e in factorint(k).items())

    def __str__(self):
        if not self.exps:
            return "1"
        return " * ".join(f"{p}^{'inf' if e == INF else e}" for p, e in self.exps)


def sn_equals(a: Supernatural, b: Supernatural) -> bool:
    return a.exps == b.exps


def sn_divides(a: Supernatural, b: Supernatural) -> bool:
    return all(e <= b.exponent(p) for p, e in a.exps)


def sn_lcm(a: Supernatural, b: Supernatural) -> Supernatural:
    primes = set(a.primes) | set(b.primes)
    return Supernatural.of({p: max(a.exponent(p), b.exponent(p)) for p in primes})


def sn_gcd(a: Supernatural, b: Supernatural) -> Supernatural:
    primes = set(a.primes) & set(b.primes)
    return Supernatural.of({p: min(a.exponent(p), b.exponent(p)) for p in primes})


_TOKEN = re.compile(r"\d+|inf|\^|\*")


def parse_supernatural(text: str) -> Supernatural:
    """Parse ``2^inf * 3^2 * 7`` (a bare prime means exponent 1; ``1`` is the empty product)."""
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        tok = m.group(0)
        kind = "num" if tok.isdigit() else tok
        toks.append((kind, tok, pos + 1))
        pos = m.end()
    end = len(text) + 1
    if not toks:
        raise ParseError("empty supernatural literal", 1, 1)
    if len(toks) == 1 and toks[0][:2] == ("num", "1"):
        return Supernatural()
    exps = []
    i = 0
    while True:
        if i >= len(toks) or toks[i][0] != "num":
            raise ParseError("expected a prime", 1, toks[i][2] if i < len(toks) else end)
        p, col = int(toks[i][1]), toks[i][2]
        if not isprime(p):
            raise ParseError(f"{p} is not prime", 1, col)
        if exps and p <= exps[-1][0]:
            raise ParseError("primes must be strictly increasing", 1, col)
        i += 1
        e = 1
        if i < len(toks) and toks[i][0] == "^":
            i += 1
            if i >= len(toks):
                raise ParseError("expected an exponent", 1, end)
            kind, val, ecol = toks[i]
            if kind == "inf":
                e = INF
            elif kind == "num" and int(val) > 0:
                e = int(val)
            else:
                raise ParseError("exponent must be 'inf' or a positive integer", 1, ecol)
            i += 1
        exps.append((p, e))
        if i == len(toks):
            break
        if toks[i][0] != "*":
            raise ParseError("expected '*'", 1, toks[i][2])
        i += 1
    return Supernatural(tuple(exps))


# ---------------------------------------------------------------------------
# division sequences


class DivisionSequence:
    """A chain ``s_1 | s_2 | ...`` of proper divisions.

    ``kind`` is one of ``"supernatural"`` (canonical generator of a known
    supernatural), ``"generator"`` (callback, optionally with a declared
    supernatural) or ``"prefix"`` (finitely many listed terms only).
    ``length`` is None for unbounded sequences.
    """

    def __init__(self, fn: Callable[[int], int], kind: str, supernatural: Supernatural | None = None, length=None, name=""):
        self._fn = fn
        self.kind = kind
        self.declared = supernatural
        self.length = length
        self.name = name or kind

    def __repr__(self):
        head = ", ".join(map(str, self.prefix(min(4, self.length or 4))))
        return f"<DivisionSequence {self.name}: {head}{'' if self.length else ', ...'}>"

    def term(self, k: int) -> int:
        """The k-th term (1-based)."""
        if k < 1 or (self.length is not None and k > self.length):
            raise DomainError(f"term {k} is outside the sequence")
        return self._fn(k)

    def prefix(self, k: int):
        return tuple(self.term(i) for i in range(1, k + 1))

    def terms_upto(self, bound: int):
        """All terms not exceeding ``bound``."""
        out = []
        k = 1
        while self.length is None or k <= self.length:
            t = self.term(k)
            if t > bound:
                break
            out.append(t)
            k += 1
        return out

    @property
    def exact(self):
        return self.declared is not None


def _canonical_term(n: Supernatural, k: int) -> int:
    return math.prod(p ** min(k, e) for p, e in n.exps[:k])


def from_supernatural(n: Supernatural) -> DivisionSequence:
    """Canonical generator: ``s_k`` is the product over the first k listed primes of ``p^min(k, e_p)``."""
    if not n.exps:
        raise DomainError("the empty supernatural has no division sequence")
    length = None
    if n.is_finite():
        target = n.value()
        length = 1
        while _canonical_term(n, length) != target:
            length += 1
    return DivisionSequence(lambda k: _canonical_term(n, k), "supernatural", n, length, name=str(n))


def from_prefix(terms: Sequence[int]) -> DivisionSequence:
    terms = tuple(int(t) for t in terms)
    if not terms:
        raise DomainError("empty prefix")
    for a, b in zip(terms, terms[1:]):
        if a < 1 or b % a or a == b:
            raise DomainError(f"{a} does not properly divide {b}")
    if terms[0] < 1:
        raise DomainError("terms must be positive")
    return DivisionSequence(lambda k: terms[k - 1], "prefix", None, len(terms), name="seq: " + ",".join(map(str, terms)))


def from_generator(fn: Callable[[int], int], supernatural: Supernatural | None = None, name="generator") -> DivisionSequence:
    return DivisionSequence(fn, "generator", supernatural, None, name=name)


def power(b: int) -> DivisionSequence:
    """``b, b^2, b^3, ...``; its supernatural has every prime of ``b`` to the power inf."""
    if b < 2:
        raise DomainError("base must be at least 2")
    n = Supernatural.of({p: INF for p in factorint(b)})
    return from_generator(lambda k: b**k, n, name=f"powers of {b}")


class SupernaturalBound(NamedTuple):
    value: Supernatural
    exact: bool


def supernatural_of(sigma: DivisionSequence, horizon: int | None = None) -> SupernaturalBound:
    """Supernatural number of the ideal generated by the sequence.

    Exact when the sequence carries one; otherwise the valuations of the
    largest term within ``horizon`` (or of the last prefix term), flagged as a
    lower bound.
    """
    if sigma.declared is not None:
        return SupernaturalBound(sigma.declared, True)
    bound = config.current().horizon if horizon is None else horizon
    terms = sigma.terms_upto(bound) if sigma.kind != "prefix" else list(sigma.prefix(sigma.length))
    if not terms:
        return SupernaturalBound(Supernatural(), False)
    return SupernaturalBound(Supernatural.from_int(terms[-1]), False)


def interleaved(sigma: DivisionSequence, tau: DivisionSequence):
    """True/False when decidable, None when a prefix or undeclared generator leaves it open."""
    a, b = supernatural_of(sigma), supernatural_of(tau)
    if a.exact and b.exact:
        return sn_equals(a.value, b.value)
    # a known term of one side that the other side's supernatural cannot absorb settles it
    for known, other in ((a, b), (b, a)):
        if other.exact and not sn_divides(known.value, other.value):
            return False
    return None


def l_contains(n: Supernatural, p: int, q: int) -> bool:
    """Whether ``p/q`` lies in the rational MV-chain of ``n``."""
    if q < 1 or p < 0 or p > q:
        raise DomainError(f"{p}/{q} is not in [0, 1]")
    if math.gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not reduced")
    return all(v <= n.exponent(r) for r, v in factorint(q).items())


def l_contains_fraction(n: Supernatural, x: Fraction) -> bool:
    return l_contains(n, x.numerator, x.denominator)
