"""UHF towers: rook-matrix stages of a division sequence under block-diagonal embeddings.

Stage ``k`` is ``R_{s_k}`` and the embedding from stage ``k`` to stage ``l``
repeats a matrix ``s_l / s_k`` times down the diagonal.  Elements of the
colimit are stored at the least level that holds them.
"""

from __future__ import annotations

import dataclasses
import math
import random
from fractions import Fraction

import numpy as np

from . import config
from .errors import ConsistencyError, DomainError, ParseError, ResourceLimitError
from .finmon import INDEX, FinBIM, Morphism
from .rook import RookAlgebra, RookMatrix, StandardMorphism, rook_count_exceeds, standard_map
from .structure import is_factorizable, is_fundamental, is_zero_simplifying, principal_ideal_poset
from .supernat import (
    DivisionSequence,
    Supernatural,
    from_prefix,
    from_supernatural,
    interleaved,
    l_contains,
    parse_supernatural,
    supernatural_of,
)


# sanity bound on stage searches that must succeed
_PROBE_LEVELS = 100_000


@dataclasses.dataclass(frozen=True, eq=False)
class UHFSpec:
    sequence: DivisionSequence
    label: str = ""

    @classmethod
    def of(cls, n: Supernatural):
        if n.is_finite():
            raise DomainError(f"{n} is finite; UHF towers need an infinite supernatural")
        return cls(from_supernatural(n), str(n))

    @classmethod
    def from_sequence(cls, seq: DivisionSequence):
        return cls(seq, seq.name)

    @property
    def supernatural(self):
        return supernatural_of(self.sequence)

    def size(self, k: int) -> int:
        return self.sequence.term(k)

    def max_level(self) -> int:
        """Largest level whose stage size is within the configured horizon."""
        horizon = config.current().horizon
        k = 0
        while (self.sequence.length is None or k < self.sequence.length) and self.size(k + 1) <= horizon:
            k += 1
        return k

    def check_level(self, k: int):
        if k < 1:
            raise DomainError("levels start at 1")
        if self.sequence.length is not None and k > self.sequence.length:
            raise DomainError(f"level {k} is beyond the listed prefix")
        if self.size(k) > config.current().horizon:
            raise ResourceLimitError(f"stage {k} has size {self.size(k)} > horizon {config.current().horizon}")

    def __str__(self):
        return self.label


def parse_spec(text: str) -> UHFSpec:
    """A supernatural literal, or ``seq: 2,4,8`` for an explicit prefix."""
    body = text.strip()
    if body.startswith("seq:"):
        items = body[4:].split(",")
        terms = []
        col = text.index("seq:") + 5
        for item in items:
            try:
                terms.append(int(item))
            except ValueError:
                raise ParseError(f"bad sequence term {item.strip()!r}", 1, col) from None
            col += len(item) + 1
        try:
            return UHFSpec.from_sequence(from_prefix(terms))
        except DomainError as exc:
            raise ParseError(str(exc), 1, 1) from None
    n = parse_supernatural(text)
    try:
        return UHFSpec.of(n)
    except DomainError as exc:
        raise ParseError(str(exc), 1, 1) from None


def stage(spec: UHFSpec, k: int) -> RookAlgebra:
    spec.check_level(k)
    return RookAlgebra(spec.size(k))


def embed(spec: UHFSpec, k: int, l: int) -> Morphism:
    if k > l:
        raise DomainError(f"cannot embed level {k} into lower level {l}")
    spec.check_level(k)
    spec.check_level(l)
    m, n = spec.size(k), spec.size(l)
    return standard_map(StandardMorphism(m, n // m))


# ---------------------------------------------------------------------------
# elements


@dataclasses.dataclass(frozen=True)
class ColimitElement:
    spec: UHFSpec
    level: int
    value: RookMatrix

    def __eq__(self, other):
        return isinstance(other, ColimitElement) and eq(self, other)

    def __hash__(self):
        a = normalize(self)
        return hash((id(a.spec), a.level, a.value))


def _block_preimage(value: RookMatrix, m: int):
    """``A`` with ``value = A ⊕ … ⊕ A`` for blocks of size ``m``, or None."""
    if value.n % m:
        return None
    cols = value.cols[:m]
    if any(c is not None and c[0] >= m for c in cols):
        return None
    A = RookMatrix(m, cols)
    return A if A.block_sum(value.n // m) == value else None


def normalize(a: ColimitElement) -> ColimitElement:
    """Move ``a`` to the least level whose stage contains a preimage."""
    for j in range(1, a.level):
        A = _block_preimage(a.value, a.spec.size(j))
        if A is not None:
            return ColimitElement(a.spec, j, A)
    return a


def element(spec: UHFSpec, level: int, value: RookMatrix) -> ColimitElement:
    spec.check_level(level)
    if value.n != spec.size(level):
        raise DomainError(f"matrix size {value.n} does not match stage size {spec.size(level)}")
    return normalize(ColimitElement(spec, level, value))


def _same_spec(a, b):
    if a.spec is not b.spec:
        raise DomainError("elements come from different towers")


def raise_to(a: ColimitElement, level: int) -> RookMatrix:
    return embed(a.spec, a.level, level)(a.value)


def lift(a: ColimitElement, b: ColimitElement):
    _same_spec(a, b)
    level = max(a.level, b.level)
    return ColimitElement(a.spec, level, raise_to(a, level)), ColimitElement(b.spec, level, raise_to(b, level))


def _binary(op):
    def run(a: ColimitElement, b: ColimitElement) -> ColimitElement:
        x, y = lift(a, b)
        R = RookAlgebra(x.value.n)
        return element(a.spec, x.level, getattr(R, op)(x.value, y.value))

    run.__name__ = op
    return run


multiply = _binary("mul")
join = _binary("join")
meet = _binary("meet")


def inverse(a: ColimitElement) -> ColimitElement:
    return element(a.spec, a.level, RookAlgebra(a.value.n).inverse(a.value))


def eq(a: ColimitElement, b: ColimitElement) -> bool:
    x, y = lift(a, b)
    return x.value == y.value


def uhf_isomorphic(a: UHFSpec, b: UHFSpec):
    """Isomorphism of the colimits; None when either supernatural is only a lower bound."""
    return interleaved(a.sequence, b.sequence)


def uhf_mean(a: ColimitElement) -> Fraction:
    R = RookAlgebra(a.value.n)
    if not R.is_idempotent(a.value):
        raise DomainError("the mean is defined on idempotents only")
    return Fraction(a.value.rank, a.value.n)


def uhf_mv_probe(spec: UHFSpec, p: int, q: int):
    """Does some stage hold an idempotent of mean ``p/q``?

    Such an idempotent exists at level ``k`` exactly when ``q | s_k``; the
    search only evaluates stage sizes.  With a known supernatural a negative
    answer comes from a prime of ``q`` whose exponent is too small, and
    otherwise the search runs past the horizon until it succeeds.  Without one
    the search stops at the horizon and an unsuccessful search gives None.
    """
    if q < 1 or not 0 <= p <= q or math.gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not a reduced fraction in [0, 1]")
    known = spec.supernatural
    if known.exact and not l_contains(known.value, p, q):
        return False
    seq = spec.sequence
    last = spec.max_level() if not known.exact else (seq.length or _PROBE_LEVELS)
    for k in range(1, last + 1):
        if spec.size(k) % q == 0:
            # the diagonal idempotent with the first s_k * p / q entries set has mean p/q
            return True
    if known.exact:
        raise ConsistencyError(f"no stage of {spec} within {last} levels is divisible by {q}")
    return None


def diagonal_idempotent(n: int, j: int) -> RookMatrix:
    return RookMatrix(n, tuple((i, 0) if i < j else None for i in range(n)))


def random_element(R: RookAlgebra, rng: random.Random, density=0.7) -> RookMatrix:
    rows = list(range(R.n))
    rng.shuffle(rows)
    return RookMatrix(R.n, tuple((rows[j], 0) if rng.random() < density else None for j in range(R.n)))


# ---------------------------------------------------------------------------
# finite-stage certificates


@dataclasses.dataclass(frozen=True)
class ChainMember:
    level: int
    size: int
    elements: int
    subalgebra: bool
    factorizable: bool
    fundamental: bool
    zero_simplifying: bool
    j_linear: bool
    divides_next: bool

    @property
    def ok(self):
        return all((self.subalgebra, self.factorizable, self.fundamental, self.zero_simplifying, self.j_linear, self.divides_next))


@dataclasses.dataclass(frozen=True)
class Certificate:
    spec: UHFSpec
    level: int
    members: tuple

    @property
    def ok(self):
        return all(m.ok for m in self.members)

    def summary(self):
        lines = [f"spec={self.spec} level={self.level} ok={str(self.ok).lower()}"]
        for m in self.members:
            lines.append(
                f"  stage {m.level}: size={m.size} elements={m.elements} subalgebra={m.subalgebra} "
                f"factorizable={m.factorizable} fundamental={m.fundamental} "
                f"zero_simplifying={m.zero_simplifying} j_linear={m.j_linear} divides_next={m.divides_next}".lower()
            )
        return "\n".join(lines)


def _closed_subalgebra(R: RookAlgebra, members: list) -> bool:
    T = set(members)
    if R.zero not in T or R.one not in T:
        return False
    for a in members:
        if R.inverse(a) not in T:
            return False
        if R.is_idempotent(a) and R.complement(a) not in T:
            return False
        for b in members:
            if R.mul(a, b) not in T or R.meet(a, b) not in T:
                return False
            if R.compatible(a, b) and R.join(a, b) not in T:
                return False
    return True


def _tabulate(R: RookAlgebra, members: list) -> FinBIM:
    index = {a: i for i, a in enumerate(members)}
    mult = np.array([[index[R.mul(a, b)] for b in members] for a in members], dtype=INDEX)
    inv = np.array([index[R.inverse(a)] for a in members], dtype=INDEX)
    return FinBIM(mult, inv, index[R.zero], index[R.one], labels=members, check=False)


def finite_type_certificate(spec: UHFSpec, k: int) -> Certificate:
    """Images of stages ``1..k`` inside stage ``k``, each checked to be a simple
    fundamental factorizable subalgebra with linearly ordered principal ideals."""
    spec.check_level(k)
    limit = config.current().max_elements
    if rook_count_exceeds(spec.size(k), limit):
        raise ResourceLimitError(f"stage {k} (R_{spec.size(k)}) has more than max_elements={limit} elements")
    R = stage(spec, k)
    out = []
    for j in range(1, k + 1):
        phi = embed(spec, j, k)
        members = sorted({phi(A) for A in stage(spec, j).elements()})
        M = _tabulate(R, members)
        poset = principal_ideal_poset(M)
        nxt = spec.size(j + 1) if j < k else None
        out.append(
            ChainMember(
                level=j,
                size=spec.size(j),
                elements=len(members),
                subalgebra=_closed_subalgebra(R, members),
                factorizable=is_factorizable(M),
                fundamental=is_fundamental(M),
                zero_simplifying=is_zero_simplifying(M),
                j_linear=poset.is_linear,
                divides_next=nxt is None or nxt % spec.size(j) == 0,
            )
        )
    return Certificate(spec, k, tuple(out))
