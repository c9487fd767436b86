"""Rook matrices over a group with zero adjoined, and maps between them.

A rook matrix has at most one nonzero entry in each row and column, so it is
stored column-wise: ``cols[j]`` is ``None`` or a pair ``(i, g)`` meaning the
entry in row ``i``, column ``j`` is the group element ``g``.  Indices are
0-based internally; the public helpers that talk about "E_i" or permutations
of ``{1..n}`` are 1-based.

Multiplication follows the usual matrix rule with the sum replaced by the
(unique, possibly empty) nonzero term.  The star ``A*`` is the transpose with
entrywise group inverses.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from typing import Sequence

import numpy as np

from . import config
from .errors import ConsistencyError, DomainError, ParseError, PreconditionError, ResourceLimitError
from .finmon import INDEX, FinBIM, Morphism
from .groups import GroupTable

TRIVIAL = GroupTable.trivial()


@functools.total_ordering
@dataclasses.dataclass(frozen=True)
class RookMatrix:
    n: int
    cols: tuple

    def __post_init__(self):
        if len(self.cols) != self.n:
            raise DomainError("one column entry per column required")
        rows = [c[0] for c in self.cols if c is not None]
        if len(set(rows)) != len(rows) or any(not 0 <= r < self.n for r in rows):
            raise DomainError("rook condition violated: repeated or out-of-range row")

    # canonical order: by rank, then column entries
    def _key(self):
        return (self.rank, tuple((-1, -1) if c is None else c for c in self.cols))

    def __lt__(self, other):
        return self._key() < other._key()

    @property
    def rank(self):
        return sum(c is not None for c in self.cols)

    @classmethod
    def zero(cls, n):
        return cls(n, (None,) * n)

    @classmethod
    def identity(cls, n, G: GroupTable = TRIVIAL):
        return cls(n, tuple((j, G.id) for j in range(n)))

    @classmethod
    def unit(cls, n, i, j, g=0):
        """Single entry ``g`` at 1-based position (i, j)."""
        cols = [None] * n
        cols[j - 1] = (i - 1, g)
        return cls(n, tuple(cols))

    @classmethod
    def E(cls, n, i, G: GroupTable = TRIVIAL):
        """The atomic idempotent ``E_i`` (1-based)."""
        return cls.unit(n, i, i, G.id)

    @classmethod
    def from_partial_bijection(cls, n, f: dict, G: GroupTable = TRIVIAL):
        """Matrix with a 1 at (f(j), j) for every j in the domain (1-based points)."""
        cols = [None] * n
        for j, i in f.items():
            cols[j - 1] = (i - 1, G.id)
        return cls(n, tuple(cols))

    def to_partial_bijection(self):
        return {j + 1: c[0] + 1 for j, c in enumerate(self.cols) if c is not None}

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]):
        n = len(rows)
        cols = [None] * n
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DomainError("rook matrix must be square")
            for j, g in enumerate(row):
                if g is None:
                    continue
                if cols[j] is not None:
                    raise DomainError(f"rook condition violated in column {j + 1}")
                cols[j] = (i, g)
        return cls(n, tuple(cols))

    def dense(self):
        out = [[None] * self.n for _ in range(self.n)]
        for j, c in enumerate(self.cols):
            if c is not None:
                out[c[0]][j] = c[1]
        return out

    def __str__(self):
        return format_rook(self)

    def block_sum(self, copies: int) -> "RookMatrix":
        """``A ⊕ … ⊕ A`` with ``copies`` diagonal blocks."""
        n = self.n
        cols = []
        for b in range(copies):
            for c in self.cols:
                cols.append(None if c is None else (c[0] + b * n, c[1]))
        return RookMatrix(n * copies, tuple(cols))


def format_rook(A: RookMatrix) -> str:
    return "\n".join(" ".join("." if g is None else str(g) for g in row) for row in A.dense())


def parse_rook(text: str, G: GroupTable = TRIVIAL) -> RookMatrix:
    """Rows separated by newlines or ``;``; entries are ``.`` or a group index."""
    rows = []
    line = 1
    for chunk in text.replace(";", "\n").split("\n"):
        if chunk.strip():
            row = []
            col = 0
            for tok in chunk.split():
                col = chunk.index(tok, col)
                if tok == ".":
                    row.append(None)
                else:
                    try:
                        g = int(tok)
                    except ValueError:
                        raise ParseError(f"bad rook entry {tok!r}", line, col + 1) from None
                    if not 0 <= g < G.order:
                        raise ParseError(f"group index {g} out of range", line, col + 1)
                    row.append(g)
                col += len(tok)
            rows.append(row)
        line += 1
    if not rows:
        raise ParseError("empty rook matrix", 1, 1)
    for i, row in enumerate(rows):
        if len(row) != len(rows):
            raise ParseError("rook matrix must be square", i + 1, 1)
    try:
        return RookMatrix.from_dense(rows)
    except DomainError as exc:
        raise ParseError(str(exc), 1, 1) from None


# ---------------------------------------------------------------------------
# arithmetic without a table


def rook_count(n, group_order=1):
    return sum(math.comb(n, k) ** 2 * math.factorial(k) * group_order**k for k in range(n + 1))


def rook_count_exceeds(n, limit, group_order=1) -> bool:
    """``rook_count(n, group_order) > limit`` without forming the full sum."""
    total = 0
    for k in range(n + 1):
        total += math.comb(n, k) ** 2 * math.factorial(k) * group_order**k
        if total > limit:
            return True
    return False


class RookAlgebra:
    """``R_n(G^0)`` with arithmetic done on matrices; no size bound."""

    def __init__(self, n, G: GroupTable = TRIVIAL):
        if n < 1:
            raise DomainError("rook size must be positive")
        self.n = n
        self.G = G
        self.zero = RookMatrix.zero(n)
        self.one = RookMatrix.identity(n, G)
        self.name = f"R_{n}" if G.order == 1 else f"R_{n}({G.name})"

    def __repr__(self):
        return f"<{self.name}>"

    def __eq__(self, other):
        return isinstance(other, RookAlgebra) and (self.n, self.G) == (other.n, other.G)

    def __hash__(self):
        return hash((self.n, self.G))

    def __len__(self):
        return rook_count(self.n, self.G.order)

    def _own(self, A):
        if not isinstance(A, RookMatrix) or A.n != self.n:
            raise DomainError(f"{A!r} is not an element of {self.name}")
        for c in A.cols:
            if c is not None and not 0 <= c[1] < self.G.order:
                raise DomainError(f"group index {c[1]} out of range")

    @functools.cached_property
    def _elements(self):
        n, G = self.n, self.G
        limit = config.current().max_elements
        if rook_count_exceeds(n, limit, G.order):
            raise ResourceLimitError(f"{self.name} has more than max_elements={limit} elements")
        out = []

        def rec(j, used, cols):
            if j == n:
                out.append(RookMatrix(n, tuple(cols)))
                return
            cols.append(None)
            rec(j + 1, used, cols)
            cols.pop()
            for i in range(n):
                if i in used:
                    continue
                used.add(i)
                for g in range(G.order):
                    cols.append((i, g))
                    rec(j + 1, used, cols)
                    cols.pop()
                used.discard(i)

        rec(0, set(), [])
        out.sort()
        return tuple(out)

    def elements(self):
        return self._elements

    def mul(self, A: RookMatrix, B: RookMatrix) -> RookMatrix:
        out = []
        for c in B.cols:
            if c is None or A.cols[c[0]] is None:
                out.append(None)
            else:
                i, g = A.cols[c[0]]
                out.append((i, self.G.mul(g, c[1])))
        return RookMatrix(self.n, tuple(out))

    def product(self, *xs):
        out = self.one
        for x in xs:
            out = self.mul(out, x)
        return out

    def inverse(self, A: RookMatrix) -> RookMatrix:
        out = [None] * self.n
        for j, c in enumerate(A.cols):
            if c is not None:
                out[c[0]] = (j, self.G.inverse(c[1]))
        return RookMatrix(self.n, tuple(out))

    star = inverse

    def dom(self, A):
        return RookMatrix(self.n, tuple(None if c is None else (j, self.G.id) for j, c in enumerate(A.cols)))

    def ran(self, A):
        out = [None] * self.n
        for c in A.cols:
            if c is not None:
                out[c[0]] = (c[0], self.G.id)
        return RookMatrix(self.n, tuple(out))

    def is_idempotent(self, A):
        return all(c is None or c == (j, self.G.id) for j, c in enumerate(A.cols))

    def leq(self, A, B):
        return all(a is None or a == b for a, b in zip(A.cols, B.cols))

    def compatible(self, A, B):
        return self.is_idempotent(self.mul(self.inverse(A), B)) and self.is_idempotent(self.mul(A, self.inverse(B)))

    def orthogonal(self, A, B):
        return self.mul(self.inverse(A), B) == self.zero and self.mul(A, self.inverse(B)) == self.zero

    def join(self, A, B):
        if not self.compatible(A, B):
            raise PreconditionError("incompatible rook matrices have no join")
        return RookMatrix(self.n, tuple(a if a is not None else b for a, b in zip(A.cols, B.cols)))

    def join_all(self, xs):
        out = self.zero
        for x in xs:
            out = self.join(out, x)
        return out

    def meet(self, A, B):
        return RookMatrix(self.n, tuple(a if a == b else None for a, b in zip(A.cols, B.cols)))

    def fixed_point(self, A):
        return self.meet(A, self.one)

    def complement(self, e, within=None):
        f = self.one if within is None else within
        if not self.leq(e, f):
            raise DomainError("complement requires e <= within")
        return RookMatrix(self.n, tuple(b if a is None else None for a, b in zip(e.cols, f.cols)))

    def atomic_idempotents(self):
        return [RookMatrix.E(self.n, i, self.G) for i in range(1, self.n + 1)]

    def atoms_below(self, A):
        out = []
        for j, c in enumerate(A.cols):
            if c is not None:
                cols = [None] * self.n
                cols[j] = c
                out.append(RookMatrix(self.n, tuple(cols)))
        return out

    def atom_between(self, e, f):
        """The unique atom with domain ``e`` and range ``f`` (trivial group only)."""
        if self.G.order != 1:
            raise PreconditionError("atoms between idempotents are unique only over the trivial group")
        (j,) = [k for k, c in enumerate(e.cols) if c is not None]
        (i,) = [k for k, c in enumerate(f.cols) if c is not None]
        return RookMatrix.unit(self.n, i + 1, j + 1, self.G.id)


# ---------------------------------------------------------------------------
# tabulated rook monoids


def rook_monoid(n: int, G: GroupTable = TRIVIAL) -> FinBIM:
    """All ``n x n`` rook matrices over ``G^0`` as a tabulated monoid.

    Elements are sorted by a column-wise key so that ``0`` is index 0 and the
    atomic idempotents appear as ``E_1 < ... < E_n``.  Labels are the
    :class:`RookMatrix` values.
    """
    if n < 1:
        raise DomainError("rook size must be positive")
    limit = config.current().max_elements
    if rook_count_exceeds(n, limit, G.order):
        raise ResourceLimitError(f"R_{n} over a group of order {G.order} has more than max_elements={limit} elements")
    N = rook_count(n, G.order)
    q = G.order
    base = n * q + 1
    mats = RookAlgebra(n, G).elements()

    F = np.full((N, n + 1), n, dtype=np.int64)  # column n is the "no entry" sentinel
    L = np.zeros((N, n + 1), dtype=np.int64)
    for a, A in enumerate(mats):
        for j, c in enumerate(A.cols):
            if c is not None:
                F[a, j], L[a, j] = c
    weights = base ** np.arange(n, dtype=np.int64)

    def keys(f, lab):
        code = np.where(f < n, f * q + lab + 1, 0)
        return (code * weights).sum(axis=-1)

    own = keys(F[:, :n], L[:, :n])
    order = np.argsort(own, kind="stable")
    F, L, own = F[order], L[order], own[order]
    mats = [mats[i] for i in order]

    Gm = np.array(G.mult, dtype=np.int64)
    mult = np.empty((N, N), dtype=INDEX)
    chunk = max(1, 2_000_000 // max(1, N * n))
    Fb, Lb = F[:, :n], L[:, :n]
    for start in range(0, N, chunk):
        Fa, La = F[start : start + chunk], L[start : start + chunk]
        sel = np.arange(len(Fa))[:, None, None]
        rows = Fa[sel, Fb[None, :, :]]
        labs = La[sel, Fb[None, :, :]]
        labs = Gm[labs, Lb[None, :, :]]
        k = keys(rows, labs)
        mult[start : start + chunk] = np.searchsorted(own, k)
    star = RookAlgebra(n, G)
    index = {A: i for i, A in enumerate(mats)}
    inv = np.array([index[star.inverse(A)] for A in mats], dtype=INDEX)
    name = f"I_{n}" if q == 1 else f"R_{n}({G.name})"
    return FinBIM(mult, inv, index[RookMatrix.zero(n)], index[RookMatrix.identity(n, G)], labels=mats, name=name, check=False)


def symmetric_inverse_monoid(n: int) -> FinBIM:
    return rook_monoid(n, TRIVIAL)


# ---------------------------------------------------------------------------
# standard maps and inner automorphisms


@dataclasses.dataclass(frozen=True)
class StandardMorphism:
    m: int
    s: int

    def __post_init__(self):
        if self.m < 1 or self.s < 1:
            raise DomainError("standard morphism needs m >= 1 and s >= 1")

    @property
    def n(self):
        return self.m * self.s

    def compose(self, inner: "StandardMorphism") -> "StandardMorphism":
        """``self ∘ inner``; requires ``inner.n == self.m``."""
        if inner.n != self.m:
            raise DomainError(f"cannot compose: {inner.n} != {self.m}")
        return StandardMorphism(inner.m, inner.s * self.s)


def standard_map(sm: StandardMorphism, n: int | None = None, G: GroupTable = TRIVIAL) -> Morphism:
    """``A ↦ A ⊕ … ⊕ A`` (``sm.s`` blocks) from ``R_m`` to ``R_n``."""
    if n is not None and n != sm.n:
        raise DomainError(f"target size {n} is not {sm.s}*{sm.m}")
    src, tgt = RookAlgebra(sm.m, G), RookAlgebra(sm.n, G)
    return Morphism(src, tgt, lambda A: A.block_sum(sm.s), name=f"sigma_{sm.s}")


def _check_perm(n, perm):
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise DomainError(f"{perm} is not a permutation of 1..{n}")
    return perm


def permute(A: RookMatrix, perm: Sequence[int]) -> RookMatrix:
    """Move entry (i, j) to (perm(i), perm(j)); ``perm`` is 1-based."""
    p = _check_perm(A.n, perm)
    cols = [None] * A.n
    for j, c in enumerate(A.cols):
        if c is not None:
            cols[p[j] - 1] = (p[c[0]] - 1, c[1])
    return RookMatrix(A.n, tuple(cols))


def inner_automorphism(n: int, perm: Sequence[int], G: GroupTable = TRIVIAL) -> Morphism:
    """Conjugation by the permutation matrix of ``perm``; sends ``E_i`` to ``E_perm(i)``."""
    p = _check_perm(n, perm)
    R = RookAlgebra(n, G)
    return Morphism(R, R, lambda A: permute(A, p), name=f"inner{p}")


def compose_perms(p, q):
    """``(p ∘ q)(i) = p(q(i))``, 1-based."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


# ---------------------------------------------------------------------------
# isomorphisms between finite simple monoids


def _require_simple_listing(S, listing, label):
    atoms = list(S.atomic_idempotents())
    if sorted(map(_sort_key, listing)) != sorted(map(_sort_key, atoms)) or len(set(listing)) != len(listing):
        raise DomainError(f"{label} listing must enumerate every atomic idempotent exactly once")
    table = {}
    for e in listing:
        for f in listing:
            try:
                table[e, f] = S.atom_between(e, f)
            except PreconditionError:
                raise DomainError(f"{label} is not finite simple: atoms {e} -> {f} are not unique") from None
    return table


def _sort_key(x):
    return (0, x) if isinstance(x, (int, np.integer)) else (1, x._key())


def iso_from_atom_listing(S, T, source_atoms: Sequence, target_atoms: Sequence, verify=False) -> Morphism:
    """The isomorphism of finite simple monoids sending the i-th listed atomic
    idempotent of ``S`` to the i-th listed one of ``T``."""
    if len(source_atoms) != len(target_atoms):
        raise DomainError("atom listings have different lengths")
    src = _require_simple_listing(S, list(source_atoms), "source")
    tgt = _require_simple_listing(T, list(target_atoms), "target")
    pairing = dict(zip(source_atoms, target_atoms))
    atom_image = {src[e, f]: tgt[pairing[e], pairing[f]] for (e, f) in src}

    @functools.lru_cache(maxsize=None)
    def fn(a):
        return T.join_all(atom_image[x] for x in S.atoms_below(a))

    phi = Morphism(S, T, fn, name="iso")
    if verify and not phi.is_morphism():
        raise ConsistencyError(f"atom listing map is not a morphism: {phi.violation()}")
    return phi


def inverse_table(phi: Morphism) -> Morphism:
    """Inverse of a bijective morphism, tabulated over the source."""
    table = {}
    for x in phi.source.elements():
        y = phi(x)
        if y in table:
            raise ConsistencyError("morphism is not injective")
        table[y] = x

    def back(y):
        try:
            return table[y]
        except KeyError:
            raise DomainError(f"{y!r} is not in the image") from None

    return Morphism(phi.target, phi.source, back, name=f"{phi.name}^-1")


@dataclasses.dataclass(frozen=True)
class NormalForm:
    beta: Morphism
    sigma: StandardMorphism
    blocks: tuple  # blocks[i] lists the atomic idempotents of T below theta(e_i), in transported order


def normal_form(theta: Morphism, alpha: Morphism) -> NormalForm:
    """Coordinatize ``T`` so that ``theta`` becomes a standard map.

    ``alpha: S -> R_m`` is an isomorphism.  Returns ``beta: T -> R_n`` and
    ``sigma_s`` with ``beta ∘ theta ∘ alpha^-1 = sigma_s`` on all of ``R_m``;
    the identity is checked before returning.
    """
    S, T = theta.source, theta.target
    Rm = alpha.target
    if alpha.source is not S and alpha.source != S:
        raise DomainError("alpha must start at the source of theta")
    if not isinstance(Rm, RookAlgebra) or Rm.G.order != 1:
        raise DomainError("alpha must land in a rook algebra over the trivial group")
    m = Rm.n
    alpha_inv = inverse_table(alpha)
    e = [alpha_inv(RookMatrix.E(m, i)) for i in range(1, m + 1)]
    x = [alpha_inv(RookMatrix.unit(m, i, 1)) for i in range(1, m + 1)]

    T_atoms = list(T.atomic_idempotents())
    n = len(T_atoms)
    if n % m:
        raise ConsistencyError(f"{m} does not divide {n}: theta cannot be a morphism")
    s = n // m
    images = [theta(ei) for ei in e]
    blocks = [[f for f in T_atoms if T.leq(f, img)] for img in images]
    if any(len(b) != s for b in blocks) or len({f for b in blocks for f in b}) != n:
        raise ConsistencyError("atomic idempotents of T do not split evenly below theta(e_i)")

    first = blocks[0]
    ordered = [first]
    for i in range(1, m):
        t = theta(x[i])
        t_inv = T.inverse(t)
        moved = [T.product(t, f, t_inv) for f in first]
        if sorted(map(_sort_key, moved)) != sorted(map(_sort_key, blocks[i])):
            raise ConsistencyError(f"theta(x_{i + 1}) does not carry block 1 onto block {i + 1}")
        ordered.append(moved)
    listing = [ordered[i][k] for k in range(s) for i in range(m)]
    position = {f: k for k, f in enumerate(listing)}
    Rn = RookAlgebra(n)

    @functools.lru_cache(maxsize=None)
    def beta_fn(t):
        t_inv = T.inverse(t)
        cols = [None] * n
        for k, f in enumerate(listing):
            g = T.product(t, f, t_inv)
            if g != T.zero:
                cols[k] = (position[g], 0)
        return RookMatrix(n, tuple(cols))

    beta = Morphism(T, Rn, beta_fn, name="beta")
    sigma = StandardMorphism(m, s)
    for A in Rm.elements():
        if beta(theta(alpha_inv(A))) != A.block_sum(s):
            raise ConsistencyError(f"beta∘theta∘alpha^-1 differs from sigma_{s} at\n{A}")
    return NormalForm(beta, sigma, tuple(tuple(b) for b in ordered))


def tabulated(S: FinBIM, R: RookAlgebra | None = None) -> Morphism:
    """For a rook monoid built by :func:`rook_monoid`, the label map ``S -> R_n``."""
    if R is None:
        R = RookAlgebra(S.label(S.one).n)
    return Morphism(S, R, S.label, name="labels")


def untabulated(S: FinBIM, R: RookAlgebra | None = None) -> Morphism:
    if R is None:
        R = RookAlgebra(S.label(S.one).n)
    return Morphism(R, S, S.index_of, name="index")
