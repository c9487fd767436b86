"""Finite Boolean inverse monoids given by explicit tables.

Elements are the integers ``0 .. n-1``; a monoid is a multiplication table,
an inverse map and designated zero and identity.  Everything else (natural
order, compatibility, joins, meets, complements, Green's D and J) is derived
from the tables and cached on the instance.

Two kinds of "algebra" appear throughout the package and share a small
duck-typed surface: :class:`FinBIM` (tabulated, elements are ints) and
:class:`boolinv.rook.RookAlgebra` (matrix arithmetic, elements are
:class:`~boolinv.rook.RookMatrix` values).  Both provide ``elements``,
``mul``, ``inverse``, ``zero``, ``one``, ``is_idempotent``, ``leq``,
``compatible``, ``join``, ``meet``, ``complement``, ``dom``, ``ran``,
``atomic_idempotents`` and ``atom_between``.  :class:`Morphism` works over
either.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import config
from .errors import (
    ConsistencyError,
    DomainError,
    PreconditionError,
    ResourceLimitError,
    TableFormatError,
    ValidationError,
)

INDEX = np.int32


# ---------------------------------------------------------------------------
# validation


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    ok: bool
    axiom: str | None = None
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "pass"
        return f"fail: {self.axiom} witness={self.witness} {self.detail}".rstrip()


def _coerce_tables(mult, inv, zero, one):
    """Check shapes and ranges; return numpy tables or raise TableFormatError."""
    rows = [list(row) for row in mult]
    n = len(rows)
    if n == 0:
        raise TableFormatError("empty multiplication table", 1, 1)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise TableFormatError(
                f"row {i} has {len(row)} entries, expected {n}", i + 1, min(len(row), n) + 1
            )
    inv = list(inv)
    if len(inv) != n:
        raise TableFormatError(f"inverse map has {len(inv)} entries, expected {n}", n + 1, 1)
    M = np.array(rows, dtype=np.int64)
    I = np.array(inv, dtype=np.int64)
    bad = np.argwhere((M < 0) | (M >= n))
    if len(bad):
        i, j = bad[0]
        raise TableFormatError(f"entry {M[i, j]} out of range 0..{n - 1}", i + 1, j + 1)
    bad = np.flatnonzero((I < 0) | (I >= n))
    if len(bad):
        raise TableFormatError(f"inverse entry {I[bad[0]]} out of range", n + 1, bad[0] + 1)
    for label, v in (("zero", zero), ("one", one)):
        if not 0 <= int(v) < n:
            raise TableFormatError(f"{label}={v} out of range", 1, 1)
    return M.astype(INDEX), I.astype(INDEX), int(zero), int(one)


def _leq_matrix(M, d):
    # leq[a, b] <=> a = b d(a)
    n = len(M)
    return (M[:, d] == np.arange(n)[None, :]).T


def _idempotent_masks(M, E, zero):
    """Atoms of the idempotent semilattice and the atom set below each idempotent."""
    sub = M[np.ix_(E, E)]
    below = sub == E[:, None]  # below[i, j] <=> E[i] <= E[j]
    nonzero = E != zero
    counts = below[nonzero][:, nonzero].sum(axis=0)
    eatoms = [int(e) for e, c in zip(E[nonzero], counts) if c == 1]
    pos = {int(e): i for i, e in enumerate(E)}
    masks = {}
    for j, e in enumerate(E):
        m = 0
        for k, a in enumerate(eatoms):
            if below[pos[a], j]:
                m |= 1 << k
        masks[int(e)] = m
    return eatoms, masks


def _boolean_failure(M, E, zero, one, masks, k):
    """Witness for a non-Boolean idempotent semilattice."""
    Eset = [int(e) for e in E]
    for e in Eset:
        has_complement = False
        for f in Eset:
            if M[e, f] != zero:
                continue
            uppers = [g for g in Eset if M[e, g] == e and M[f, g] == f]
            if uppers == [one]:
                has_complement = True
                break
        if not has_complement:
            return ValidationReport(False, "boolean idempotents", (e,), "idempotent has no complement")
    seen = {}
    for e in Eset:
        if masks[e] in seen:
            return ValidationReport(
                False, "boolean idempotents", (seen[masks[e]], e), "distinct idempotents above the same atoms"
            )
        seen[masks[e]] = e
    return ValidationReport(False, "boolean idempotents", tuple(Eset), f"{len(Eset)} idempotents over {k} atoms")


def validate_bim(mult, inv, zero, one) -> ValidationReport:
    """Check the Boolean inverse monoid axioms by exhaustive scan.

    Malformed tables raise :class:`TableFormatError`; an axiom failure is
    reported as the first violated axiom together with a witness tuple.
    """
    M, I, zero, one = _coerce_tables(mult, inv, zero, one)
    n = len(M)
    ar = np.arange(n)

    bad = np.flatnonzero((M[one, :] != ar) | (M[:, one] != ar))
    if len(bad):
        return ValidationReport(False, "identity", (one, int(bad[0])))
    bad = np.flatnonzero((M[zero, :] != zero) | (M[:, zero] != zero))
    if len(bad):
        return ValidationReport(False, "zero", (zero, int(bad[0])))

    for a in range(n):
        lhs = M[M[a, :], :]  # (ab)c
        rhs = M[a, M]  # a(bc)
        diff = np.argwhere(lhs != rhs)
        if len(diff):
            b, c = diff[0]
            return ValidationReport(False, "associativity", (a, int(b), int(c)))

    aia = M[M[ar, I], ar]
    bad = np.flatnonzero(aia != ar)
    if len(bad):
        return ValidationReport(False, "inverse", (int(bad[0]),), "a a^-1 a != a")
    iai = M[M[I, ar], I]
    bad = np.flatnonzero(iai != I)
    if len(bad):
        return ValidationReport(False, "inverse", (int(bad[0]),), "a^-1 a a^-1 != a^-1")

    E = np.flatnonzero(M[ar, ar] == ar)
    sub = M[np.ix_(E, E)]
    diff = np.argwhere(sub != sub.T)
    if len(diff):
        i, j = diff[0]
        return ValidationReport(False, "idempotents commute", (int(E[i]), int(E[j])))

    eatoms, masks = _idempotent_masks(M, E, zero)
    k = len(eatoms)
    boolean = len(E) == 2**k and len(set(masks.values())) == len(E)
    if boolean:
        for e, f in itertools.product(E, E):
            if masks[int(M[e, f])] != masks[int(e)] & masks[int(f)]:
                boolean = False
                break
    if not boolean:
        return _boolean_failure(M, E, zero, one, masks, k)

    idem = np.zeros(n, dtype=bool)
    idem[E] = True
    compat = idem[M[I, :]] & idem[M[:, I]]
    d = M[I, ar]
    leq = _leq_matrix(M, d)
    down = leq.sum(axis=0)
    J = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        for b in np.flatnonzero(compat[a, a:]) + a:
            cand = np.flatnonzero(leq[a] & leq[b])
            if len(cand):
                c = cand[np.argmin(down[cand])]
                if leq[c, cand].all():
                    J[a, b] = J[b, a] = c
                    continue
            return ValidationReport(False, "compatible joins", (a, int(b)), "no least upper bound")

    for a in range(n):
        for b in np.flatnonzero(compat[a, a:]) + a:
            j = J[a, b]
            left = J[M[:, a], M[:, b]]
            bad = np.flatnonzero(left != M[:, j])
            if len(bad):
                return ValidationReport(False, "distributivity", (int(bad[0]), a, int(b)), "c(a v b) != ca v cb")
            right = J[M[a, :], M[b, :]]
            bad = np.flatnonzero(right != M[j, :])
            if len(bad):
                return ValidationReport(False, "distributivity", (a, int(b), int(bad[0])), "(a v b)c != ac v bc")
    return ValidationReport(True)


# ---------------------------------------------------------------------------
# the monoid


class FinBIM:
    """A finite Boolean inverse monoid.

    Instances are immutable; derived structure is computed on first use.
    Equality is identity (``is``); use :mod:`boolinv.structure` for
    isomorphism questions.

    ``check=False`` skips :func:`validate_bim` and is meant for constructions
    that are Boolean inverse monoids by construction (rook monoids, direct
    products of validated monoids).
    """

    def __init__(self, mult, inv, zero, one, labels=None, name=None, check=True, max_elements=None):
        limit = config.current().max_elements if max_elements is None else max_elements
        n = len(mult)
        if n > limit:
            raise ResourceLimitError(f"monoid with {n} elements exceeds max_elements={limit}")
        if check:
            report = validate_bim(mult, inv, zero, one)
            if not report:
                raise ValidationError(report)
        M, I, zero, one = _coerce_tables(mult, inv, zero, one) if check or not isinstance(mult, np.ndarray) else (
            np.asarray(mult, dtype=INDEX),
            np.asarray(inv, dtype=INDEX),
            int(zero),
            int(one),
        )
        M.setflags(write=False)
        I.setflags(write=False)
        self.mult = M
        self.inv = I
        self.zero = zero
        self.one = one
        self.n = len(M)
        self.labels = tuple(range(self.n)) if labels is None else tuple(labels)
        if len(self.labels) != self.n:
            raise DomainError("one label per element required")
        self.name = name or f"FinBIM[{self.n}]"

    def __repr__(self):
        return f"<{self.name}: {self.n} elements>"

    def __len__(self):
        return self.n

    def elements(self):
        return range(self.n)

    def label(self, a):
        return self.labels[a]

    @functools.cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def index_of(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"no element labelled {label!r} in {self.name}") from None

    def _check(self, *xs):
        for x in xs:
            if not (isinstance(x, (int, np.integer)) and 0 <= x < self.n):
                raise DomainError(f"{x!r} is not an element index of {self.name}")

    # -- basic arithmetic ---------------------------------------------------

    def mul(self, a, b):
        return int(self.mult[a, b])

    def product(self, *xs):
        out = self.one
        for x in xs:
            out = int(self.mult[out, x])
        return out

    def inverse(self, a):
        return int(self.inv[a])

    @functools.cached_property
    def d(self):
        return self.mult[self.inv, np.arange(self.n)]

    @functools.cached_property
    def r(self):
        return self.mult[np.arange(self.n), self.inv]

    def dom(self, a):
        return int(self.d[a])

    def ran(self, a):
        return int(self.r[a])

    @functools.cached_property
    def is_idem(self):
        ar = np.arange(self.n)
        return self.mult[ar, ar] == ar

    @functools.cached_property
    def idempotents(self):
        return tuple(int(e) for e in np.flatnonzero(self.is_idem))

    def is_idempotent(self, a):
        return bool(self.is_idem[a])

    @functools.cached_property
    def units(self):
        return tuple(int(a) for a in np.flatnonzero((self.d == self.one) & (self.r == self.one)))

    # -- order --------------------------------------------------------------

    @functools.cached_property
    def leq_matrix(self):
        m = _leq_matrix(self.mult, self.d)
        m.setflags(write=False)
        return m

    def leq(self, a, b):
        return bool(self.mult[b, self.d[a]] == a)

    @functools.cached_property
    def _down_size(self):
        return self.leq_matrix.sum(axis=0)

    @functools.cached_property
    def compat_matrix(self):
        m = self.is_idem[self.mult[self.inv, :]] & self.is_idem[self.mult[:, self.inv]]
        m.setflags(write=False)
        return m

    def compatible(self, a, b):
        return bool(self.compat_matrix[a, b])

    def orthogonal(self, a, b):
        return self.mult[self.inv[a], b] == self.zero and self.mult[a, self.inv[b]] == self.zero

    # -- the Boolean algebra of idempotents ---------------------------------

    @functools.cached_property
    def _emasks(self):
        E = np.array(self.idempotents)
        eatoms, masks = _idempotent_masks(self.mult, E, self.zero)
        if len(masks) != 2 ** len(eatoms):
            raise ConsistencyError(f"{self.name}: idempotents do not form a Boolean algebra")
        return tuple(eatoms), masks, {m: e for e, m in masks.items()}

    def atomic_idempotents(self):
        return list(self._emasks[0])

    def mask(self, e):
        """Bitmask of the atomic idempotents below the idempotent ``e``."""
        try:
            return self._emasks[1][e]
        except KeyError:
            raise DomainError(f"{e} is not an idempotent") from None

    def idempotent_of_mask(self, m):
        return self._emasks[2][m]

    @functools.cached_property
    def _full_mask(self):
        return self.mask(self.one)

    def rank(self, e):
        """Number of atomic idempotents below ``e``."""
        return bin(self.mask(e)).count("1")

    @functools.cached_property
    def _dom_rank(self):
        pops = np.zeros(self.n, dtype=np.int64)
        for e in self.idempotents:
            pops[e] = self.rank(e)
        return pops[self.d]

    def idempotent_join(self, e, f):
        return self.idempotent_of_mask(self.mask(e) | self.mask(f))

    def complement(self, e, within=None):
        """``within \\ e`` for idempotents ``e <= within`` (default ``within = 1``).

        For a non-idempotent ``e <= within`` the relative complement
        ``within * (d(within) \\ d(e))`` is returned.
        """
        f = self.one if within is None else within
        if not self.leq(e, f):
            raise DomainError(f"{e} is not below {f}")
        if self.is_idempotent(e) and self.is_idempotent(f):
            return self.idempotent_of_mask(self.mask(f) & ~self.mask(e))
        if self.is_idempotent(e) != self.is_idempotent(f) and self.is_idempotent(f):
            raise DomainError("relative complement of a non-idempotent inside an idempotent")
        de, df = self.dom(e), self.dom(f)
        return self.mul(f, self.idempotent_of_mask(self.mask(df) & ~self.mask(de)))

    # -- joins and meets ----------------------------------------------------

    def join(self, a, b):
        if not self.compat_matrix[a, b]:
            raise PreconditionError(f"{a} and {b} are not compatible; their join does not exist")
        # the least upper bound is the upper bound with the smallest domain
        cand = np.flatnonzero(self.leq_matrix[a] & self.leq_matrix[b])
        return int(cand[np.argmin(self._dom_rank[cand])])

    def join_all(self, xs: Iterable[int]):
        out = self.zero
        for x in xs:
            out = self.join(out, x)
        return out

    @functools.cached_property
    def phi(self):
        """Fixed-point operator for every element: the largest idempotent below it."""
        E = np.array(self.idempotents)
        pops = np.array([self.rank(e) for e in E])
        score = np.where(self.leq_matrix[E, :], pops[:, None], -1)
        out = E[np.argmax(score, axis=0)].astype(INDEX)
        out.setflags(write=False)
        return out

    def fixed_point(self, a):
        return int(self.phi[a])

    def meet(self, a, b):
        return int(self.mult[self.phi[self.mult[a, self.inv[b]]], b])

    # -- atoms ----------------------------------------------------------------

    @functools.cached_property
    def atoms(self):
        return tuple(int(a) for a in np.flatnonzero(self._down_size == 2))

    def atoms_below(self, a):
        return [x for x in self.atoms if self.leq_matrix[x, a]]

    def atoms_between(self, e, f):
        """Atoms x with d(x) = e and r(x) = f."""
        return [x for x in self.atoms if self.d[x] == e and self.r[x] == f]

    def atom_between(self, e, f):
        found = self.atoms_between(e, f)
        if len(found) != 1:
            raise PreconditionError(f"expected a unique atom {e} -> {f}, found {len(found)}")
        return found[0]

    # -- Green's relations ----------------------------------------------------

    @functools.cached_property
    def _dclass(self):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in range(self.n):
            ra, rb = find(int(self.d[s])), find(int(self.r[s]))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        roots = sorted({find(e) for e in self.idempotents})
        number = {r: i for i, r in enumerate(roots)}
        cls = {e: number[find(e)] for e in self.idempotents}
        classes = [[] for _ in roots]
        for e in self.idempotents:
            classes[cls[e]].append(e)
        return cls, tuple(tuple(c) for c in classes)

    @property
    def d_classes(self):
        """D-classes of idempotents, as tuples of idempotent indices."""
        return self._dclass[1]

    def d_class(self, a):
        """Index of the D-class of ``a`` (that of its domain idempotent)."""
        return self._dclass[0][int(self.d[a])]

    def d_related(self, a, b):
        return self.d_class(a) == self.d_class(b)

    def d_witness(self, e, f):
        """Some s with d(s) = e and r(s) = f, or None."""
        hits = np.flatnonzero((self.d == e) & (self.r == f))
        return int(hits[0]) if len(hits) else None

    @functools.cached_property
    def j_order(self):
        """``j_order[c1, c2]`` iff the ideal of D-class c1 lies inside that of c2."""
        k = len(self.d_classes)
        out = np.zeros((k, k), dtype=bool)
        cls = self._dclass[0]
        for f in self.idempotents:
            for e in self.idempotents:
                if self.mult[f, e] == f:
                    out[cls[f], cls[e]] = True
        out.setflags(write=False)
        return out

    def j_leq(self, a, b):
        return bool(self.j_order[self.d_class(a), self.d_class(b)])

    def j_related(self, a, b):
        return self.j_leq(a, b) and self.j_leq(b, a)

    def principal_ideal(self, a):
        """S a S as a set (brute force)."""
        return frozenset(int(x) for x in np.unique(self.mult[self.mult[:, a], :]))


# ---------------------------------------------------------------------------
# module-level operations


@dataclasses.dataclass(frozen=True)
class Relations:
    leq: bool
    compatible: bool
    orthogonal: bool
    d_related: bool
    j_related: bool


def relations(S: FinBIM, a, b) -> Relations:
    S._check(a, b)
    return Relations(
        leq=S.leq(a, b),
        compatible=S.compatible(a, b),
        orthogonal=bool(S.orthogonal(a, b)),
        d_related=S.d_related(a, b),
        j_related=S.j_related(a, b),
    )


def join(S: FinBIM, a, b):
    S._check(a, b)
    return S.join(a, b)


def meet(S: FinBIM, a, b):
    S._check(a, b)
    return S.meet(a, b)


def fixed_point(S: FinBIM, a):
    S._check(a)
    return S.fixed_point(a)


def complement(S: FinBIM, e, within=None):
    S._check(e, *(() if within is None else (within,)))
    return S.complement(e, within)


def _require_idempotents(S, xs, what="generator"):
    for x in xs:
        S._check(x)
        if not S.is_idempotent(x):
            raise DomainError(f"{what} {x} is not an idempotent")


def boolean_subalgebra_generated(S: FinBIM, gens: Iterable[int]) -> frozenset:
    """Smallest Boolean subalgebra of E(S) containing ``gens``: all joins of minterms."""
    gens = list(gens)
    _require_idempotents(S, gens)
    k = len(S.atomic_idempotents())
    blocks: dict[tuple, int] = {}
    for i in range(k):
        sig = tuple(bool(S.mask(g) >> i & 1) for g in gens)
        blocks[sig] = blocks.get(sig, 0) | 1 << i
    minterms = list(blocks.values())
    out = set()
    for choice in itertools.product((0, 1), repeat=len(minterms)):
        m = 0
        for bit, term in zip(choice, minterms):
            if bit:
                m |= term
        out.add(S.idempotent_of_mask(m))
    return frozenset(out)


def generated_group(S: FinBIM, G: Iterable[int]) -> frozenset:
    G = list(G)
    for g in G:
        S._check(g)
        if g not in S.units:
            raise DomainError(f"{g} is not a unit")
    group = {S.one}
    frontier = [S.one]
    while frontier:
        x = frontier.pop()
        for g in G:
            y = S.mul(x, g)
            if y not in group:
                group.add(y)
                frontier.append(y)
    return frozenset(group)


def _is_submonoid(S, T):
    T = set(T)
    if S.one not in T:
        return False
    for a in T:
        if S.inverse(a) not in T:
            return False
    idx = np.array(sorted(T))
    return set(np.unique(S.mult[np.ix_(idx, idx)]).tolist()) <= T


def ge_submonoid(S: FinBIM, G: Iterable[int], E: Iterable[int]) -> frozenset:
    """The factorizable inverse submonoid ``{g e : g in G, e in E}``."""
    G, E = frozenset(G), frozenset(E)
    for g in G:
        S._check(g)
        if g not in S.units:
            raise PreconditionError(f"{g} is not a unit")
    _require_idempotents(S, E, "member of E")
    if not _is_submonoid(S, G):
        raise PreconditionError("G is not a subgroup of the units")
    if S.one not in E or any(S.mul(e, f) not in E for e in E for f in E):
        raise PreconditionError("E is not a subsemilattice containing 1")
    for g in sorted(G):
        for e in sorted(E):
            if S.product(g, e, S.inverse(g)) not in E:
                raise PreconditionError(f"E is not invariant under G: g={g}, e={e}")
    return frozenset(S.mul(g, e) for g in G for e in E)


def invariant_closure(S: FinBIM, E: Iterable[int], G: Iterable[int]) -> frozenset:
    """Boolean subalgebra generated by all conjugates ``g e g^-1`` (g in <G>)."""
    E = list(E)
    _require_idempotents(S, E, "member of E")
    group = generated_group(S, G)
    orbit = {S.product(g, e, S.inverse(g)) for g in group for e in E}
    return boolean_subalgebra_generated(S, orbit)


def is_subalgebra(S: FinBIM, T: Iterable[int], meets=True) -> bool:
    """Inverse submonoid with 0, closed under compatible joins, idempotent complements
    and (when ``meets``) binary meets, all computed in ``S``."""
    T = frozenset(int(t) for t in T)
    for t in T:
        S._check(t)
    if S.zero not in T or not _is_submonoid(S, T):
        return False
    for e in T:
        if S.is_idempotent(e) and S.complement(e) not in T:
            return False
    items = sorted(T)
    for i, a in enumerate(items):
        for b in items[i:]:
            if S.compatible(a, b) and S.join(a, b) not in T:
                return False
            if meets and S.meet(a, b) not in T:
                return False
    return True


def join_closure(S: FinBIM, T: Iterable[int]) -> frozenset:
    """All joins of finite compatible subsets of ``T``."""
    T = frozenset(int(t) for t in T)
    for t in T:
        S._check(t)
    if not _is_submonoid(S, T):
        raise PreconditionError("T is not an inverse submonoid")
    ET = [e for e in T if S.is_idempotent(e)]
    if S.zero not in T:
        raise PreconditionError("T does not contain 0, so E(T) is not a Boolean subalgebra")
    for e in ET:
        if S.complement(e) not in T:
            raise PreconditionError(f"E(T) is not closed under complement: {e}")
    # pairwise joins suffice: anything below compatible elements is compatible
    out = set(T)
    frontier = list(T)
    while frontier:
        new = []
        current = sorted(out)
        for a in frontier:
            for b in current:
                if S.compatible(a, b):
                    c = S.join(a, b)
                    if c not in out:
                        out.add(c)
                        new.append(c)
        frontier = new
    if not is_subalgebra(S, out, meets=False):
        raise ConsistencyError("join closure is not a subalgebra")
    return frozenset(out)


def direct_product(S: FinBIM, T: FinBIM, name=None) -> FinBIM:
    """Componentwise product; element ``(i, j)`` has index ``i * len(T) + j``."""
    nS, nT = S.n, T.n
    limit = config.current().max_elements
    if nS * nT > limit:
        raise ResourceLimitError(f"product with {nS * nT} elements exceeds max_elements={limit}")
    MS = S.mult.astype(np.int64)
    MT = T.mult.astype(np.int64)
    mult = (MS[:, None, :, None] * nT + MT[None, :, None, :]).reshape(nS * nT, nS * nT)
    inv = (S.inv.astype(np.int64)[:, None] * nT + T.inv.astype(np.int64)[None, :]).reshape(-1)
    labels = [(a, b) for a in S.labels for b in T.labels]
    return FinBIM(
        mult.astype(INDEX),
        inv.astype(INDEX),
        S.zero * nT + T.zero,
        S.one * nT + T.one,
        labels=labels,
        name=name or f"{S.name} x {T.name}",
        check=False,
    )


def submonoid(S: FinBIM, T: Iterable[int], name=None, check=True) -> tuple[FinBIM, tuple[int, ...]]:
    """Materialize the sub-structure on ``T``; returns it with the inclusion map."""
    idx = tuple(sorted({int(t) for t in T}))
    for t in idx:
        S._check(t)
    if S.zero not in idx or not _is_submonoid(S, idx):
        raise PreconditionError("subset is not an inverse submonoid containing 0")
    pos = {t: i for i, t in enumerate(idx)}
    sub = S.mult[np.ix_(idx, idx)]
    mult = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if len(idx) > 1 else np.array([[0]])
    inv = [pos[int(S.inv[t])] for t in idx]
    M = FinBIM(
        mult.astype(INDEX),
        np.array(inv, dtype=INDEX),
        pos[S.zero],
        pos[S.one],
        labels=[S.label(t) for t in idx],
        name=name or f"sub({S.name}, {len(idx)})",
        check=check,
    )
    return M, idx


# ---------------------------------------------------------------------------
# morphisms


class Morphism:
    """A map between two algebras (FinBIM or RookAlgebra), evaluated lazily."""

    def __init__(self, source, target, fn: Callable[[Any], Any], name=None):
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name or "morphism"

    @classmethod
    def from_table(cls, source, target, table: Sequence, name=None):
        table = tuple(table)
        return cls(source, target, table.__getitem__, name=name)

    @classmethod
    def identity(cls, S):
        return cls(S, S, lambda x: x, name="id")

    def __call__(self, x):
        return self.fn(x)

    def __repr__(self):
        return f"<Morphism {self.name}: {self.source!r} -> {self.target!r}>"

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self ∘ inner``."""
        return Morphism(inner.source, self.target, lambda x: self.fn(inner.fn(x)), name=f"{self.name}∘{inner.name}")

    def table(self):
        return tuple(self.fn(x) for x in self.source.elements())

    def agrees_with(self, other: "Morphism", elements=None) -> bool:
        xs = self.source.elements() if elements is None else elements
        return all(self(x) == other(x) for x in xs)

    def is_injective(self):
        img = self.table()
        return len(set(img)) == len(img)

    def violation(self):
        """First failure of the Boolean-inverse-monoid morphism laws, or None."""
        S, T = self.source, self.target
        xs = list(S.elements())
        img = {x: self(x) for x in xs}
        if img[S.zero] != T.zero:
            return ("zero", S.zero)
        if img[S.one] != T.one:
            return ("one", S.one)
        for a in xs:
            if img[S.inverse(a)] != T.inverse(img[a]):
                return ("inverse", a)
            if S.is_idempotent(a) and img[S.complement(a)] != T.complement(img[a]):
                return ("complement", a)
        for a, b in itertools.product(xs, repeat=2):
            if img[S.mul(a, b)] != T.mul(img[a], img[b]):
                return ("multiplication", a, b)
            if S.compatible(a, b) and img[S.join(a, b)] != T.join(img[a], img[b]):
                return ("join", a, b)
        return None

    def is_morphism(self):
        return self.violation() is None


# ---------------------------------------------------------------------------
# text format


def _int_token(tok, line, col):
    try:
        return int(tok)
    except ValueError:
        raise TableFormatError(f"expected an integer, got {tok!r}", line, col) from None


def _tokens(line_text):
    """Whitespace-separated tokens with their 1-based starting column."""
    out, col = [], 0
    for tok in line_text.split():
        col = line_text.index(tok, col)
        out.append((tok, col + 1))
        col += len(tok)
    return out


def parse_bim_tables(text: str):
    """Parse ``bim <n> zero=<i> one=<j>`` text into ``(mult, inv, zero, one)``."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise TableFormatError("empty input", 1, 1)
    head = _tokens(lines[0])
    if len(head) != 4 or head[0][0] != "bim":
        raise TableFormatError("header must be 'bim <n> zero=<i> one=<j>'", 1, 1)
    n = _int_token(head[1][0], 1, head[1][1])
    if n < 1:
        raise TableFormatError("element count must be positive", 1, head[1][1])
    fields = {}
    for (tok, col), key in zip(head[2:], ("zero", "one")):
        if not tok.startswith(key + "="):
            raise TableFormatError(f"expected {key}=<index>", 1, col)
        fields[key] = _int_token(tok[len(key) + 1 :], 1, col + len(key) + 1)
    body = lines[1:]
    if len(body) < n + 1:
        raise TableFormatError(f"expected {n + 1} table lines, found {len(body)}", len(lines) + 1, 1)
    if len(body) > n + 1:
        raise TableFormatError("trailing content after inverse line", n + 3, 1)
    rows = []
    for i, raw in enumerate(body):
        lineno = i + 2
        toks = _tokens(raw)
        if len(toks) != n:
            col = toks[n][1] if len(toks) > n else len(raw) + 1
            raise TableFormatError(f"expected {n} entries, found {len(toks)}", lineno, col)
        row = []
        for tok, col in toks:
            v = _int_token(tok, lineno, col)
            if not 0 <= v < n:
                raise TableFormatError(f"index {v} out of range 0..{n - 1}", lineno, col)
            row.append(v)
        rows.append(row)
    for key in ("zero", "one"):
        if not 0 <= fields[key] < n:
            raise TableFormatError(f"{key}={fields[key]} out of range", 1, 1)
    return rows[:n], rows[n], fields["zero"], fields["one"]


def parse_bim(text: str, name=None) -> FinBIM:
    mult, inv, zero, one = parse_bim_tables(text)
    return FinBIM(mult, inv, zero, one, name=name)


def format_bim(S: FinBIM) -> str:
    lines = [f"bim {S.n} zero={S.zero} one={S.one}"]
    lines += [" ".join(map(str, row)) for row in S.mult.tolist()]
    lines.append(" ".join(map(str, S.inv.tolist())))
    return "\n".join(lines) + "\n"
