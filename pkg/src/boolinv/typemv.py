"""Invariant means, the type interval and finite MV-algebras.

All arithmetic is exact: means are :class:`fractions.Fraction` valued and the
linear systems behind :func:`enumerate_invariant_means` are solved with sympy
rationals.
"""

from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Sequence

import sympy

from .errors import ConsistencyError, DomainError, PreconditionError, TableFormatError
from .finmon import FinBIM, ValidationReport, _int_token, _tokens
from .structure import is_factorizable, is_fundamental, is_zero_simplifying, principal_ideal_poset


# ---------------------------------------------------------------------------
# the type interval


class TypeInterval:
    """D-classes of idempotents with the partial addition ``[e] + [f] = [e' v f']``."""

    def __init__(self, S: FinBIM):
        self.S = S
        self.classes = S.d_classes
        self.zero = S.d_class(S.zero)
        self.top = S.d_class(S.one)
        cls = S._dclass[0]
        add: dict = {}
        for e in S.idempotents:
            for f in S.idempotents:
                if S.mul(e, f) != S.zero:
                    continue
                key = (cls[e], cls[f])
                val = cls[S.idempotent_join(e, f)]
                if add.setdefault(key, val) != val:
                    raise ConsistencyError(f"partial addition is not well defined at classes {key}")
        self._add = add

    def __len__(self):
        return len(self.classes)

    def add(self, i, j):
        """``[i] + [j]`` or None when no orthogonal representatives exist."""
        return self._add.get((i, j))

    def defined(self, i, j):
        return (i, j) in self._add

    def leq(self, i, j):
        return any(self._add.get((i, z)) == j for z in range(len(self)))

    def is_conical(self):
        return all(i == j == self.zero for (i, j), k in self._add.items() if k == self.zero)

    def is_cancellative(self):
        seen = {}
        for (i, j), k in self._add.items():
            if seen.setdefault((i, k), j) != j:
                return False
        return True

    def has_top(self):
        return all(self.leq(i, self.top) for i in range(len(self)))

    def is_effect_algebra(self):
        return self.is_conical() and self.is_cancellative() and self.has_top()

    def representative(self, i):
        return self.classes[i][0]


def type_interval(S: FinBIM) -> TypeInterval:
    return TypeInterval(S)


# ---------------------------------------------------------------------------
# invariant means


@dataclasses.dataclass(frozen=True)
class Mean:
    values: tuple  # ((idempotent, Fraction), ...) in idempotent order

    def __call__(self, e):
        for k, v in self.values:
            if k == e:
                return v
        raise DomainError(f"{e} is not an idempotent")

    def as_dict(self):
        return dict(self.values)

    def __str__(self):
        return ", ".join(f"{e}:{v}" for e, v in self.values)


def _mean_from_atoms(S: FinBIM, weights: Sequence[Fraction]) -> Mean:
    vals = []
    for e in S.idempotents:
        m = S.mask(e)
        vals.append((e, sum((w for i, w in enumerate(weights) if m >> i & 1), Fraction(0))))
    return Mean(tuple(vals))


def invariant_mean_simple(S: FinBIM) -> Mean:
    """The unique normalized invariant mean of a finite simple monoid: rank / number of atoms."""
    if not (is_fundamental(S) and is_zero_simplifying(S)):
        raise PreconditionError(f"{S.name} is not finite simple")
    k = len(S.atomic_idempotents())
    return _mean_from_atoms(S, [Fraction(1, k)] * k)


def _constraints(S: FinBIM):
    """Rows over the atom weights: D-invariance (= 0) and normalization (= 1)."""
    k = len(S.atomic_idempotents())
    rows, rhs = [], []
    for cls in S.d_classes:
        base = S.mask(cls[0])
        for f in cls[1:]:
            m = S.mask(f)
            rows.append([(base >> i & 1) - (m >> i & 1) for i in range(k)])
            rhs.append(0)
    rows.append([1] * k)
    rhs.append(1)
    return rows, rhs


def enumerate_invariant_means(S: FinBIM) -> list[Mean]:
    """Extreme points of the set of normalized invariant means.

    Writing a mean by its values on atomic idempotents makes orthogonal
    additivity automatic, so the remaining constraints are D-invariance,
    ``ν(1) = 1`` and nonnegativity.  Vertices are found by trying every
    support set and keeping the unique positive solutions.
    """
    rows, rhs = _constraints(S)
    k = len(S.atomic_idempotents())
    A = sympy.Matrix(rows)
    b = sympy.Matrix(rhs)
    found = []
    seen = set()
    for size in range(1, k + 1):
        for support in itertools.combinations(range(k), size):
            sub = A[:, list(support)]
            if sub.rank() != size:
                continue
            aug = sub.row_join(b)
            if aug.rank() != size:
                continue
            sol = (sub.T * sub).LUsolve(sub.T * b)
            if any(x <= 0 for x in sol):
                continue
            w = [Fraction(0)] * k
            for i, x in zip(support, sol):
                w[i] = Fraction(int(x.p), int(x.q))
            key = tuple(w)
            if key not in seen:
                seen.add(key)
                found.append(_mean_from_atoms(S, w))
    return found


def is_invariant_mean(S: FinBIM, nu: Mean) -> bool:
    """Direct check of the defining conditions over all elements and orthogonal pairs."""
    v = nu.as_dict()
    if v.get(S.one) != 1 or any(x < 0 for x in v.values()):
        return False
    for s in S.elements():
        if v[S.dom(s)] != v[S.ran(s)]:
            return False
    for e in S.idempotents:
        for f in S.idempotents:
            if S.mul(e, f) == S.zero and v[S.idempotent_join(e, f)] != v[e] + v[f]:
                return False
    return True


# ---------------------------------------------------------------------------
# MV-algebras


@dataclasses.dataclass(frozen=True)
class MVAlg:
    oplus: tuple
    neg: tuple
    zero: int
    one: int
    labels: tuple = None
    name: str = dataclasses.field(default="MV", compare=False)

    def __post_init__(self):
        n = len(self.oplus)
        if any(len(r) != n for r in self.oplus) or len(self.neg) != n:
            raise DomainError("MV tables must be square with one negation per element")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(n)))

    def __len__(self):
        return len(self.oplus)

    def elements(self):
        return range(len(self.oplus))

    def add(self, x, y):
        return self.oplus[x][y]

    def leq(self, x, y):
        return self.oplus[self.neg[x]][y] == self.one

    def multiple(self, x, k):
        out = self.zero
        for _ in range(k):
            out = self.oplus[out][x]
        return out


def mv_validate(M: MVAlg) -> ValidationReport:
    n = len(M)
    P, N, z = M.oplus, M.neg, M.zero
    for x in range(n):
        if P[x][z] != x:
            return ValidationReport(False, "neutral zero", (x,))
        if N[N[x]] != x:
            return ValidationReport(False, "double negation", (x,))
        if P[x][N[z]] != N[z]:
            return ValidationReport(False, "absorbing one", (x,))
    if N[z] != M.one:
        return ValidationReport(False, "one is not the negation of zero", (z,))
    for x, y in itertools.product(range(n), repeat=2):
        if P[x][y] != P[y][x]:
            return ValidationReport(False, "commutativity", (x, y))
        if P[N[P[N[x]][y]]][y] != P[N[P[N[y]][x]]][x]:
            return ValidationReport(False, "lukasiewicz axiom", (x, y))
    for x, y, w in itertools.product(range(n), repeat=3):
        if P[P[x][y]][w] != P[x][P[y][w]]:
            return ValidationReport(False, "associativity", (x, y, w))
    return ValidationReport(True)


def mv_is_boolean(M: MVAlg) -> bool:
    return all(M.add(x, x) == x for x in M.elements())


def mv_ideals(M: MVAlg) -> list[frozenset]:
    """All ideals; a finite ideal is the down-set of a multiple of one of its elements."""
    n = len(M)
    out = set()
    for x in M.elements():
        top = M.multiple(x, n)
        out.add(frozenset(y for y in M.elements() if M.leq(y, top)))
    return sorted(out, key=lambda I: (len(I), sorted(I)))


def mv_is_simple(M: MVAlg) -> bool:
    return len(M) > 1 and len(mv_ideals(M)) == 2


def mv_is_hom(M: MVAlg, N: MVAlg, table: Sequence[int]) -> bool:
    if table[M.zero] != N.zero:
        return False
    for x in M.elements():
        if table[M.neg[x]] != N.neg[table[x]]:
            return False
        for y in M.elements():
            if table[M.add(x, y)] != N.add(table[x], table[y]):
                return False
    return True


def mv_iso(M: MVAlg, N: MVAlg):
    """An isomorphism ``M -> N`` as a tuple, or None; backtracking search."""
    n = len(M)
    if n != len(N):
        return None
    order = sorted(M.elements(), key=lambda x: (x not in (M.zero, M.one), x))
    img = [None] * n
    used = set()

    def consistent(x):
        fx = img[x]
        if img[M.neg[x]] is not None and img[M.neg[x]] != N.neg[fx]:
            return False
        for y in M.elements():
            if img[y] is None:
                continue
            s = M.add(x, y)
            if img[s] is not None and img[s] != N.add(fx, img[y]):
                return False
        return True

    def rec(k):
        if k == n:
            return True
        x = order[k]
        if x == M.zero:
            cands = [N.zero]
        elif x == M.one:
            cands = [N.one]
        else:
            cands = [y for y in N.elements() if y not in used]
        for y in cands:
            if y in used:
                continue
            img[x] = y
            used.add(y)
            if consistent(x) and rec(k + 1):
                return True
            used.discard(y)
            img[x] = None
        return False

    if not rec(0):
        return None
    table = tuple(img)
    return table if mv_is_hom(M, N, table) else None


def lukasiewicz(n: int) -> MVAlg:
    """The chain ``{0, 1/(n-1), ..., 1}`` with truncated addition."""
    if n < 2:
        raise DomainError("Lukasiewicz chains need at least 2 elements")
    top = n - 1
    oplus = tuple(tuple(min(x + y, top) for y in range(n)) for x in range(n))
    neg = tuple(top - x for x in range(n))
    return MVAlg(oplus, neg, 0, top, tuple(Fraction(r, top) for r in range(n)), name=f"L_{n}")


@dataclasses.dataclass(frozen=True)
class MVMap:
    source: MVAlg
    target: MVAlg
    table: tuple

    def __call__(self, x):
        return self.table[x]


def mv_hom(m: int, n: int):
    """The homomorphism ``Ł_m -> Ł_n`` (``r/(m-1) ↦ rk/(n-1)``) when it exists, else None."""
    if m < 2 or n < 2:
        raise DomainError("Lukasiewicz chains need at least 2 elements")
    if (n - 1) % (m - 1):
        return None
    k = (n - 1) // (m - 1)
    return MVMap(lukasiewicz(m), lukasiewicz(n), tuple(r * k for r in range(m)))


def is_foulis(S: FinBIM) -> bool:
    return is_factorizable(S) and principal_ideal_poset(S).is_lattice


def mv_algebra(S: FinBIM) -> MVAlg:
    """``L(S)`` on the D-classes: ``¬[e] = [ē]`` and ``[e] ⊕ [f] = [e] + ([ē] ∧ [f])``."""
    if not is_foulis(S):
        raise PreconditionError(f"{S.name} is not a Foulis monoid")
    T = TypeInterval(S)
    poset = principal_ideal_poset(S)
    k = len(T)
    rep = [T.representative(i) for i in range(k)]
    ideals = [S.principal_ideal(e) for e in rep]
    neg = tuple(S.d_class(S.complement(e)) for e in rep)

    def meet(i, j):
        m = poset.meet(i, j)
        if m is None or ideals[m] != ideals[i] & ideals[j]:
            raise ConsistencyError(f"no class generating the intersection of ideals {i}, {j}")
        return m

    oplus = []
    for i in range(k):
        row = []
        for j in range(k):
            s = T.add(i, meet(neg[i], j))
            if s is None:
                raise ConsistencyError(f"sum undefined for classes {i}, {j}")
            row.append(s)
        oplus.append(tuple(row))
    labels = tuple(S.rank(e) for e in rep)
    return MVAlg(tuple(oplus), neg, T.zero, T.top, labels, name=f"L({S.name})")


# ---------------------------------------------------------------------------
# text format


def format_mv(M: MVAlg) -> str:
    lines = [f"mv {len(M)}"]
    lines += [" ".join(map(str, row)) for row in M.oplus]
    lines.append(" ".join(map(str, M.neg)))
    lines.append(f"zero={M.zero} one={M.one}")
    return "\n".join(lines) + "\n"


def parse_mv(text: str) -> MVAlg:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise TableFormatError("empty input", 1, 1)
    head = _tokens(lines[0])
    if len(head) != 2 or head[0][0] != "mv":
        raise TableFormatError("header must be 'mv <n>'", 1, 1)
    n = _int_token(head[1][0], 1, head[1][1])
    if len(lines) != n + 3:
        raise TableFormatError(f"expected {n + 3} lines, found {len(lines)}", len(lines) + 1, 1)
    rows = []
    for i in range(1, n + 2):
        toks = _tokens(lines[i])
        if len(toks) != n:
            raise TableFormatError(f"expected {n} entries", i + 1, 1)
        row = []
        for tok, col in toks:
            v = _int_token(tok, i + 1, col)
            if not 0 <= v < n:
                raise TableFormatError(f"index {v} out of range", i + 1, col)
            row.append(v)
        rows.append(tuple(row))
    tail = _tokens(lines[n + 2])
    if len(tail) != 2 or not tail[0][0].startswith("zero=") or not tail[1][0].startswith("one="):
        raise TableFormatError("last line must be 'zero=<i> one=<j>'", n + 3, 1)
    zero = _int_token(tail[0][0][5:], n + 3, tail[0][1] + 5)
    one = _int_token(tail[1][0][4:], n + 3, tail[1][1] + 4)
    return MVAlg(tuple(rows[:n]), rows[n], zero, one)
