"""Structural predicates and decompositions of finite Boolean inverse monoids."""

from __future__ import annotations

import dataclasses
import itertools
import json
from typing import Hashable, Iterable

import numpy as np

from . import config
from .errors import ConsistencyError, DomainError, PreconditionError, ResourceLimitError
from .finmon import (
    INDEX,
    FinBIM,
    Morphism,
    ge_submonoid,
    invariant_closure,
    is_subalgebra,
    join_closure,
    submonoid,
)
from .groups import GroupTable


def _memo(S: FinBIM, key, compute):
    # results depend only on the immutable tables, so caching is unobservable
    store = S.__dict__.setdefault("_structure_memo", {})
    if key not in store:
        store[key] = compute()
    return store[key]


# ---------------------------------------------------------------------------
# atoms and groupoids


def atoms(S: FinBIM) -> frozenset:
    return frozenset(S.atoms)


@dataclasses.dataclass(frozen=True)
class Groupoid:
    """A finite groupoid with hashable arrows; ``compose(a, b)`` means "a after b"."""

    objects: tuple
    arrows: tuple
    dom: dict
    cod: dict
    table: dict  # (a, b) -> ab, defined iff dom(a) == cod(b)
    identities: dict  # object -> identity arrow

    def compose(self, a, b):
        try:
            return self.table[a, b]
        except KeyError:
            raise DomainError(f"{a!r} and {b!r} are not composable") from None

    def inverse(self, a):
        e = self.identities[self.cod[a]]
        for b in self.arrows:
            if self.dom[b] == self.cod[a] and self.cod[b] == self.dom[a] and self.table[b, a] == self.identities[self.dom[a]]:
                return b
        raise ConsistencyError(f"no inverse for {a!r} (identity {e!r})")

    def violation(self):
        """First failure of the groupoid axioms, or None."""
        for a in self.arrows:
            if self.table.get((a, self.identities[self.dom[a]])) != a:
                return ("right identity", a)
            if self.table.get((self.identities[self.cod[a]], a)) != a:
                return ("left identity", a)
        for a, b in itertools.product(self.arrows, repeat=2):
            defined = (a, b) in self.table
            if defined != (self.dom[a] == self.cod[b]):
                return ("composability", a, b)
            if defined:
                ab = self.table[a, b]
                if self.dom[ab] != self.dom[b] or self.cod[ab] != self.cod[a]:
                    return ("domain of product", a, b)
        for a, b, c in itertools.product(self.arrows, repeat=3):
            if self.dom[a] == self.cod[b] and self.dom[b] == self.cod[c]:
                if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                    return ("associativity", a, b, c)
        for a in self.arrows:
            try:
                self.inverse(a)
            except ConsistencyError:
                return ("inverse", a)
        return None

    def components(self):
        """Connected components as tuples of objects, in object order."""
        parent = {o: o for o in self.objects}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a in self.arrows:
            x, y = find(self.dom[a]), find(self.cod[a])
            if x != y:
                parent[y] = x
        groups = {}
        for o in self.objects:
            groups.setdefault(find(o), []).append(o)
        return [tuple(v) for v in groups.values()]

    def isotropy(self, obj):
        return [a for a in self.arrows if self.dom[a] == obj and self.cod[a] == obj]

    def is_principal(self):
        return all(len(self.isotropy(o)) == 1 for o in self.objects)

    def is_connected(self):
        return len(self.components()) <= 1

    # -- standard examples --------------------------------------------------

    @classmethod
    def pair(cls, objects: Iterable[Hashable]):
        """The pair groupoid: exactly one arrow between any two objects."""
        objs = tuple(objects)
        arrows = tuple((i, j) for i in objs for j in objs)  # arrow (i, j) goes j -> i
        table = {((i, j), (j2, k)): (i, k) for (i, j) in arrows for (j2, k) in arrows if j == j2}
        return cls(objs, arrows, {a: a[1] for a in arrows}, {a: a[0] for a in arrows}, table, {o: (o, o) for o in objs})

    @classmethod
    def from_group(cls, G: GroupTable, obj="*"):
        arrows = tuple(G.elements())
        table = {(a, b): G.mul(a, b) for a in arrows for b in arrows}
        return cls((obj,), arrows, {a: obj for a in arrows}, {a: obj for a in arrows}, table, {obj: G.id})

    def disjoint_union(self, other: "Groupoid") -> "Groupoid":
        tag = lambda k, x: (k, x)  # noqa: E731
        objs = tuple(tag(0, o) for o in self.objects) + tuple(tag(1, o) for o in other.objects)
        arrows, dom, cod, table, ids = [], {}, {}, {}, {}
        for k, G in enumerate((self, other)):
            for a in G.arrows:
                arrows.append(tag(k, a))
                dom[tag(k, a)] = tag(k, G.dom[a])
                cod[tag(k, a)] = tag(k, G.cod[a])
            for (a, b), c in G.table.items():
                table[tag(k, a), tag(k, b)] = tag(k, c)
            for o, e in G.identities.items():
                ids[tag(k, o)] = tag(k, e)
        return Groupoid(objs, tuple(arrows), dom, cod, table, ids)


def atom_groupoid(S: FinBIM) -> Groupoid:
    """Atoms of ``S`` under the restricted product; objects are atomic idempotents."""

    def build():
        arrows = S.atoms
        objs = tuple(S.atomic_idempotents())
        dom = {a: S.dom(a) for a in arrows}
        cod = {a: S.ran(a) for a in arrows}
        table = {(a, b): S.mul(a, b) for a in arrows for b in arrows if dom[a] == cod[b]}
        return Groupoid(objs, arrows, dom, cod, table, {e: e for e in objs})

    return _memo(S, "atom_groupoid", build)


def _bisections(G: Groupoid):
    by_dom = {o: [a for a in G.arrows if G.dom[a] == o] for o in G.objects}
    out = []

    def rec(k, used, chosen):
        if k == len(G.objects):
            out.append(frozenset(chosen))
            return
        rec(k + 1, used, chosen)
        for a in by_dom[G.objects[k]]:
            if G.cod[a] not in used:
                used.add(G.cod[a])
                chosen.append(a)
                rec(k + 1, used, chosen)
                chosen.pop()
                used.discard(G.cod[a])

    rec(0, set(), [])
    return out


def local_bisections(G: Groupoid, check=True) -> FinBIM:
    """Subsets of arrows on which ``dom`` and ``cod`` are injective, under setwise product."""
    sets = _bisections(G)
    limit = config.current().max_elements
    if len(sets) > limit:
        raise ResourceLimitError(f"{len(sets)} local bisections exceed max_elements={limit}")
    sets.sort(key=lambda A: (len(A), sorted(map(repr, A))))
    index = {A: i for i, A in enumerate(sets)}
    inv_arrow = {a: G.inverse(a) for a in G.arrows}
    # a bisection is determined by where it sends each object, so products can use dicts
    maps = [{G.dom[a]: a for a in A} for A in sets]
    n = len(sets)
    mult = np.empty((n, n), dtype=INDEX)
    for i, A in enumerate(sets):
        amap = maps[i]
        for j, B in enumerate(sets):
            prod = frozenset(G.table[amap[G.cod[b]], b] for b in B if G.cod[b] in amap)
            mult[i, j] = index[prod]
    inv = np.array([index[frozenset(inv_arrow[a] for a in A)] for A in sets], dtype=INDEX)
    one = index[frozenset(G.identities.values())]
    return FinBIM(mult, inv, index[frozenset()], one, labels=sets, name="K(G)", check=check)


def reconstruct(S: FinBIM) -> Morphism:
    """The map ``a ↦ {atoms below a}`` into the local bisections of the atom groupoid,
    verified to be an isomorphism."""
    K = local_bisections(atom_groupoid(S))
    image = []
    for a in S.elements():
        key = frozenset(S.atoms_below(a))
        try:
            image.append(K.index_of(key))
        except DomainError:
            raise ConsistencyError(f"atoms below {a} do not form a local bisection") from None
    img = np.array(image)
    if len(set(image)) != S.n or K.n != S.n:
        raise ConsistencyError("atom sets do not give a bijection")
    if img[S.zero] != K.zero or img[S.one] != K.one:
        raise ConsistencyError("zero or identity not preserved")
    if not np.array_equal(img[S.mult], K.mult[np.ix_(img, img)]):
        raise ConsistencyError("multiplication not preserved")
    if not np.array_equal(img[S.inv], K.inv[img]):
        raise ConsistencyError("inverse not preserved")
    return Morphism.from_table(S, K, [int(x) for x in img], name="reconstruct")


# ---------------------------------------------------------------------------
# mu and predicates


def mu(S: FinBIM) -> np.ndarray:
    """Class index of every element under the maximum idempotent-separating congruence."""

    def build():
        E = np.array(S.idempotents)
        fp = {}
        out = np.empty(S.n, dtype=np.int64)
        for a in S.elements():
            ai = S.inverse(a)
            left = S.mult[S.mult[ai, E], a]
            right = S.mult[S.mult[a, E], ai]
            key = (left.tobytes(), right.tobytes())
            out[a] = fp.setdefault(key, len(fp))
        out.setflags(write=False)
        return out

    return _memo(S, "mu", build)


def quotient_by_mu(S: FinBIM) -> tuple[FinBIM, Morphism]:
    cls = mu(S)
    k = int(cls.max()) + 1
    reps = np.zeros(k, dtype=np.int64)
    for a in reversed(range(S.n)):
        reps[cls[a]] = a
    mult = cls[S.mult[np.ix_(reps, reps)]]
    if not np.array_equal(cls[S.mult], mult[np.ix_(cls, cls)]):
        raise ConsistencyError("fingerprint relation is not a congruence")
    inv = cls[S.inv[reps]]
    Q = FinBIM(
        mult.astype(INDEX),
        inv.astype(INDEX),
        int(cls[S.zero]),
        int(cls[S.one]),
        labels=[S.label(int(r)) for r in reps],
        name=f"{S.name}/mu",
    )
    return Q, Morphism.from_table(S, Q, [int(c) for c in cls], name="mu")


def is_fundamental(S: FinBIM) -> bool:
    E = np.array(S.idempotents)
    centralizes = (S.mult[:, E] == S.mult[E, :].T).all(axis=1)
    return bool((~centralizes | S.is_idem).all())


def is_clifford(S: FinBIM) -> bool:
    E = np.array(S.idempotents)
    return bool((S.mult[E, :] == S.mult[:, E].T).all())


def is_zero_disjunctive(S: FinBIM) -> bool:
    E = S.idempotents
    for e in E:
        for f in E:
            if e != S.zero and e != f and S.leq(e, f):
                if not any(g != S.zero and S.leq(g, f) and S.mul(e, g) == S.zero for g in E):
                    return False
    return True


def is_dedekind_finite(S: FinBIM) -> bool:
    for e in S.idempotents:
        for f in S.idempotents:
            if f != e and S.leq(f, e) and S.d_related(e, f):
                return False
    return True


def is_directly_finite(S: FinBIM) -> bool:
    return all(e == S.one for e in S.idempotents if S.d_related(e, S.one))


def is_factorizable(S: FinBIM) -> bool:
    U = list(S.units)
    return bool(S.leq_matrix[:, U].any(axis=1).all())


def has_d_complementation(S: FinBIM) -> bool:
    E = S.idempotents
    for e in E:
        for f in E:
            if S.d_related(e, f) and not S.d_related(S.complement(e), S.complement(f)):
                return False
    return True


def is_d_cancellative(S: FinBIM) -> bool:
    E = S.idempotents
    pairs = [(e, f) for e in E for f in E if S.mul(e, f) == S.zero]
    sums = {p: S.idempotent_join(*p) for p in pairs}
    for (e1, f1), (e2, f2) in itertools.product(pairs, repeat=2):
        if S.d_related(e1, e2) and S.d_related(sums[e1, f1], sums[e2, f2]) and not S.d_related(f1, f2):
            return False
    return True


# ---------------------------------------------------------------------------
# infinitesimals and basic monoids


def infinitesimals(S: FinBIM) -> frozenset:
    ar = np.arange(S.n)
    sq = S.mult[ar, ar]
    return frozenset(int(a) for a in np.flatnonzero((sq == S.zero) & (ar != S.zero)))


def involution_of(S: FinBIM, a) -> int:
    """The involution ``a ∨ a^-1 ∨ complement(d(a) ∨ r(a))`` of an infinitesimal."""
    S._check(a)
    if a == S.zero or S.mul(a, a) != S.zero:
        raise DomainError(f"{a} is not an infinitesimal")
    outside = S.complement(S.idempotent_join(S.dom(a), S.ran(a)))
    g = S.join(S.join(a, S.inverse(a)), outside)
    if S.mul(g, g) != S.one or g == S.one:
        raise ConsistencyError("constructed element is not an involution")
    return g


def _peel(S, rem):
    inf = infinitesimals(S)
    parts = []
    while rem != S.zero:
        found = [x for x in S.atoms if x in inf and S.leq(x, rem)]
        if not found:
            return parts, rem
        x = min(found)
        parts.append(x)
        rem = S.complement(x, within=rem)
    return parts, rem


def basic_decomposition(S: FinBIM, a) -> tuple[int, list[int]]:
    """``a = φ(a) ∨ a_1 ∨ … ∨ a_m`` with the a_i infinitesimal atoms, peeled greedily."""
    S._check(a)
    if not _memo(S, "fundamental", lambda: is_fundamental(S)):
        raise PreconditionError(f"{S.name} is not fundamental; basic decomposition may not exist")
    e = S.fixed_point(a)
    parts, rem = _peel(S, S.complement(e, within=a))
    if rem != S.zero:
        raise ConsistencyError(f"no infinitesimal below the remainder {rem} of {a}")
    return e, parts


def is_basic(S: FinBIM) -> bool:
    inf = infinitesimals(S)
    for a in S.elements():
        rem = S.complement(S.fixed_point(a), within=a)
        below = [x for x in inf if S.leq(x, rem)]
        if S.join_all(below) != rem:
            return False
    return True


# ---------------------------------------------------------------------------
# additive ideals


def _ideal_top(S: FinBIM, e) -> int:
    """Largest element of the additive ideal of E(S) generated by ``e``."""
    cur = S.mask(e)
    cls = S._dclass[0]
    while True:
        hit = {cls[f] for f in S.idempotents if S.mask(f) & ~cur == 0}
        new = cur
        for f in S.idempotents:
            if cls[f] in hit:
                new |= S.mask(f)
        if new == cur:
            return S.idempotent_of_mask(cur)
        cur = new


def ideal_generated(S: FinBIM, e) -> frozenset:
    S._check(e)
    if not S.is_idempotent(e):
        raise DomainError(f"{e} is not an idempotent")
    top = _ideal_top(S, e)
    return frozenset(f for f in S.idempotents if S.leq(f, top))


def additive_ideals(S: FinBIM) -> list[frozenset]:
    """All additive ideals of E(S), smallest first."""

    def build():
        tops = {_ideal_top(S, e) for e in S.idempotents}
        ideals = [frozenset(f for f in S.idempotents if S.leq(f, t)) for t in tops]
        return sorted(ideals, key=lambda I: (len(I), sorted(I)))

    return _memo(S, "ideals", build)


def semigroup_ideal(S: FinBIM, F: Iterable[int]) -> frozenset:
    """The additive ideal of S matching an additive ideal F of E(S): ``{a : d(a) in F}``."""
    F = frozenset(F)
    return frozenset(a for a in S.elements() if S.dom(a) in F)


def is_zero_simplifying(S: FinBIM) -> bool:
    return S.zero != S.one and len(additive_ideals(S)) == 2


def pencil_leq(S: FinBIM, f, e) -> bool:
    S._check(f, e)
    for x in (f, e):
        if not S.is_idempotent(x):
            raise DomainError(f"{x} is not an idempotent")
        if x == S.zero:
            raise DomainError("pencils are defined between nonzero idempotents")
    return S.leq(f, _ideal_top(S, e))


# ---------------------------------------------------------------------------
# principal ideals and components


@dataclasses.dataclass(frozen=True)
class IdealPoset:
    classes: tuple  # D-classes of idempotents, as in FinBIM.d_classes
    leq: np.ndarray
    is_lattice: bool
    is_linear: bool

    def __len__(self):
        return len(self.classes)

    def meet(self, i, j):
        lows = [k for k in range(len(self.classes)) if self.leq[k, i] and self.leq[k, j]]
        top = [k for k in lows if all(self.leq[l, k] for l in lows)]
        return top[0] if top else None

    def join(self, i, j):
        ups = [k for k in range(len(self.classes)) if self.leq[i, k] and self.leq[j, k]]
        bottom = [k for k in ups if all(self.leq[k, l] for l in ups)]
        return bottom[0] if bottom else None


def principal_ideal_poset(S: FinBIM) -> IdealPoset:
    P = S.j_order
    k = len(P)
    linear = all(P[i, j] or P[j, i] for i in range(k) for j in range(k))
    draft = IdealPoset(S.d_classes, P, False, linear)
    lattice = all(draft.meet(i, j) is not None and draft.join(i, j) is not None for i in range(k) for j in range(k))
    return IdealPoset(S.d_classes, P, lattice, linear)


@dataclasses.dataclass(frozen=True)
class Component:
    size: int  # number of atomic idempotents
    group: GroupTable  # isotropy at the least atomic idempotent
    objects: tuple


def decompose(S: FinBIM) -> list[Component]:
    G = atom_groupoid(S)
    out = []
    for objs in G.components():
        base = min(objs)
        loops = sorted(G.isotropy(base))
        pos = {x: i for i, x in enumerate(loops)}
        mult = tuple(tuple(pos[G.compose(a, b)] for b in loops) for a in loops)
        inv = tuple(pos[S.inverse(a)] for a in loops)
        out.append(Component(len(objs), GroupTable(mult, inv, pos[base], name=f"isotropy({base})"), tuple(objs)))
    return out


# ---------------------------------------------------------------------------
# fundamental envelopes


def signature_set(S: FinBIM, g) -> frozenset:
    e, parts = basic_decomposition(S, g)
    return frozenset([S.dom(a) for a in parts] + [e])


def embed_into_fundamental(S: FinBIM, T: Iterable[int]) -> frozenset:
    """A finite fundamental subalgebra of ``S`` containing the subalgebra ``T``."""
    T = frozenset(int(t) for t in T)
    if not _memo(S, "basic", lambda: is_basic(S)):
        raise PreconditionError(f"{S.name} is not basic")
    if not is_subalgebra(S, T, meets=False):
        raise PreconditionError("T is not a subalgebra of S")
    units = [g for g in S.units if g in T]
    seeds = {e for e in T if S.is_idempotent(e)}
    for g in units:
        seeds |= signature_set(S, g)
    B = invariant_closure(S, seeds, units)
    out = join_closure(S, ge_submonoid(S, units, B))
    M, _ = submonoid(S, out, check=False)
    if not is_fundamental(M) or not T <= out:
        raise ConsistencyError("envelope is not a fundamental subalgebra containing T")
    return out


# ---------------------------------------------------------------------------
# reports

REPORT_FLAGS = (
    "fundamental",
    "factorizable",
    "basic",
    "clifford",
    "zero_simplifying",
    "dedekind_finite",
    "directly_finite",
    "d_cancellative",
    "d_complementation",
    "zero_disjunctive",
    "j_linear",
    "j_lattice",
)
REPORT_COUNTS = ("elements", "atoms", "idempotents", "units", "d_classes")


@dataclasses.dataclass(frozen=True)
class StructureReport:
    name: str
    fundamental: bool
    factorizable: bool
    basic: bool
    clifford: bool
    zero_simplifying: bool
    dedekind_finite: bool
    directly_finite: bool
    d_cancellative: bool
    d_complementation: bool
    zero_disjunctive: bool
    j_linear: bool
    j_lattice: bool
    elements: int
    atoms: int
    idempotents: int
    units: int
    d_classes: int
    components: tuple = ()  # (size, isotropy order) per component

    @classmethod
    def of(cls, S: FinBIM) -> "StructureReport":
        poset = principal_ideal_poset(S)
        return cls(
            name=S.name,
            fundamental=is_fundamental(S),
            factorizable=is_factorizable(S),
            basic=is_basic(S),
            clifford=is_clifford(S),
            zero_simplifying=is_zero_simplifying(S),
            dedekind_finite=is_dedekind_finite(S),
            directly_finite=is_directly_finite(S),
            d_cancellative=is_d_cancellative(S),
            d_complementation=has_d_complementation(S),
            zero_disjunctive=is_zero_disjunctive(S),
            j_linear=poset.is_linear,
            j_lattice=poset.is_lattice,
            elements=S.n,
            atoms=len(S.atoms),
            idempotents=len(S.idempotents),
            units=len(S.units),
            d_classes=len(S.d_classes),
            components=tuple((c.size, c.group.order) for c in decompose(S)),
        )

    def as_dict(self):
        out = {"name": self.name}
        out.update({k: getattr(self, k) for k in REPORT_FLAGS + REPORT_COUNTS})
        out["components"] = [{"size": n, "isotropy_order": g} for n, g in self.components]
        return out

    def to_text(self):
        lines = [f"name={self.name}"]
        lines += [f"{k}={str(getattr(self, k)).lower()}" for k in REPORT_FLAGS]
        lines += [f"{k}={getattr(self, k)}" for k in REPORT_COUNTS]
        lines.append("components=" + ",".join(f"{n}:{g}" for n, g in self.components))
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)

    def violated_implications(self):
        """Implications that must hold for every finite Boolean inverse monoid."""
        bad = []
        if self.basic != self.fundamental:
            bad.append("basic <=> fundamental")
        if not (self.factorizable == self.d_complementation == self.d_cancellative):
            bad.append("factorizable <=> d_complementation <=> d_cancellative")
        if self.d_cancellative and not self.dedekind_finite:
            bad.append("d_cancellative => dedekind_finite")
        if self.dedekind_finite and not self.directly_finite:
            bad.append("dedekind_finite => directly_finite")
        if self.j_linear and not self.j_lattice:
            bad.append("j_linear => j_lattice")
        return bad
