"""Finite groups given by Cayley tables."""

from __future__ import annotations

import dataclasses
import itertools

from .errors import DomainError, TableFormatError
from .finmon import _int_token, _tokens


@dataclasses.dataclass(frozen=True)
class GroupTable:
    mult: tuple
    inv: tuple
    id: int
    name: str = dataclasses.field(default="G", compare=False)

    def __post_init__(self):
        n = len(self.mult)
        if n == 0 or any(len(row) != n for row in self.mult) or len(self.inv) != n:
            raise DomainError("group table must be square with one inverse per element")
        problem = self.violation()
        if problem:
            raise DomainError(f"not a group: {problem}")

    @property
    def order(self):
        return len(self.mult)

    def elements(self):
        return range(self.order)

    def mul(self, g, h):
        return self.mult[g][h]

    def inverse(self, g):
        return self.inv[g]

    def violation(self):
        n, M, e = len(self.mult), self.mult, self.id
        if not 0 <= e < n:
            return ("identity out of range", e)
        for g in range(n):
            if not all(0 <= x < n for x in M[g]):
                return ("entry out of range", g)
            if M[e][g] != g or M[g][e] != g:
                return ("identity", g)
            if M[g][self.inv[g]] != e or M[self.inv[g]][g] != e:
                return ("inverse", g)
        for a, b, c in itertools.product(range(n), repeat=3):
            if M[M[a][b]][c] != M[a][M[b][c]]:
                return ("associativity", a, b, c)
        return None

    @classmethod
    def trivial(cls):
        return cls(((0,),), (0,), 0, name="trivial")

    @classmethod
    def cyclic(cls, k):
        if k < 1:
            raise DomainError("cyclic group order must be positive")
        mult = tuple(tuple((a + b) % k for b in range(k)) for a in range(k))
        inv = tuple((-a) % k for a in range(k))
        return cls(mult, inv, 0, name=f"cyclic({k})")

    def is_isomorphic(self, other: "GroupTable") -> bool:
        """Brute-force isomorphism test; fine for the small isotropy groups seen here."""
        n = self.order
        if n != other.order:
            return False
        others = [g for g in other.elements() if g != other.id]
        mine = [g for g in self.elements() if g != self.id]
        for perm in itertools.permutations(others):
            f = {self.id: other.id, **dict(zip(mine, perm))}
            if all(f[self.mul(a, b)] == other.mul(f[a], f[b]) for a in range(n) for b in range(n)):
                return True
        return False


def parse_group(text: str, name="table") -> GroupTable:
    """Parse ``group <n> id=<i>`` followed by the Cayley table and inverse line."""
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise TableFormatError("empty input", 1, 1)
    head = _tokens(lines[0])
    if len(head) != 3 or head[0][0] != "group" or not head[2][0].startswith("id="):
        raise TableFormatError("header must be 'group <n> id=<i>'", 1, 1)
    n = _int_token(head[1][0], 1, head[1][1])
    ident = _int_token(head[2][0][3:], 1, head[2][1] + 3)
    if n < 1:
        raise TableFormatError("group order must be positive", 1, head[1][1])
    if len(lines) != n + 2:
        raise TableFormatError(f"expected {n + 1} table lines, found {len(lines) - 1}", min(len(lines), n + 2) + 1, 1)
    rows = []
    for i, raw in enumerate(lines[1:]):
        toks = _tokens(raw)
        if len(toks) != n:
            raise TableFormatError(f"expected {n} entries, found {len(toks)}", i + 2, 1)
        row = []
        for tok, col in toks:
            v = _int_token(tok, i + 2, col)
            if not 0 <= v < n:
                raise TableFormatError(f"index {v} out of range", i + 2, col)
            row.append(v)
        rows.append(tuple(row))
    if not 0 <= ident < n:
        raise TableFormatError(f"id={ident} out of range", 1, head[2][1])
    return GroupTable(tuple(rows[:n]), rows[n], ident, name=name)


def format_group(G: GroupTable) -> str:
    lines = [f"group {G.order} id={G.id}"]
    lines += [" ".join(map(str, row)) for row in G.mult]
    lines.append(" ".join(map(str, G.inv)))
    return "\n".join(lines) + "\n"
