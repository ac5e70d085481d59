"""Finite groups given by Cayley tables and finitely generated abelian groups.

Group elements are plain hashable, orderable Python values: ``int`` indices for
Cayley-table groups, exponent tuples ``(a_1..a_l, b_1..b_r)`` for
``Z^l x Z/t_1 x ... x Z/t_r``.  Groups are immutable and compare by structure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import GroupMismatch, NotAGroup, UnknownGroupElement

MAX_VERIFIED_ORDER = 64


class CayleyGroup:
    """A finite group from its multiplication table; index 0 is the identity."""

    is_finite = True

    def __init__(self, table, name=None, verify=True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        m = len(self.table)
        self.name = name
        if m == 0 or any(len(row) != m for row in self.table):
            raise NotAGroup("Cayley table must be a nonempty square")
        if any(not 0 <= v < m for row in self.table for v in row):
            raise NotAGroup("Cayley table entries out of range")
        if any(self.table[0][g] != g or self.table[g][0] != g for g in range(m)):
            raise NotAGroup("index 0 must be the identity")
        inverses = []
        for g in range(m):
            row = self.table[g]
            try:
                h = row.index(0)
            except ValueError:
                raise NotAGroup(f"element {g} has no inverse") from None
            if self.table[h][g] != 0:
                raise NotAGroup(f"element {g} has no two-sided inverse")
            inverses.append(h)
        self._inv = tuple(inverses)
        if verify and m <= MAX_VERIFIED_ORDER:
            t = self.table
            for a in range(m):
                ta = t[a]
                for b in range(m):
                    tab = t[ta[b]]
                    tb = t[b]
                    for c in range(m):
                        if tab[c] != ta[tb[c]]:
                            raise NotAGroup(f"not associative at ({a},{b},{c})")

    identity = 0

    @property
    def order(self):
        return len(self.table)

    @property
    def is_abelian(self):
        t = self.table
        m = len(t)
        return all(t[a][b] == t[b][a] for a in range(m) for b in range(a + 1, m))

    @property
    def torsion_orders(self):
        return (self.order,)

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self._inv[g]

    def elements(self):
        return range(len(self.table))

    def check(self, g):
        if not isinstance(g, int) or not 0 <= g < len(self.table):
            raise UnknownGroupElement(f"{g!r} is not an element of a group of order {len(self.table)}")
        return g

    def parse_element(self, text: str):
        try:
            return self.check(int(text.strip()))
        except ValueError:
            raise UnknownGroupElement(f"bad group element {text!r}") from None

    def format_element(self, g) -> str:
        return str(g)

    def to_json(self):
        if self.name:
            return self.name
        return {"cayley": [list(r) for r in self.table]}

    def __eq__(self, other):
        return isinstance(other, CayleyGroup) and other.table == self.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return self.name or f"CayleyGroup(order={self.order})"


class AbelianGroup:
    """``Z^rank x Z/t_1 x ... x Z/t_r`` with elements in normal form."""

    def __init__(self, rank: int = 0, factors=()):
        self.rank = int(rank)
        self.factors = tuple(int(t) for t in factors)
        if self.rank < 0 or any(t < 2 for t in self.factors):
            raise NotAGroup("free rank must be >= 0 and invariant factors >= 2")
        self.identity = (0,) * (self.rank + len(self.factors))

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def order(self):
        if self.rank:
            return None
        n = 1
        for t in self.factors:
            n *= t
        return n

    is_abelian = True

    @property
    def torsion_orders(self):
        return self.factors

    def mul(self, g, h):
        out = [a + b for a, b in zip(g, h)]
        for j, t in enumerate(self.factors):
            out[self.rank + j] %= t
        return tuple(out)

    def inv(self, g):
        out = [-a for a in g]
        for j, t in enumerate(self.factors):
            out[self.rank + j] %= t
        return tuple(out)

    def elements(self):
        if self.rank:
            raise ValueError("infinite group")
        return itertools.product(*(range(t) for t in self.factors))

    def check(self, g):
        if isinstance(g, int):
            g = (g,)
        g = tuple(g)
        if len(g) != len(self.identity):
            raise UnknownGroupElement(f"{g!r} has wrong length for {self!r}")
        for j, t in enumerate(self.factors):
            if not 0 <= g[self.rank + j] < t:
                raise UnknownGroupElement(f"{g!r}: torsion coordinate out of range for {self!r}")
        return g

    def parse_element(self, text: str):
        t = text.strip().strip("()")
        try:
            parts = tuple(int(p) for p in t.split(",") if p.strip() != "")
        except ValueError:
            raise UnknownGroupElement(f"bad group element {text!r}") from None
        return self.check(parts)

    def format_element(self, g) -> str:
        if len(g) == 1:
            return str(g[0])
        return "(" + ",".join(str(a) for a in g) + ")"

    def to_json(self):
        return {"abelian": {"rank": self.rank, "factors": list(self.factors)}}

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and (other.rank, other.factors) == (self.rank, self.factors)

    def __hash__(self):
        return hash(("ab", self.rank, self.factors))

    def __repr__(self):
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.factors]
        return " x ".join(parts) or "1"


def cyclic_group(n: int) -> AbelianGroup:
    if n < 1:
        raise NotAGroup("cyclic group order must be >= 1")
    # Z/1 is the trivial group
    return AbelianGroup(0, (n,) if n > 1 else ())


def _perm_group(generators, name):
    n = len(generators[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = tuple(p[g[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = [ident] + sorted(seen - {ident})
    index = {p: i for i, p in enumerate(elems)}
    # (p*q)(i) = p(q(i))
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in elems] for p in elems]
    return CayleyGroup(table, name=name)


def symmetric_group(n: int) -> CayleyGroup:
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return _perm_group(gens, f"S{n}")


def dihedral_group(n: int) -> CayleyGroup:
    """Symmetries of the regular n-gon (order 2n)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group([rot, ref], f"D{n}")


def group_from_spec(spec):
    """Build a group from a JSON-style spec or a short name.

    Accepted: ``"S3"``, ``"D4"``, ``"Z/5"``, ``"Z^2xZ/3"``, ``{"cayley": table}``,
    ``{"abelian": {"rank": l, "factors": [...]}}``.
    """
    if isinstance(spec, (AbelianGroup, CayleyGroup)):
        return spec
    if isinstance(spec, dict):
        if "cayley" in spec:
            return CayleyGroup(spec["cayley"], name=spec.get("name"))
        if "abelian" in spec:
            a = spec["abelian"]
            return AbelianGroup(a.get("rank", 0), a.get("factors", ()))
        raise NotAGroup(f"unrecognized group spec {spec!r}")
    text = str(spec).replace(" ", "")
    if text[:1] in "SD" and text[1:].isdigit():
        n = int(text[1:])
        return symmetric_group(n) if text[0] == "S" else dihedral_group(n)
    rank, factors = 0, []
    for part in text.replace("×", "x").split("x"):
        if part.startswith("Z^"):
            rank += int(part[2:])
        elif part == "Z":
            rank += 1
        elif part.startswith("Z/"):
            factors.append(int(part[2:]))
        elif part == "1":
            continue
        else:
            raise NotAGroup(f"unrecognized group spec {spec!r}")
    return AbelianGroup(rank, factors)


def parse_cayley_text(text: str) -> CayleyGroup:
    """Plain text table: first line the order m, then m lines of m indices."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise NotAGroup("empty Cayley table file")
    try:
        m = int(lines[0][0])
        rows = [[int(v) for v in ln] for ln in lines[1:]]
    except ValueError:
        raise NotAGroup("Cayley table must contain integers only") from None
    if len(rows) != m:
        raise NotAGroup(f"expected {m} rows, found {len(rows)}")
    return CayleyGroup(rows)


def format_cayley_text(group: CayleyGroup) -> str:
    lines = [str(group.order)] + [" ".join(str(v) for v in row) for row in group.table]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GroupSet:
    group: object
    elements: tuple

    def __post_init__(self):
        elems = sorted({self.group.check(g) for g in self.elements})
        object.__setattr__(self, "elements", tuple(elems))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)


def _same_group(X: GroupSet, Y: GroupSet):
    if X.group != Y.group:
        raise GroupMismatch(f"{X.group!r} vs {Y.group!r}")


def product_set(X: GroupSet, Y: GroupSet) -> GroupSet:
    _same_group(X, Y)
    G = X.group
    return GroupSet(G, tuple({G.mul(x, y) for x in X for y in Y}))


def product_set_n(sets) -> GroupSet:
    out = sets[0]
    for s in sets[1:]:
        out = product_set(out, s)
    return out


def set_stabilizer(X: GroupSet) -> GroupSet:
    """``{g : gX = X}``; candidates are restricted to ``X x0^-1``."""
    G = X.group
    if not X.elements:
        return GroupSet(G, (G.identity,))
    x0 = X.elements[0]
    target = set(X.elements)
    x0inv = G.inv(x0)
    stab = []
    for x in X.elements:
        g = G.mul(x, x0inv)
        if all(G.mul(g, y) in target for y in X.elements):
            stab.append(g)
    return GroupSet(G, tuple(stab))
