"""Finite semigroups as dense multiplication tables, congruences, inverses.

Conventions: elements are the indices 0..n-1, ``table[a][b]`` is the product
a*b (row = left factor).  A monoid identity is declared data, never inferred.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    KindError,
    LoadError,
    MalformedTableError,
    SizeError,
    TheoremViolationError,
)

RIGHT = "right"
TWO_SIDED = "two-sided"


def check_associativity(table):
    """Return (True, None) or (False, first violating triple (a, b, c)).

    Raises MalformedTableError for non-square tables or out-of-range entries,
    so the triple scan only ever sees valid indices.
    """
    n = len(table)
    for row in table:
        if len(row) != n:
            raise MalformedTableError(f"table is not square: row of length {len(row)}, expected {n}")
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise MalformedTableError(f"entry {v!r} out of range 0..{n - 1}")
    for a in range(n):
        ta = table[a]
        for b in range(n):
            ab = ta[b]
            tb = table[b]
            for c in range(n):
                if table[ab][c] != ta[tb[c]]:
                    return False, (a, b, c)
    return True, None


@dataclass(frozen=True)
class FinSemigroup:
    """A finite semigroup given by its full multiplication table."""

    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None
    name: str = ""
    identity: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        ok, triple = check_associativity(self.table)
        if not ok:
            raise MalformedTableError(f"not associative at {triple}")
        n = len(self.table)
        if self.names is not None and len(self.names) != n:
            raise MalformedTableError(f"{len(self.names)} labels for {n} elements")
        e = self.identity
        if e is not None:
            if not 0 <= e < n:
                raise MalformedTableError(f"identity {e} out of range")
            for x in range(n):
                if self.table[e][x] != x or self.table[x][e] != x:
                    raise MalformedTableError(f"declared identity {e} is not neutral at {x}")

    @property
    def n(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def elements(self):
        return range(self.n)

    def label(self, x):
        return self.names[x] if self.names else str(x)


def is_commutative(s: FinSemigroup) -> bool:
    t = s.table
    return all(t[a][b] == t[b][a] for a in range(s.n) for b in range(a + 1, s.n))


def idempotents(s: FinSemigroup) -> tuple[int, ...]:
    return tuple(x for x in range(s.n) if s.table[x][x] == x)


def is_semilattice(s: FinSemigroup) -> bool:
    return is_commutative(s) and len(idempotents(s)) == s.n


@dataclass(frozen=True)
class NotInverse:
    """Witness that a semigroup is not inverse: an element together with its
    number of generalized inverses (0 or >= 2)."""

    witness: int
    inverse_count: int


@dataclass(frozen=True)
class InverseStructure:
    """An inverse semigroup: the base table plus the unique inverse map."""

    base: FinSemigroup
    inv: tuple[int, ...]
    idempotents: tuple[int, ...]

    @property
    def n(self):
        return self.base.n

    def mul(self, a, b):
        return self.base.table[a][b]


def inverse_structure(s: FinSemigroup):
    """Return the InverseStructure of s, or NotInverse with a witness element
    having zero or several generalized inverses."""
    t = s.table
    inv = []
    for x in range(s.n):
        found = [y for y in range(s.n) if t[t[x][y]][x] == x and t[t[y][x]][y] == y]
        if len(found) != 1:
            return NotInverse(witness=x, inverse_count=len(found))
        inv.append(found[0])
    return InverseStructure(base=s, inv=tuple(inv), idempotents=idempotents(s))


def is_clifford(inv: InverseStructure) -> bool:
    """True iff x*x^-1 == x^-1*x for every x."""
    t = inv.base.table
    return all(t[x][inv.inv[x]] == t[inv.inv[x]][x] for x in range(inv.n))


def natural_order(s: FinSemigroup, e: int, f: int) -> bool:
    """e <= f in the natural partial order on idempotents: e*f == e."""
    t = s.table
    if t[e][e] != e:
        raise DomainError(f"{e} is not idempotent")
    if t[f][f] != f:
        raise DomainError(f"{f} is not idempotent")
    return t[e][f] == e


def maximal_subgroup(inv: InverseStructure, e: int) -> tuple[int, ...]:
    """H_e = all x with x*x^-1 == e == x^-1*x; verified closed under product
    and inverse."""
    t = inv.base.table
    if t[e][e] != e:
        raise DomainError(f"{e} is not idempotent")
    h = tuple(x for x in range(inv.n) if t[x][inv.inv[x]] == e and t[inv.inv[x]][x] == e)
    members = set(h)
    for x in h:
        if inv.inv[x] not in members:
            raise TheoremViolationError(f"H_{e} not closed under inverse at {x}")
        for y in h:
            if t[x][y] not in members:
                raise TheoremViolationError(f"H_{e} not closed under product at ({x}, {y})")
    return h


def adjoin_zero(s: FinSemigroup) -> FinSemigroup:
    """Add a new absorbing element at index n."""
    n = s.n
    rows = [tuple(row) + (n,) for row in s.table]
    rows.append(tuple([n] * (n + 1)))
    names = (s.names + ("0",)) if s.names else None
    return FinSemigroup(tuple(rows), names=names, name=s.name + "^0" if s.name else "", identity=s.identity)


def adjoin_identity(s: FinSemigroup) -> FinSemigroup:
    """Add a new neutral element at index n and declare it as the identity."""
    n = s.n
    rows = [tuple(row) + (i,) for i, row in enumerate(s.table)]
    rows.append(tuple(range(n + 1)))
    names = (s.names + ("1",)) if s.names else None
    return FinSemigroup(tuple(rows), names=names, name=s.name + "^1" if s.name else "", identity=n)


def canonical_classes(vec) -> tuple[int, ...]:
    """Relabel a class-id vector so ids appear in first-occurrence order."""
    seen = {}
    out = []
    for v in vec:
        if v not in seen:
            seen[v] = len(seen)
        out.append(seen[v])
    return tuple(out)


@dataclass(frozen=True)
class Congruence:
    """A right or two-sided congruence, stored as a canonical partition.

    ``classes[x]`` is the class id of x; ids are numbered by first occurrence.
    Stability for the declared kind is checked on construction.
    """

    base: FinSemigroup
    kind: str
    classes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if self.kind not in (RIGHT, TWO_SIDED):
            raise KindError(f"unknown congruence kind {self.kind!r}")
        if len(self.classes) != self.base.n:
            raise MalformedTableError("class vector length differs from carrier size")
        if self.classes != canonical_classes(self.classes):
            raise MalformedTableError("class vector is not in canonical first-occurrence form")
        t = self.base.table
        c = self.classes
        n = self.base.n
        # comparing every member against its block representative covers all
        # same-class pairs by transitivity and keeps validation quadratic
        blocks = [[] for _ in range(max(c) + 1 if c else 0)]
        for x, cx in enumerate(c):
            blocks[cx].append(x)
        for block in blocks:
            rep = block[0]
            want = tuple(c[v] for v in t[rep])
            for x in block[1:]:
                got = tuple(c[v] for v in t[x])
                if got != want:
                    s = next(i for i in range(n) if got[i] != want[i])
                    raise KindError(f"not right-stable: ({rep},{x}) * {s}")
            if self.kind == TWO_SIDED:
                want = tuple(c[t[s][rep]] for s in range(n))
                for x in block[1:]:
                    got = tuple(c[t[s][x]] for s in range(n))
                    if got != want:
                        s = next(i for i in range(n) if got[i] != want[i])
                        raise KindError(f"not left-stable: {s} * ({rep},{x})")

    @property
    def num_classes(self):
        return max(self.classes) + 1 if self.classes else 0

    def same(self, a, b):
        return self.classes[a] == self.classes[b]

    def class_of(self, x) -> tuple[int, ...]:
        cx = self.classes[x]
        return tuple(y for y in range(self.base.n) if self.classes[y] == cx)

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.num_classes)]
        for x, cx in enumerate(self.classes):
            out[cx].append(x)
        return tuple(tuple(b) for b in out)

    def pairs(self):
        n = self.base.n
        return tuple((a, b) for a in range(n) for b in range(a + 1, n) if self.classes[a] == self.classes[b])


def diagonal(s: FinSemigroup, kind=RIGHT) -> Congruence:
    return Congruence(s, kind, tuple(range(s.n)))


def universal(s: FinSemigroup, kind=RIGHT) -> Congruence:
    return Congruence(s, kind, tuple([0] * s.n))


class _UnionFind:
    """Union-find with path halving; roots are tracked as the minimum element
    so representatives are deterministic."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def congruence_closure(s: FinSemigroup, seeds, kind=RIGHT, record_chain=False):
    """Smallest congruence of the given kind containing the seed pairs.

    Worklist closure: merging (a, b) enqueues (a*m, b*m) for every multiplier
    m in ascending order (and (m*a, m*b) for the two-sided kind).  With
    ``record_chain`` the result is (Congruence, chain) where each chain step
    is ((a, b), multiplier, (a*m, b*m)) recorded at the moment the derived
    pair still joins two distinct classes; replaying the steps in order
    rebuilds the same partition.
    """
    if kind not in (RIGHT, TWO_SIDED):
        raise KindError(f"unknown congruence kind {kind!r}")
    n = s.n
    t = s.table
    uf = _UnionFind(n)
    chain = []
    work = deque()
    for a, b in seeds:
        if not (0 <= a < n and 0 <= b < n):
            raise DomainError(f"seed pair ({a}, {b}) out of range")
        work.append((a, b))
    while work:
        a, b = work.popleft()
        if not uf.union(a, b):
            continue
        for m in range(n):
            for da, db in ((t[a][m], t[b][m]),) if kind == RIGHT else ((t[a][m], t[b][m]), (t[m][a], t[m][b])):
                if da != db and uf.find(da) != uf.find(db):
                    work.append((da, db))
                    if record_chain:
                        chain.append(((a, b), m, (da, db)))
    cong = Congruence(s, kind, canonical_classes([uf.find(x) for x in range(n)]))
    if record_chain:
        return cong, tuple(chain)
    return cong


def congruence_meet(r1: Congruence, r2: Congruence) -> Congruence:
    """Intersection of two congruences over the same base and kind."""
    if r1.base is not r2.base and r1.base != r2.base:
        raise DomainError("congruences live on different semigroups")
    if r1.kind != r2.kind:
        raise KindError(f"kind mismatch: {r1.kind} vs {r2.kind}")
    combo = [(r1.classes[x], r2.classes[x]) for x in range(r1.base.n)]
    return Congruence(r1.base, r1.kind, canonical_classes(combo))


def congruence_join(r1: Congruence, r2: Congruence) -> Congruence:
    """Join: transitive closure of the union of the two partitions.  The join
    of two congruences of the same kind is again one."""
    if r1.kind != r2.kind:
        raise KindError(f"kind mismatch: {r1.kind} vs {r2.kind}")
    n = r1.base.n
    uf = _UnionFind(n)
    for rho in (r1, r2):
        rep = {}
        for x in range(n):
            c = rho.classes[x]
            if c in rep:
                uf.union(rep[c], x)
            else:
                rep[c] = x
    return Congruence(r1.base, r1.kind, canonical_classes([uf.find(x) for x in range(n)]))


def enumerate_congruences(s: FinSemigroup, kind=RIGHT, bound=10, limit=20000) -> list[Congruence]:
    """All congruences of the given kind, in lexicographic class-vector order.

    Breadth-first search from the diagonal by principal extensions: closing
    rho together with one extra pair steps to a cover-or-above element, and
    every congruence is reachable this way.  Lattices larger than ``limit``
    abort with SizeError; right-zero blocks make every partition stable, so
    the count can reach Bell-number scale even under the carrier bound.
    """
    if s.n > bound:
        raise SizeError(f"carrier size {s.n} exceeds enumeration bound {bound}")
    start = diagonal(s, kind)
    found = {start.classes: start}
    frontier = [start]
    while frontier:
        fresh = []
        for rho in frontier:
            merges = [(blk[0], x) for blk in rho.blocks() for x in blk[1:]]
            for a in range(s.n):
                for b in range(a + 1, s.n):
                    if rho.classes[a] == rho.classes[b]:
                        continue
                    tau = congruence_closure(s, merges + [(a, b)], kind)
                    if tau.classes not in found:
                        if len(found) >= limit:
                            raise SizeError(f"congruence lattice exceeded {limit} members")
                        found[tau.classes] = tau
                        fresh.append(tau)
        frontier = fresh
    return [found[k] for k in sorted(found)]


def as_two_sided(rho: Congruence) -> Congruence:
    """Re-kind a right congruence as two-sided; validates left stability."""
    return Congruence(rho.base, TWO_SIDED, rho.classes)


def quotient(s: FinSemigroup, rho: Congruence):
    """Quotient semigroup and the projection vector; needs a two-sided kind."""
    if rho.kind != TWO_SIDED:
        raise KindError("quotient needs a two-sided congruence")
    if rho.base != s:
        raise DomainError("congruence lives on a different semigroup")
    k = rho.num_classes
    reps = [None] * k
    for x in range(s.n):
        if reps[rho.classes[x]] is None:
            reps[rho.classes[x]] = x
    table = tuple(
        tuple(rho.classes[s.table[reps[a]][reps[b]]] for b in range(k)) for a in range(k)
    )
    ident = rho.classes[s.identity] if s.identity is not None else None
    q = FinSemigroup(table, name=(s.name + "/rho") if s.name else "", identity=ident)
    return q, rho.classes


def is_vagner_preston(inv: InverseStructure, rho: Congruence) -> bool:
    """Right-congruence test on an inverse monoid: for each s, either every t
    in [s] has the identity in [t*t^-1], or [s*t] == [s] for every t."""
    m = inv.base
    if m.identity is None:
        raise DomainError("needs a designated identity element")
    t = m.table
    c = rho.classes
    one = c[m.identity]
    for x in range(m.n):
        cls = [y for y in range(m.n) if c[y] == c[x]]
        if all(c[t[y][inv.inv[y]]] == one for y in cls):
            continue
        if all(c[t[x][y]] == c[x] for y in range(m.n)):
            continue
        return False
    return True


@dataclass(frozen=True)
class VPClassification:
    """Outcome of classifying a quotient by a Vagner-Preston congruence."""

    kind: str  # "group" | "group-with-zero"
    quotient: FinSemigroup
    projection: tuple[int, ...]
    group_part: tuple[int, ...]
    zero_class: int | None


def _is_group(s: FinSemigroup, members) -> bool:
    members = list(members)
    idem = [e for e in members if s.table[e][e] == e]
    if len(idem) != 1:
        return False
    e = idem[0]
    for x in members:
        if s.table[e][x] != x or s.table[x][e] != x:
            return False
        if not any(s.table[x][y] == e and s.table[y][x] == e for y in members):
            return False
    mset = set(members)
    return all(s.table[x][y] in mset for x in members for y in members)


def classify_vp_quotient(inv: InverseStructure, rho: Congruence) -> VPClassification:
    """Classify M/rho as a group or a group with adjoined zero.

    Preconditions: M commutative inverse monoid, rho a Vagner-Preston right
    congruence.  On a commutative semigroup every right congruence is two
    sided, so the quotient is well defined.  Any other outcome raises
    TheoremViolationError.
    """
    m = inv.base
    if not is_commutative(m):
        raise DomainError("classification needs a commutative monoid")
    if not is_vagner_preston(inv, rho):
        raise DomainError("congruence is not Vagner-Preston")
    q, proj = quotient(m, as_two_sided(rho))
    zeros = [z for z in range(q.n) if all(q.table[z][x] == z and q.table[x][z] == z for x in range(q.n))]
    if zeros and q.n > 1:
        z = zeros[0]
        rest = [x for x in range(q.n) if x != z]
        if _is_group(q, rest):
            return VPClassification("group-with-zero", q, proj, tuple(rest), z)
        raise TheoremViolationError("quotient has a zero but the rest is not a group")
    if _is_group(q, range(q.n)):
        return VPClassification("group", q, proj, tuple(range(q.n)), None)
    raise TheoremViolationError("quotient is neither a group nor a group with zero")


def subsemigroup(s: FinSemigroup, subset):
    """Relabelled table on a product-closed subset; returns (semigroup, the
    element list in table order)."""
    subset = sorted(subset)
    pos = {x: i for i, x in enumerate(subset)}
    for a in subset:
        for b in subset:
            if s.table[a][b] not in pos:
                raise DomainError(f"subset not closed: {a}*{b} escapes")
    table = tuple(tuple(pos[s.table[a][b]] for b in subset) for a in subset)
    names = tuple(s.label(x) for x in subset) if s.names else None
    ident = pos.get(s.identity) if s.identity is not None and s.identity in pos else None
    return FinSemigroup(table, names=names, identity=ident), tuple(subset)


# -- file format -------------------------------------------------------------

def parse_semigroup(doc) -> FinSemigroup:
    """Build a verified FinSemigroup from a JSON document; first violation
    fails the load."""
    if not isinstance(doc, dict):
        raise LoadError("semigroup document must be an object")
    table = doc.get("table")
    if not isinstance(table, list) or not table:
        raise LoadError("missing or empty 'table'")
    try:
        ok, triple = check_associativity([tuple(r) for r in table])
    except (MalformedTableError, TypeError) as exc:
        raise LoadError(str(exc)) from exc
    if not ok:
        raise LoadError(f"not associative at {triple}")
    names = doc.get("elements")
    if names is not None:
        if not isinstance(names, list) or len(names) != len(table):
            raise LoadError("'elements' must label every row")
        names = tuple(str(x) for x in names)
    identity = doc.get("identity")
    if identity is not None and not isinstance(identity, int):
        raise LoadError("'identity' must be an index or null")
    try:
        s = FinSemigroup(tuple(tuple(r) for r in table), names=names,
                         name=str(doc.get("name", "")), identity=identity)
    except MalformedTableError as exc:
        raise LoadError(str(exc)) from exc
    declared = doc.get("inverse")
    if declared is not None:
        got = inverse_structure(s)
        if isinstance(got, NotInverse):
            raise LoadError(f"declared inverse but element {got.witness} has {got.inverse_count} inverses")
        if tuple(declared) != got.inv:
            raise LoadError("declared inverse map disagrees with the computed one")
    return s


def semigroup_doc(s: FinSemigroup, include_inverse=False) -> dict:
    doc = {
        "schema": 1,
        "name": s.name,
        "elements": list(s.names) if s.names else [str(i) for i in range(s.n)],
        "table": [list(r) for r in s.table],
        "identity": s.identity,
        "inverse": None,
    }
    if include_inverse:
        inv = inverse_structure(s)
        if isinstance(inv, InverseStructure):
            doc["inverse"] = list(inv.inv)
    return doc


def load_semigroup(path) -> FinSemigroup:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError(f"invalid JSON: {exc}") from exc
    return parse_semigroup(doc)
