"""Finite topological spaces, window truncations of countable spaces, and the
topological predicates of the workbench.

Everything here is a finite analog: a check passing on a truncated instance
verifies the finite forcing/neighborhood argument at that window, not the
corresponding statement about the infinite space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    RIGHT,
    Congruence,
    FinSemigroup,
    InverseStructure,
    congruence_closure,
    enumerate_congruences,
    inverse_structure,
    is_semilattice,
    parse_semigroup,
    semigroup_doc,
)
from .errors import DomainError, KindError, LoadError, SizeError


def mask_of(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def points_of(mask) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def is_topology(n, opens) -> tuple[bool, str | None]:
    """Check a family of subset bitmasks for the finite topology axioms."""
    full = (1 << n) - 1
    opens = set(opens)
    for o in opens:
        if o < 0 or o > full:
            return False, f"subset {o} is not within the {n}-point carrier"
    if 0 not in opens:
        return False, "the empty set is missing"
    if full not in opens:
        return False, "the carrier is missing"
    if len(opens) == (1 << n):
        return True, None
    for a in opens:
        for b in opens:
            if (a | b) not in opens:
                return False, f"union of {points_of(a)} and {points_of(b)} is missing"
            if (a & b) not in opens:
                return False, f"intersection of {points_of(a)} and {points_of(b)} is missing"
    return True, None


@dataclass(frozen=True)
class TopSpec:
    """A finite topology: explicit open-set family over an n-point carrier,
    opens stored as bitmasks and verified closed under union and
    intersection."""

    n: int
    opens: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "opens", frozenset(self.opens))
        ok, why = is_topology(self.n, self.opens)
        if not ok:
            raise DomainError(f"not a topology: {why}")

    @staticmethod
    def discrete(n) -> "TopSpec":
        if n > 20:
            raise SizeError(f"will not materialize 2^{n} open sets; "
                            "audits against a discrete source can pass None instead")
        return TopSpec(n, frozenset(range(1 << n)))

    @staticmethod
    def indiscrete(n) -> "TopSpec":
        return TopSpec(n, frozenset({0, (1 << n) - 1}))

    @staticmethod
    def generated(n, subbasis) -> "TopSpec":
        """Close a subbasis under finite intersection and arbitrary union."""
        full = (1 << n) - 1
        sets = {full} | {s & full for s in subbasis}
        grew = True
        while grew:
            grew = False
            for a in list(sets):
                for b in list(sets):
                    for c in (a & b, a | b):
                        if c not in sets:
                            sets.add(c)
                            grew = True
        sets.add(0)
        return TopSpec(n, frozenset(sets))

    def opens_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.opens))

    def is_open(self, mask) -> bool:
        return mask in self.opens

    def interior(self, mask) -> int:
        out = 0
        for o in self.opens:
            if o & ~mask == 0:
                out |= o
        return out

    def closure_of(self, mask) -> int:
        full = (1 << self.n) - 1
        return full ^ self.interior(full ^ mask)

    def is_clopen(self, mask) -> bool:
        full = (1 << self.n) - 1
        return mask in self.opens and (full ^ mask) in self.opens

    def min_nbhd(self, x) -> int:
        """Smallest open set containing x; exists because the open family is
        finite and intersection-closed."""
        out = (1 << self.n) - 1
        bit = 1 << x
        for o in self.opens:
            if o & bit:
                out &= o
        return out

    def neighborhoods(self, x) -> tuple[int, ...]:
        bit = 1 << x
        return tuple(o for o in self.opens_sorted() if o & bit)

    def isolated_points(self) -> int:
        out = 0
        for x in range(self.n):
            if self.min_nbhd(x) == 1 << x:
                out |= 1 << x
        return out


def top_spec_doc(spec: TopSpec) -> dict:
    return {"n": spec.n, "opens": [list(points_of(o)) for o in spec.opens_sorted()]}


def top_spec_from_doc(doc) -> TopSpec:
    if not isinstance(doc, dict) or "n" not in doc or "opens" not in doc:
        raise LoadError("topology document needs 'n' and 'opens'")
    try:
        return TopSpec(int(doc["n"]), frozenset(mask_of(o) for o in doc["opens"]))
    except DomainError as e:
        raise LoadError(str(e)) from e


def up_set(s: FinSemigroup, x) -> int:
    """The upper cone of x in the natural semilattice order (y is above x
    when x*y = x)."""
    if not is_semilattice(s):
        raise DomainError("natural order requires a semilattice")
    out = 0
    for y in range(s.n):
        if s.mul(x, y) == x:
            out |= 1 << y
    return out


def continuity_check(s: FinSemigroup, top: TopSpec) -> tuple[bool, tuple | None]:
    """Exhaustive multiplication continuity on a finite space.

    Each point has a smallest open neighborhood N, so continuity at (a, b)
    is equivalent to N_a * N_b being inside N_ab.  Returns the
    lexicographically least witness (a, b, c, d) with c in N_a, d in N_b and
    c*d outside N_ab when the check fails.
    """
    if s.n != top.n:
        raise DomainError("semigroup and topology carriers differ in size")
    nb = [top.min_nbhd(x) for x in range(s.n)]
    for a in range(s.n):
        for b in range(s.n):
            target = nb[s.mul(a, b)]
            for c in points_of(nb[a]):
                for d in points_of(nb[b]):
                    if not (target >> s.mul(c, d)) & 1:
                        return False, (a, b, c, d)
    return True, None


@dataclass(frozen=True)
class TopSemigroup:
    """A finite semigroup with a verified-continuous finite topology."""

    sem: FinSemigroup
    top: TopSpec
    name: str = ""

    def __post_init__(self):
        ok, witness = continuity_check(self.sem, self.top)
        if not ok:
            a, b, c, d = witness
            raise DomainError(
                f"multiplication is not continuous at ({a},{b}): "
                f"{c}*{d}={self.sem.mul(c, d)} escapes the minimal neighborhood of {a}*{b}"
            )


def uparrow(ts: TopSemigroup, x) -> int:
    """Points with a whole open neighborhood above x: the interior of the
    upper cone."""
    return ts.top.interior(up_set(ts.sem, x))


def inversion_continuity_check(ts: TopSemigroup, inv) -> tuple[bool, tuple | None]:
    """Continuity of x -> x^-1 via minimal neighborhoods; witness is the
    least (x, y) with y near x but y^-1 outside the minimal neighborhood of
    x^-1."""
    inv_map = inv.inv if isinstance(inv, InverseStructure) else tuple(inv)
    nb = [ts.top.min_nbhd(x) for x in range(ts.sem.n)]
    for x in range(ts.sem.n):
        target = nb[inv_map[x]]
        for y in points_of(nb[x]):
            if not (target >> inv_map[y]) & 1:
                return False, (x, y)
    return True, None


@dataclass(frozen=True)
class DitopReport:
    ok: bool
    weak: bool
    inversion_ok: bool
    inversion_witness: tuple | None
    failure: tuple | None  # (x, escaping element), least such


def _ditop_core(ts: TopSemigroup, inv: InverseStructure | None, weak: bool) -> DitopReport:
    s = ts.sem
    if inv is None:
        found = inverse_structure(s)
        if not isinstance(found, InverseStructure):
            raise DomainError(f"not an inverse semigroup: element {found.witness} "
                              f"has {found.inverse_count} inverses")
        inv = found
    inv_ok, inv_wit = inversion_continuity_check(ts, inv)
    nb = [ts.top.min_nbhd(x) for x in range(s.n)]
    emask = mask_of(inv.idempotents)
    # The displayed set grows with U and W (and with V), while the target O
    # shrinks to the minimal neighborhood of x; so minimal neighborhoods
    # decide the whole quantifier prefix.
    for x in range(s.n):
        u, o = nb[x], nb[x]
        w = nb[s.mul(x, inv.inv[x])]
        v = nb[s.mul(inv.inv[x], x)] if weak else None
        for cand in range(s.n):
            if not (w >> s.mul(cand, inv.inv[cand])) & 1:
                continue
            if weak and not (v >> s.mul(inv.inv[cand], cand)) & 1:
                continue
            produced = False
            for e in points_of(w & emask):
                if (u >> s.mul(e, cand)) & 1:
                    produced = True
                    break
            if produced and not (o >> cand) & 1:
                return DitopReport(False, weak, inv_ok, inv_wit, (x, cand))
    return DitopReport(inv_ok, weak, inv_ok, inv_wit, None)


def ditopological_check(ts: TopSemigroup, inv: InverseStructure | None = None) -> DitopReport:
    """Neighborhood-factorization property of inverse topological semigroups:
    every x and open O around it admit opens U around x and W around x*x^-1
    with {s : s*s^-1 in W, some e in W meets E(S) with e*s in U} inside O.
    Requires continuous inversion."""
    return _ditop_core(ts, inv, weak=False)


def weakly_ditopological_check(ts: TopSemigroup, inv: InverseStructure | None = None) -> DitopReport:
    """Same as ditopological_check with the extra constraint set
    {s : s^-1*s in V} for a neighborhood V of x^-1*x; a weaker requirement."""
    return _ditop_core(ts, inv, weak=True)


def enumerate_clopen_ideals(ts: TopSemigroup) -> tuple[int, ...]:
    """All clopen subsets closed under multiplication by the whole carrier,
    ascending by bitmask."""
    s = ts.sem
    out = []
    for mask in ts.top.opens_sorted():
        if not ts.top.is_clopen(mask):
            continue
        ideal = True
        for x in points_of(mask):
            for z in range(s.n):
                if not (mask >> s.mul(x, z)) & 1:
                    ideal = False
                    break
            if not ideal:
                break
        if ideal:
            out.append(mask)
    return tuple(out)


def u_check(ts: TopSemigroup, x) -> tuple[bool, tuple | None]:
    """Local upper-cone witness at x: some y near x whose upper cone contains
    a whole neighborhood of x.  Checking the minimal neighborhood of x as
    both the ambient open and the witness neighborhood suffices: the ambient
    open only constrains where y may come from, and smaller is harder."""
    if not is_semilattice(ts.sem):
        raise DomainError("U property is defined for semilattices")
    nx = ts.top.min_nbhd(x)
    for y in points_of(nx):
        if nx & ~up_set(ts.sem, y) == 0:
            return True, (y, nx)
    return False, None


def u2_check(ts: TopSemigroup, x) -> tuple[bool, tuple | None]:
    """Clopen-ideal variant: some y near x and clopen ideal I avoiding x with
    everything outside I above y."""
    if not is_semilattice(ts.sem):
        raise DomainError("U2 property is defined for semilattices")
    full = (1 << ts.sem.n) - 1
    nx = ts.top.min_nbhd(x)
    ideals = enumerate_clopen_ideals(ts)
    for y in points_of(nx):
        cone = up_set(ts.sem, y)
        for ideal in ideals:
            if not (ideal >> x) & 1 and (full ^ ideal) & ~cone == 0:
                return True, (y, ideal)
    return False, None


def u_check_space(ts: TopSemigroup) -> tuple[bool, int | None]:
    for x in range(ts.sem.n):
        ok, _ = u_check(ts, x)
        if not ok:
            return False, x
    return True, None


def u2_check_space(ts: TopSemigroup) -> tuple[bool, int | None]:
    for x in range(ts.sem.n):
        ok, _ = u2_check(ts, x)
        if not ok:
            return False, x
    return True, None


def cb_derivative(spec: TopSpec, subset: int | None = None) -> int:
    """Non-isolated points of the subspace on `subset` (default: the whole
    carrier)."""
    a = ((1 << spec.n) - 1) if subset is None else subset
    out = 0
    for x in points_of(a):
        if spec.min_nbhd(x) & a != 1 << x:
            out |= 1 << x
    return out


def scattered_height(spec: TopSpec) -> int | None:
    """Number of derivative iterations needed to empty the space, or None if
    a nonempty set of accumulation points survives (not scattered)."""
    a = (1 << spec.n) - 1
    height = 0
    while a:
        nxt = cb_derivative(spec, a)
        if nxt == a:
            return None
        a = nxt
        height += 1
    return height


@dataclass(frozen=True)
class TruncatedPresentation:
    """A finite window of a countable topological semigroup.

    The carrier is the window truncation `base`.  Points outside
    `limit_points` are isolated; each limit point carries a descending family
    of admissible basic neighborhoods (bitmasks).  `guard` is the cutoff
    index below which the family's defining constraints live, while the
    neighborhoods themselves keep a nonempty tail at or beyond the guard --
    the room needed to replay forcing arguments that pick a fresh element
    outside any finite constraint set.  `core` marks the window positions
    whose neighborhood data survives truncation intact; continuity is only
    replayable on core pairs.  `strict=False` drops the tail requirement
    (used by discrete control instances).
    """

    base: FinSemigroup
    window: int
    guard: int
    limit_points: tuple[int, ...]
    families: tuple[tuple[int, tuple[int, ...]], ...]
    core: int
    name: str = ""
    strict: bool = True

    def __post_init__(self):
        n = self.base.n
        object.__setattr__(self, "limit_points", tuple(self.limit_points))
        object.__setattr__(
            self, "families", tuple((p, tuple(f)) for p, f in self.families))
        if self.window < 1:
            raise DomainError("window must be positive")
        if not 0 <= self.guard < n:
            raise DomainError("guard must be a carrier index")
        pts = [p for p, _ in self.families]
        if sorted(self.limit_points) != sorted(set(self.limit_points)) or pts != list(self.limit_points):
            raise DomainError("families must list each limit point exactly once, in order")
        full = (1 << n) - 1
        limit_mask = mask_of(self.limit_points)
        for p, fam in self.families:
            if not 0 <= p < n:
                raise DomainError(f"limit point {p} is out of range")
            if not fam:
                raise DomainError(f"limit point {p} has an empty neighborhood family")
            prev = full
            for v in fam:
                if v & ~full:
                    raise DomainError(f"neighborhood of {p} leaves the carrier")
                if not (v >> p) & 1:
                    raise DomainError(f"a listed neighborhood of {p} does not contain it")
                if v & ~prev:
                    raise DomainError(f"neighborhood family of {p} is not descending")
                if self.strict:
                    tail = v & ~limit_mask & ~((1 << self.guard) - 1)
                    if tail == 0:
                        raise DomainError(
                            f"a neighborhood of {p} has no tail at or beyond guard {self.guard}")
                prev = v
        if self.core & ~full:
            raise DomainError("core leaves the carrier")

    def family(self, p) -> tuple[int, ...]:
        for q, fam in self.families:
            if q == p:
                return fam
        raise DomainError(f"{p} is not a limit point")

    def min_nbhd(self, x) -> int:
        for q, fam in self.families:
            if q == x:
                return fam[-1]
        return 1 << x

    def is_open(self, mask) -> bool:
        for p, fam in self.families:
            if (mask >> p) & 1 and not any(v & ~mask == 0 for v in fam):
                return False
        return True

    def basis_masks(self) -> tuple[int, ...]:
        """Singletons of isolated points plus every admissible neighborhood,
        ascending."""
        out = set()
        limits = set(self.limit_points)
        for x in range(self.base.n):
            if x not in limits:
                out.add(1 << x)
        for _, fam in self.families:
            out.update(fam)
        return tuple(sorted(out))

    def to_top_spec(self) -> TopSpec:
        """Materialize the presented topology: a set is open when every limit
        point inside it keeps a whole admissible neighborhood inside it."""
        n = self.base.n
        if n > 16:
            raise DomainError(f"cannot materialize 2^{n} subsets; carrier too large")
        opens = frozenset(m for m in range(1 << n) if self.is_open(m))
        return TopSpec(n, opens)


def presentation_continuity_check(pres: TruncatedPresentation) -> tuple[bool, tuple | None]:
    """Multiplication continuity on core pairs of a truncated presentation.

    Pairs with a tail argument are excluded: their continuity witnesses in
    the full space are admissible neighborhoods whose cutoffs exceed the
    guard, which the truncation deliberately does not carry.
    """
    s = pres.base
    nb = [pres.min_nbhd(x) for x in range(s.n)]
    for a in points_of(pres.core):
        for b in points_of(pres.core):
            target = nb[s.mul(a, b)]
            for c in points_of(nb[a]):
                for d in points_of(nb[b]):
                    if not (target >> s.mul(c, d)) & 1:
                        return False, (a, b, c, d)
    return True, None


@dataclass(frozen=True)
class BasisReport:
    ok: bool
    mu: Congruence
    failures: tuple  # (x, witness element in [x] outside N_x, N_x mask)
    candidates: tuple | None  # per-congruence reasons on small carriers


def _carrier_and_nbhds(obj):
    if isinstance(obj, TopSemigroup):
        return obj.sem, [obj.top.min_nbhd(x) for x in range(obj.sem.n)]
    if isinstance(obj, TruncatedPresentation):
        return obj.base, [obj.min_nbhd(x) for x in range(obj.base.n)]
    raise KindError(f"expected TopSemigroup or TruncatedPresentation, got {type(obj).__name__}")


def congruence_basis_check(obj, candidate_bound: int = 10) -> BasisReport:
    """Does some right congruence with all-open classes trap every point
    inside each of its neighborhoods?

    A right congruence has all classes open exactly when every class
    contains the minimal neighborhood of each of its members, i.e. when the
    congruence contains all pairs (y, z) with z in N_y.  Those congruences
    are closed under intersection, so the closure mu of the seed pairs is
    the least of them, and the basis property holds iff [x]_mu stays inside
    N_x for every x.  On failure, small carriers also get a per-candidate
    report over all enumerated right congruences.
    """
    s, nb = _carrier_and_nbhds(obj)
    seeds = []
    for y in range(s.n):
        for z in points_of(nb[y]):
            if z != y:
                seeds.append((y, z))
    mu = congruence_closure(s, seeds, RIGHT)
    failures = []
    for x in range(s.n):
        cls = mask_of(i for i in range(s.n) if mu.same(x, i))
        escaped = cls & ~nb[x]
        if escaped:
            failures.append((x, points_of(escaped)[0], nb[x]))
    candidates = None
    if failures and s.n <= candidate_bound:
        x0, _, nbx0 = failures[0]
        rows = []
        try:
            lattice = enumerate_congruences(s, RIGHT, bound=candidate_bound, limit=512)
        except SizeError:
            lattice = []
        for rho in lattice:
            reason = None
            for y in range(s.n):
                cls = mask_of(i for i in range(s.n) if rho.same(y, i))
                if nb[y] & ~cls:
                    reason = f"class of {s.label(y)} is not open"
                    break
            if reason is None:
                cls = mask_of(i for i in range(s.n) if rho.same(x0, i))
                if cls & ~nbx0:
                    z = points_of(cls & ~nbx0)[0]
                    reason = (f"all classes open but {s.label(z)} is forced into "
                              f"the class of {s.label(x0)}")
                else:
                    reason = "separates the failing point (unreachable)"
            rows.append((rho.classes, reason))
        candidates = tuple(rows) if rows else None
    return BasisReport(not failures, mu, tuple(failures), candidates)


def presentation_doc(pres: TruncatedPresentation) -> dict:
    return {
        "schema": 1,
        "kind": "truncated_presentation",
        "name": pres.name,
        "window": pres.window,
        "guard": pres.guard,
        "semigroup": semigroup_doc(pres.base),
        "limit_points": list(pres.limit_points),
        "neighborhoods": {
            str(p): [list(points_of(v)) for v in fam] for p, fam in pres.families
        },
        "core": list(points_of(pres.core)),
        "strict_tails": pres.strict,
    }


def presentation_from_doc(doc) -> TruncatedPresentation:
    if not isinstance(doc, dict) or doc.get("kind") != "truncated_presentation":
        raise LoadError("not a truncated presentation document")
    for key in ("window", "guard", "semigroup", "limit_points", "neighborhoods", "core"):
        if key not in doc:
            raise LoadError(f"presentation document is missing '{key}'")
    base = parse_semigroup(doc["semigroup"])
    limits = tuple(int(p) for p in doc["limit_points"])
    fams = []
    for p in limits:
        key = str(p)
        if key not in doc["neighborhoods"]:
            raise LoadError(f"no neighborhood family for limit point {p}")
        fams.append((p, tuple(mask_of(v) for v in doc["neighborhoods"][key])))
    try:
        return TruncatedPresentation(
            base=base,
            window=int(doc["window"]),
            guard=int(doc["guard"]),
            limit_points=limits,
            families=tuple(fams),
            core=mask_of(doc["core"]),
            name=str(doc.get("name", "")),
            strict=bool(doc.get("strict_tails", True)),
        )
    except DomainError as e:
        raise LoadError(str(e)) from e


def bundled_top_semigroups():
    """Small named topological semigroups with hand-written open families,
    used as checker fixtures."""
    from . import semigroups as sg

    def upsets(s: FinSemigroup) -> TopSpec:
        masks = [up_set(s, x) for x in range(s.n)]
        return TopSpec.generated(s.n, masks)

    z2 = sg.cyclic_group(2)
    z3 = sg.cyclic_group(3)
    from .core import adjoin_zero

    z20 = adjoin_zero(z2)
    b2 = sg.brandt_semigroup(2)
    chain2 = sg.chain_semilattice(2)
    chain3 = sg.chain_semilattice(3)
    anti = sg.antichain_with_zero(3)
    diamond = sg.powerset_semilattice(2)
    out = [
        ("Z2_discrete", TopSemigroup(z2, TopSpec.discrete(2), "Z2_discrete")),
        ("Z3_discrete", TopSemigroup(z3, TopSpec.discrete(3), "Z3_discrete")),
        ("Z2^0_discrete", TopSemigroup(z20, TopSpec.discrete(3), "Z2^0_discrete")),
        ("B2_discrete", TopSemigroup(b2, TopSpec.discrete(5), "B2_discrete")),
        ("chain2_upper", TopSemigroup(chain2, upsets(chain2), "chain2_upper")),
        ("chain3_upper", TopSemigroup(chain3, upsets(chain3), "chain3_upper")),
        ("chain3_discrete", TopSemigroup(chain3, TopSpec.discrete(3), "chain3_discrete")),
        ("antichain3^0_discrete", TopSemigroup(anti, TopSpec.discrete(4), "antichain3^0_discrete")),
        ("powerset2_upper", TopSemigroup(diamond, upsets(diamond), "powerset2_upper")),
        ("powerset2_discrete", TopSemigroup(diamond, TopSpec.discrete(4), "powerset2_discrete")),
    ]
    return out


def bundled_top_semilattices():
    return [(name, ts) for name, ts in bundled_top_semigroups() if is_semilattice(ts.sem)]
