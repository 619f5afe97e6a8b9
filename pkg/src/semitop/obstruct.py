"""Forcing obstructions on truncated counterexample semigroups.

Each catalog instance is a finite window of a countable semigroup whose
topology admits no neighborhood basis of right-congruence classes.  The
finite argument runs per admissible basic neighborhood V of the limit point
p: the smallest right congruence putting V inside the class of p is forced,
step by step, to violate one of the instance's escape targets.  A
certificate records every branch with its forcing chain and final partition,
and can be replayed independently of the search.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    RIGHT,
    Congruence,
    FinSemigroup,
    canonical_classes,
    congruence_closure,
    is_semilattice,
)
from .errors import DomainError, LoadError, TheoremViolationError
from .semigroups import (
    brandt_semigroup,
    cyclic_group,
    right_zero,
    signed_antichain_with_zero,
    symmetric_group,
)
from .topo import (
    TruncatedPresentation,
    mask_of,
    points_of,
    presentation_doc,
    presentation_from_doc,
)

CLASS_ESCAPES = "class-escapes"
ISOLATED_COLLAPSES = "isolated-collapses"


@dataclass(frozen=True)
class EscapeTarget:
    """What the forced congruence must violate.

    ``class-escapes``: the class of the limit point leaves the open set.
    ``isolated-collapses``: the class of an isolated point stops being a
    singleton.  Either way a family of all-open-class right congruences
    cannot separate the marked point into the marked neighborhood.
    """

    mode: str
    open_set: int | None = None
    point: int | None = None
    description: str = ""

    def __post_init__(self):
        if self.mode not in (CLASS_ESCAPES, ISOLATED_COLLAPSES):
            raise DomainError(f"unknown escape mode {self.mode!r}")
        if self.mode == CLASS_ESCAPES and self.open_set is None:
            raise DomainError("class-escapes needs an open set")
        if self.mode == ISOLATED_COLLAPSES and self.point is None:
            raise DomainError("isolated-collapses needs a point")


@dataclass(frozen=True)
class CatalogInstance:
    instance_id: str
    presentation: TruncatedPresentation
    limit: int
    targets: tuple[EscapeTarget, ...]
    notes: str = ""

    def __post_init__(self):
        pres = self.presentation
        if self.limit not in pres.limit_points:
            raise DomainError(f"{self.limit} is not a limit point of the presentation")
        for tgt in self.targets:
            if tgt.mode == CLASS_ESCAPES:
                if not (tgt.open_set >> self.limit) & 1:
                    raise DomainError("escape target open set misses the limit point")
                if not pres.is_open(tgt.open_set):
                    raise DomainError("escape target set is not open in the presentation")
            else:
                if tgt.point in pres.limit_points:
                    raise DomainError("collapse target must be an isolated point")

    def admissible(self) -> tuple[int, ...]:
        return self.presentation.family(self.limit)


def forcing_closure(pres: TruncatedPresentation, p: int, v_mask: int):
    """Smallest right congruence putting the admissible neighborhood V inside
    the class of p; returns (congruence, forcing chain)."""
    if v_mask not in pres.family(p):
        raise DomainError("neighborhood is not admissible for this limit point")
    seeds = [(p, z) for z in points_of(v_mask) if z != p]
    return congruence_closure(pres.base, seeds, RIGHT, record_chain=True)


def target_fired(target: EscapeTarget, rho: Congruence, limit: int) -> tuple[bool, int | None]:
    """Whether the forced partition violates the target; witness is the least
    offending element."""
    if target.mode == CLASS_ESCAPES:
        limit_cls = rho.classes[limit]
        for x in range(rho.base.n):
            if rho.classes[x] == limit_cls and not (target.open_set >> x) & 1:
                return True, x
        return False, None
    cls = rho.class_of(target.point)
    if len(cls) > 1:
        return True, next(x for x in cls if x != target.point)
    return False, None


@dataclass(frozen=True)
class ForcingBranch:
    neighborhood: int
    chain: tuple
    classes: tuple[int, ...]
    target_index: int
    witness: int


@dataclass(frozen=True)
class ObstructionCertificate:
    instance_id: str
    window: int
    guard: int
    limit: int
    branches: tuple[ForcingBranch, ...]


@dataclass(frozen=True)
class NoObstruction:
    instance_id: str
    window: int
    surviving: int  # the admissible neighborhood whose closure fires nothing
    classes: tuple[int, ...]


def _fire_on_branch(inst: CatalogInstance, rho: Congruence) -> tuple[int, int] | None:
    for idx, tgt in enumerate(inst.targets):
        fired, witness = target_fired(tgt, rho, inst.limit)
        if fired:
            return idx, witness
    return None


def escape_certificate(inst: CatalogInstance):
    """Run the forcing argument over every admissible neighborhood of the
    limit point, in family order.

    Success needs every branch to fire some target: larger neighborhoods
    force no less than smaller ones, so a single surviving branch means a
    congruence with the limit class inside that neighborhood exists and no
    obstruction can be claimed; it is returned as NoObstruction.
    """
    branches = []
    for v in inst.admissible():
        rho, chain = forcing_closure(inst.presentation, inst.limit, v)
        hit = _fire_on_branch(inst, rho)
        if hit is None:
            return NoObstruction(
                instance_id=inst.instance_id,
                window=inst.presentation.window,
                surviving=v,
                classes=rho.classes,
            )
        idx, witness = hit
        branches.append(ForcingBranch(
            neighborhood=v, chain=chain, classes=rho.classes,
            target_index=idx, witness=witness))
    return ObstructionCertificate(
        instance_id=inst.instance_id,
        window=inst.presentation.window,
        guard=inst.presentation.guard,
        limit=inst.limit,
        branches=tuple(branches),
    )


def verify_certificate(inst: CatalogInstance, cert: ObstructionCertificate) -> tuple[bool, str | None]:
    """Independent replay of a certificate against its instance.

    Checks instance identity, branch coverage of the whole admissible
    family, justification of every chain step (the derived pair really is
    the recorded multiplier applied to an already-merged pair), bit-exact
    reproduction of each branch partition both by chain replay and by a
    fresh closure run, and that the recorded target fires with the recorded
    witness.
    """
    pres = inst.presentation
    if cert.instance_id != inst.instance_id:
        return False, "certificate names a different instance"
    if cert.window != pres.window or cert.guard != pres.guard or cert.limit != inst.limit:
        return False, "window, guard or limit point mismatch"
    fam = inst.admissible()
    if tuple(br.neighborhood for br in cert.branches) != fam:
        return False, "branches do not cover the admissible family in order"
    t = pres.base.table
    n = pres.base.n
    for br in cert.branches:
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx == ry:
                return
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

        for z in points_of(br.neighborhood):
            if z != inst.limit:
                union(inst.limit, z)
        for (a, b), m, (da, db) in br.chain:
            if find(a) != find(b):
                return False, f"chain step uses unmerged pair ({a}, {b})"
            if t[a][m] != da or t[b][m] != db:
                return False, f"chain step misapplies multiplier {m}"
            union(da, db)
        replayed = canonical_classes([find(x) for x in range(n)])
        if replayed != tuple(br.classes):
            return False, "chain replay does not reproduce the recorded partition"
        rho, _ = forcing_closure(pres, inst.limit, br.neighborhood)
        if rho.classes != tuple(br.classes):
            return False, "fresh closure disagrees with the recorded partition"
        if not 0 <= br.target_index < len(inst.targets):
            return False, "target index out of range"
        tgt = inst.targets[br.target_index]
        if tgt.mode == CLASS_ESCAPES:
            if replayed[br.witness] != replayed[inst.limit] or (tgt.open_set >> br.witness) & 1:
                return False, "recorded witness does not escape the target set"
        else:
            if br.witness == tgt.point or replayed[br.witness] != replayed[tgt.point]:
                return False, "recorded witness does not collapse the target point"
    return True, None


# -- serialization -------------------------------------------------------------

def certificate_doc(cert) -> dict:
    if isinstance(cert, NoObstruction):
        return {
            "schema": 1,
            "kind": "no_obstruction",
            "instance": cert.instance_id,
            "window": cert.window,
            "surviving": list(points_of(cert.surviving)),
            "classes": list(cert.classes),
        }
    return {
        "schema": 1,
        "kind": "obstruction_certificate",
        "instance": cert.instance_id,
        "window": cert.window,
        "guard": cert.guard,
        "limit": cert.limit,
        "branches": [
            {
                "neighborhood": list(points_of(b.neighborhood)),
                "chain": [[[a, bb], m, [da, db]] for (a, bb), m, (da, db) in b.chain],
                "classes": list(b.classes),
                "target": b.target_index,
                "witness": b.witness,
            }
            for b in cert.branches
        ],
    }


def certificate_from_doc(doc):
    try:
        if doc["kind"] == "no_obstruction":
            return NoObstruction(
                instance_id=str(doc["instance"]),
                window=int(doc["window"]),
                surviving=mask_of(doc["surviving"]),
                classes=tuple(int(c) for c in doc["classes"]),
            )
        if doc["kind"] == "obstruction_certificate":
            branches = tuple(
                ForcingBranch(
                    neighborhood=mask_of(b["neighborhood"]),
                    chain=tuple(((int(a), int(bb)), int(m), (int(da), int(db)))
                                for (a, bb), m, (da, db) in b["chain"]),
                    classes=tuple(int(c) for c in b["classes"]),
                    target_index=int(b["target"]),
                    witness=int(b["witness"]),
                )
                for b in doc["branches"]
            )
            return ObstructionCertificate(
                instance_id=str(doc["instance"]),
                window=int(doc["window"]),
                guard=int(doc["guard"]),
                limit=int(doc["limit"]),
                branches=branches,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise LoadError(f"malformed certificate document: {exc}") from exc
    raise LoadError(f"unknown certificate kind {doc.get('kind')!r}")


def instance_doc(inst: CatalogInstance) -> dict:
    return {
        "schema": 1,
        "kind": "catalog_instance",
        "instance": inst.instance_id,
        "limit": inst.limit,
        "notes": inst.notes,
        "presentation": presentation_doc(inst.presentation),
        "targets": [
            {
                "mode": t.mode,
                "open": None if t.open_set is None else list(points_of(t.open_set)),
                "point": t.point,
                "description": t.description,
            }
            for t in inst.targets
        ],
    }


def instance_from_doc(doc) -> CatalogInstance:
    try:
        targets = tuple(
            EscapeTarget(
                mode=str(t["mode"]),
                open_set=None if t["open"] is None else mask_of(t["open"]),
                point=t["point"],
                description=str(t.get("description", "")),
            )
            for t in doc["targets"]
        )
        return CatalogInstance(
            instance_id=str(doc["instance"]),
            presentation=presentation_from_doc(doc["presentation"]),
            limit=int(doc["limit"]),
            targets=targets,
            notes=str(doc.get("notes", "")),
        )
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise LoadError(f"malformed instance document: {exc}") from exc


# -- structural checks ---------------------------------------------------------

def right_simple_check(s: FinSemigroup) -> tuple[bool, int | None]:
    """a*S = S for every a; witness is the least failing element."""
    for a in range(s.n):
        if len({s.table[a][x] for x in range(s.n)}) != s.n:
            return False, a
    return True, None


def chain_finite_check(s: FinSemigroup) -> tuple[bool, tuple[int, ...]]:
    """Longest chain of the natural order on a semilattice, top to bottom.

    Finite semilattices are always chain-finite; the witness documents how
    deep the bundled truncation actually is.
    """
    if not is_semilattice(s):
        raise DomainError("chain finiteness is a semilattice notion")
    t = s.table
    below = [tuple(y for y in range(s.n) if y != x and t[y][x] == y) for x in range(s.n)]
    memo: dict[int, tuple[int, ...]] = {}

    def longest(x) -> tuple[int, ...]:
        if x not in memo:
            best = ()
            for y in below[x]:
                cand = longest(y)
                if len(cand) > len(best) or (len(cand) == len(best) and cand < best):
                    best = cand
            memo[x] = (x,) + best
        return memo[x]

    best = ()
    for x in range(s.n):
        cand = longest(x)
        if len(cand) > len(best) or (len(cand) == len(best) and cand < best):
            best = cand
    return True, best


# -- the catalog ---------------------------------------------------------------

def _window_guard(window):
    if window < 4:
        raise DomainError(f"window {window} is too small; the families need at least 4")
    return window - 2


def exB_instance(window=6, discrete=False) -> CatalogInstance:
    """Signed antichain with zero: all points isolated except the positive
    zero, whose neighborhoods are even tails.  Forcing any tail into the
    class of (0,+) drives the matching negative tail into the class of the
    isolated point (0,-) via right multiplication by (x_i,-)."""
    w = window
    guard = _window_guard(w)
    base = signed_antichain_with_zero(w)
    p, q = 2 * w, 2 * w + 1
    if discrete:
        families = ((p, (1 << p,)),)
        core = (1 << base.n) - 1
        strict = False
    else:
        m_count = w - 2
        fams = tuple(
            mask_of([p] + [2 * i for i in range(k, w)]) for k in range(m_count)
        )
        families = ((p, fams),)
        # negative-tail points have no small enough admissible neighborhoods
        # left in the window, so continuity is only replayable off them
        core = ((1 << base.n) - 1) ^ mask_of(2 * j + 1 for j in range(w - 3, w))
        strict = True
    pres = TruncatedPresentation(
        base=base, window=w, guard=guard, limit_points=(p,), families=families,
        core=core, name=f"exB:{w}" + ("-discrete" if discrete else ""), strict=strict)
    targets = (EscapeTarget(
        ISOLATED_COLLAPSES, point=q,
        description="the isolated negative zero acquires a classmate"),)
    return CatalogInstance(
        instance_id="exB" + ("-discrete" if discrete else ""),
        presentation=pres, limit=p, targets=targets,
        notes="commutative inverse; discrete everywhere except one limit idempotent")


def odd_chain_instance(window=6, discrete=False) -> CatalogInstance:
    """Reciprocal chain under minimum: index i is 1/(i+1), index w is the
    limit 0, and the limit's neighborhoods hold only odd reciprocals (even
    indices).  Forcing an even index into the class of 0 drags in its odd
    successor, which no admissible neighborhood contains."""
    w = window
    guard = _window_guard(w)
    n = w + 1
    table = tuple(tuple(max(a, b) for b in range(n)) for a in range(n))
    names = tuple(f"1/{i + 1}" for i in range(w)) + ("0",)
    base = FinSemigroup(table, names=names, name=f"odd_chain{w}", identity=0)
    p = w
    if discrete:
        families = ((p, (1 << p,)),)
        core = (1 << n) - 1
        strict = False
    else:
        m_count = max(1, (w - 2) // 2)
        fams = tuple(
            mask_of([p] + [2 * i for i in range(m, (w + 1) // 2)])
            for m in range(m_count)
        )
        families = ((p, fams),)
        core = ((1 << n) - 1) ^ mask_of(
            j for j in range(2 * m_count - 2, w) if j % 2 == 1)
        strict = True
    pres = TruncatedPresentation(
        base=base, window=w, guard=guard, limit_points=(p,), families=families,
        core=core, name=f"odd_chain:{w}" + ("-discrete" if discrete else ""), strict=strict)
    if discrete:
        targets = (EscapeTarget(
            CLASS_ESCAPES, open_set=1 << p,
            description="the class of 0 leaves its singleton"),)
    else:
        targets = (EscapeTarget(
            CLASS_ESCAPES, open_set=pres.family(p)[0],
            description="the class of 0 leaves the largest odd-reciprocal neighborhood"),)
    return CatalogInstance(
        instance_id="odd_chain" + ("-discrete" if discrete else ""),
        presentation=pres, limit=p, targets=targets,
        notes="locally compact chain semilattice with a single limit point")


_RS_GROUPS = {"Z2": lambda: cyclic_group(2), "R2": lambda: right_zero(2),
              "S3": lambda: symmetric_group(3)}


def right_simple_zero_instance(window=6, variant="Z2", discrete=False) -> CatalogInstance:
    """A right simple semigroup times a right-zero band, with adjoined zero.

    Continuity of multiplication at the non-isolated zero forces its only
    admissible neighborhood to be the whole carrier (any smaller one is
    blown open by a*S = S), so the single forcing branch collapses
    everything and every isolated point loses its singleton class.
    """
    if variant not in _RS_GROUPS:
        raise DomainError(f"unknown right-simple variant {variant!r}")
    w = window
    guard = _window_guard(w)
    g = _RS_GROUPS[variant]()
    k = g.n

    def mul(a, b):
        zero = k * w
        if a == zero or b == zero:
            return zero
        sa, _ = divmod(a, w)
        sb, rb = divmod(b, w)
        return g.table[sa][sb] * w + rb

    n = k * w + 1
    table = tuple(tuple(mul(a, b) for b in range(n)) for a in range(n))
    names = tuple(f"({g.label(s)},{r})" for s in range(k) for r in range(w)) + ("0",)
    base = FinSemigroup(table, names=names, name=f"rs_{variant}{w}")
    ok, bad = right_simple_check(FinSemigroup(
        tuple(tuple(table[a][b] for b in range(n - 1)) for a in range(n - 1))))
    if not ok:
        raise TheoremViolationError(f"carrier is not right simple at {bad}")
    p = n - 1
    if discrete:
        families = ((p, (1 << p,)),)
        strict = False
    else:
        families = ((p, ((1 << n) - 1,)),)
        strict = True
    pres = TruncatedPresentation(
        base=base, window=w, guard=guard, limit_points=(p,), families=families,
        core=(1 << n) - 1,
        name=f"right_simple_zero:{variant}:{w}" + ("-discrete" if discrete else ""),
        strict=strict)
    targets = (EscapeTarget(
        ISOLATED_COLLAPSES, point=0,
        description="right simplicity spreads the zero class over the carrier"),)
    return CatalogInstance(
        instance_id=f"right_simple_zero:{variant}" + ("-discrete" if discrete else ""),
        presentation=pres, limit=p, targets=targets,
        notes="the zero admits no proper open neighborhood compatible with continuity")


def brandt_instance(window=6, discrete=False) -> CatalogInstance:
    """Rank-at-most-one partial bijections with diagonal-tail neighborhoods
    of the empty map.  Forcing a diagonal into the class of 0 produces
    off-diagonal elements there, escaping every admissible neighborhood."""
    w = window
    guard = _window_guard(w)
    base = brandt_semigroup(w)
    p = w * w
    if discrete:
        families = ((p, (1 << p,)),)
        core = (1 << base.n) - 1
        strict = False
    else:
        m_count = w - 2
        fams = tuple(
            mask_of([p] + [i * w + i for i in range(k, w)]) for k in range(m_count)
        )
        families = ((p, fams),)
        cut = w - 3
        core = mask_of(
            [p] + [i * w + i for i in range(w)]
            + [i * w + j for i in range(cut) for j in range(cut) if i != j])
        strict = True
    pres = TruncatedPresentation(
        base=base, window=w, guard=guard, limit_points=(p,), families=families,
        core=core, name=f"brandt:{w}" + ("-discrete" if discrete else ""), strict=strict)
    open0 = pres.family(p)[0] if not discrete else 1 << p
    targets = (EscapeTarget(
        CLASS_ESCAPES, open_set=open0,
        description="an off-diagonal element joins the class of the empty map"),)
    return CatalogInstance(
        instance_id="brandt" + ("-discrete" if discrete else ""),
        presentation=pres, limit=p, targets=targets,
        notes="inverse semigroup with compact idempotent set in the full space")


def luke_instance(window=6, discrete=False) -> CatalogInstance:
    """Same carrier as the diagonal instance, but with square-tail
    neighborhoods {g : dom g and im g avoid [0, k)} and the escape target
    'image avoids 0'.  Forcing (i,j) into the class of the empty map forces
    (i,0) there too, by right multiplication with (j,0)."""
    w = window
    guard = _window_guard(w)
    base = brandt_semigroup(w)
    p = w * w
    if discrete:
        families = ((p, (1 << p,)),)
        core = (1 << base.n) - 1
        strict = False
    else:
        m_count = w - 2
        fams = tuple(
            mask_of([p] + [i * w + j for i in range(k, w) for j in range(k, w)])
            for k in range(m_count)
        )
        families = ((p, fams),)
        cut = w - 3
        low = mask_of(i * w + j for i in range(cut) for j in range(cut))
        high = mask_of(i * w + j for i in range(cut, w) for j in range(cut, w))
        core = (1 << p) | low | high
        strict = True
    pres = TruncatedPresentation(
        base=base, window=w, guard=guard, limit_points=(p,), families=families,
        core=core, name=f"luke:{w}" + ("-discrete" if discrete else ""), strict=strict)
    if discrete:
        open0 = 1 << p
    else:
        open0 = mask_of([p] + [i * w + j for i in range(w) for j in range(1, w)])
    targets = (EscapeTarget(
        CLASS_ESCAPES, open_set=open0,
        description="the class of the empty map hits an element with 0 in its image"),)
    return CatalogInstance(
        instance_id="luke" + ("-discrete" if discrete else ""),
        presentation=pres, limit=p, targets=targets,
        notes="the escape leaves a subbasic set rather than an admissible neighborhood")


_FAMILIES = ("exB", "odd_chain", "right_simple_zero", "brandt", "luke")


def get_instance(instance_id: str, window: int = 6) -> CatalogInstance:
    """Build a catalog instance from its identifier.

    Identifiers are a family name, an optional ':variant' (right_simple_zero
    only), and an optional '-discrete' suffix selecting the discrete control
    with the same carrier.
    """
    name = instance_id
    discrete = name.endswith("-discrete")
    if discrete:
        name = name[: -len("-discrete")]
    variant = None
    if ":" in name:
        name, variant = name.split(":", 1)
    if name not in _FAMILIES:
        raise LoadError(f"unknown instance {instance_id!r}")
    if name == "right_simple_zero":
        return right_simple_zero_instance(window, variant=variant or "Z2", discrete=discrete)
    if variant is not None:
        raise LoadError(f"family {name} takes no variant")
    builder = {
        "exB": exB_instance,
        "odd_chain": odd_chain_instance,
        "brandt": brandt_instance,
        "luke": luke_instance,
    }[name]
    return builder(window, discrete=discrete)


def catalog(window: int = 6) -> tuple[CatalogInstance, ...]:
    """The five bundled families at a common window."""
    return tuple(get_instance(fid, window) for fid in _FAMILIES)
