"""Verified embeddings of finite semigroups into transformation windows, the
partial-bijection space, and product targets.

Every construction returns a RepresentationMap whose homomorphism and
injectivity properties were checked at build time; a violation raises
TheoremViolationError rather than producing a silently wrong map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    FinSemigroup,
    InverseStructure,
    adjoin_identity,
    adjoin_zero,
    is_clifford,
    maximal_subgroup,
    natural_order,
    subsemigroup,
)
from .errors import DomainError, EvaluationError, KindError, TheoremViolationError
from .semigroups import FinProduct, symmetric_inverse_monoid
from .transforms import (
    IN,
    NN,
    U_ATOM,
    W_DOM,
    AffineParity,
    BasicOpen,
    Compose,
    Const,
    FiniteTable,
    Identity,
    LazyMap,
    PairBlock,
    PartialPerm,
    Transformation,
    agree_on_window,
    basic_open_member,
    compose,
    invert,
    lazy_eval,
    lazy_extend_identity,
    lazy_extend_undefined,
    lazy_to_doc,
    pair_index,
)

FINITE = "finite"


@dataclass(frozen=True)
class RepresentationMap:
    """An injective homomorphism from a finite semigroup into a function
    space window (NN), the partial-bijection space (IN), or an abstract
    finite product (finite).

    Lazy images are compared pointwise on ``window``; ``sample`` > 0 switches
    the homomorphism check from all pairs to that many seeded random pairs
    (injectivity stays exhaustive, it is hash-based).
    """

    source: object  # anything with .n and .mul
    images: tuple
    space: str
    window: int | None = None
    target: object | None = None
    name: str = ""
    sample: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if self.space not in (NN, IN, FINITE):
            raise KindError(f"unknown target space {self.space!r}")
        n = self.source.n
        if len(self.images) != n:
            raise DomainError(f"{len(self.images)} images for {n} elements")
        if self.space == FINITE and self.target is None:
            raise DomainError("an abstract finite representation needs its target")
        seen = {}
        for i, img in enumerate(self.images):
            key = self._image_key(img)
            if key in seen:
                raise TheoremViolationError(
                    f"not injective: elements {seen[key]} and {i} share an image")
            seen[key] = i
        if self.sample and n * n > self.sample:
            rng = random.Random(self.seed)
            pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(self.sample)]
        else:
            pairs = [(a, b) for a in range(n) for b in range(n)]
        for a, b in pairs:
            if not self._composes(a, b):
                raise TheoremViolationError(f"homomorphism fails at ({a}, {b})")

    @property
    def verification(self) -> str:
        n = self.source.n
        if self.sample and n * n > self.sample:
            return f"sampled {self.sample} pairs (seed {self.seed})"
        return "exhaustive"

    def _image_key(self, img):
        if self.space == FINITE:
            return img
        if isinstance(img, (Transformation, PartialPerm)):
            return (type(img).__name__, img.window, img.map)
        if isinstance(img, LazyMap):
            if self.window is None:
                raise DomainError("lazy images need an evaluation window")
            return tuple(lazy_eval(img, x) for x in range(self.window))
        raise DomainError(f"unsupported image type {type(img).__name__}")

    def _composes(self, a, b) -> bool:
        want = self.images[self.source.mul(a, b)]
        fa, fb = self.images[a], self.images[b]
        if self.space == FINITE:
            return self.target.mul(fa, fb) == want
        if isinstance(fa, LazyMap):
            return agree_on_window(Compose(fa, fb), want, self.window)
        return compose(fa, fb) == want

    def image_of(self, i):
        return self.images[i]


def representation_doc(rep: RepresentationMap) -> dict:
    imgs = []
    for img in rep.images:
        if isinstance(img, Transformation):
            imgs.append({"kind": "transformation", "window": img.window, "map": list(img.map)})
        elif isinstance(img, PartialPerm):
            imgs.append({"kind": "partial", "window": img.window, "map": list(img.map)})
        elif isinstance(img, LazyMap):
            imgs.append({"kind": "lazy", "map": lazy_to_doc(img)})
        else:
            imgs.append({"kind": "index", "value": img})
    return {
        "schema": 1,
        "name": rep.name,
        "space": rep.space,
        "window": rep.window,
        "source_size": rep.source.n,
        "source_name": getattr(rep.source, "name", ""),
        "verification": rep.verification,
        "images": imgs,
    }


def cayley_right_regular(s: FinSemigroup) -> RepresentationMap:
    """Right-regular action on the carrier.

    A declared identity already separates elements through its row, so
    monoids act on their own carrier and the identity goes to the identity
    transformation.  Otherwise one external point is adjoined and sent to
    the acting element, keeping the action faithful when table rows repeat
    (both elements of the two-point right-zero semigroup act identically on
    the carrier alone).
    """
    n = s.n
    if s.identity is not None:
        images = tuple(
            Transformation(n, tuple(s.mul(i, a) for i in range(n)))
            for a in range(n)
        )
        win = n
    else:
        images = tuple(
            Transformation(n + 1, tuple(s.mul(i, a) for i in range(n)) + (a,))
            for a in range(n)
        )
        win = n + 1
    return RepresentationMap(source=s, images=images, space=NN, window=win,
                             name=f"cayley_{s.name or n}")


def wagner_preston(inv: InverseStructure) -> RepresentationMap:
    """The classical faithful action of an inverse semigroup by partial
    bijections: a acts on {x : x*(a*a^-1) = x} by right multiplication."""
    n = inv.n
    t = inv.base.table
    images = []
    for a in range(n):
        e = t[a][inv.inv[a]]
        images.append(PartialPerm(n, tuple(
            t[x][a] if t[x][e] == x else None for x in range(n))))
    return RepresentationMap(source=inv.base, images=tuple(images), space=IN, window=n,
                             name=f"wp_{inv.base.name or n}")


def preserves_inversion(rep: RepresentationMap, inv: InverseStructure) -> bool:
    """Whether the image of a^-1 is always the converse partial bijection of
    the image of a."""
    return all(invert(rep.images[a]) == rep.images[inv.inv[a]] for a in range(inv.n))


def _as_lazy(img):
    if isinstance(img, Transformation):
        return lazy_extend_identity(img)
    if isinstance(img, PartialPerm):
        return lazy_extend_undefined(img)
    if isinstance(img, LazyMap):
        return img
    raise DomainError(f"cannot view {type(img).__name__} as a lazy map")


def product_embed(reps) -> RepresentationMap:
    """Join function-space representations of several factors along the
    pairing 2^i(2j+1)-1: factor i acts inside block i, blocks past the last
    factor stay pointwise fixed, so composition works blockwise."""
    reps = tuple(reps)
    if not reps:
        raise DomainError("need at least one factor")
    prod = FinProduct(tuple(r.source for r in reps))
    inners = [tuple(_as_lazy(img) for img in r.images) for r in reps]
    space = NN if all(r.space == NN for r in reps) else IN
    wmax = max(r.window or 1 for r in reps)
    win = pair_index(len(reps) - 1, wmax - 1) + 2
    images = tuple(
        PairBlock(tuple(inners[i][p] for i, p in enumerate(prod.decode(x))))
        for x in range(prod.n)
    )
    sample = 0 if prod.n <= 64 else 512
    return RepresentationMap(source=prod, images=images, space=space, window=win,
                             sample=sample, name="product_" + "x".join(
                                 getattr(r.source, "name", "?") or "?" for r in reps))


def adjoin_embed(rep: RepresentationMap) -> tuple[RepresentationMap, RepresentationMap]:
    """From a function-space representation of S, representations of S with
    an external identity and of S with an external zero.

    Each image t is re-seated on the doubled copy of the naturals (2q goes to
    twice the old value of q), the point 1 is fixed, and every other odd
    point is sent to 3.  The odd part is then a common trap: the constant-1
    map absorbs everything (the zero), while the genuine identity map stays
    distinct from all re-seated images because those crush 5 to 3.
    """
    if rep.space != NN:
        raise KindError("adjoining needs a function-space representation")
    s = rep.source
    if not isinstance(s, FinSemigroup):
        raise DomainError("adjoining needs a plain finite semigroup source")
    primed = tuple(
        FiniteTable(((1, 1),), AffineParity(2, ((0, _as_lazy(img), 0), (1, Const(1), 1))))
        for img in rep.images
    )
    win = max(8, 2 * (rep.window or 1) + 2)
    with_one = RepresentationMap(
        source=adjoin_identity(s), images=primed + (Identity(),), space=NN,
        window=win, name=(rep.name or "rep") + "_adjoin1")
    with_zero = RepresentationMap(
        source=adjoin_zero(s), images=primed + (Const(1),), space=NN,
        window=win, name=(rep.name or "rep") + "_adjoin0")
    return with_one, with_zero


def embcl_map(g: PartialPerm) -> LazyMap:
    """A partial bijection as a total map: shift the graph up by one and send
    0 and every hole to 0.  Composition survives because 0 is a trap."""
    entries = ((0, 0),) + tuple((x + 1, v + 1) for x, v in g.graph())
    return FiniteTable(entries, Const(0))


def embcl_rep(n: int) -> RepresentationMap:
    """The whole symmetric inverse monoid on n points, pushed into the total
    function space through embcl_map."""
    source, pperms = symmetric_inverse_monoid(n)
    images = tuple(embcl_map(p) for p in pperms)
    return RepresentationMap(source=source, images=images, space=NN,
                             window=max(8, n + 2), name=f"embcl_I{n}")


# -- shared-image transformation groups ---------------------------------------

def transformation_group(maps, name=""):
    """Interpret a tuple of window transformations as a group: verify closure,
    locate the neutral element and all inverses, and return the abstract
    table together with unit index and inverse vector."""
    maps = tuple(maps)
    if not maps:
        raise DomainError("empty generator list")
    win = maps[0].window
    index = {}
    for i, m in enumerate(maps):
        if m.window != win:
            raise DomainError("mixed windows")
        if m.map in index:
            raise DomainError(f"element {i} repeats element {index[m.map]}")
        index[m.map] = i
    table = []
    for f in maps:
        row = []
        for g in maps:
            h = compose(f, g).map
            if h not in index:
                raise DomainError("not closed under composition")
            row.append(index[h])
        table.append(tuple(row))
    units = [e for e in range(len(maps))
             if all(table[e][x] == x and table[x][e] == x for x in range(len(maps)))]
    if len(units) != 1:
        raise DomainError(f"expected one neutral element, found {len(units)}")
    unit = units[0]
    inv = []
    for x in range(len(maps)):
        found = [y for y in range(len(maps)) if table[x][y] == unit and table[y][x] == unit]
        if len(found) != 1:
            raise DomainError(f"element {x} has {len(found)} inverses")
        inv.append(found[0])
    group = FinSemigroup(tuple(table), name=name, identity=unit)
    return group, unit, tuple(inv)


def shared_image_laws(maps):
    """The six structural laws of a subgroup of the function space, checked
    on window transformations.  Returns (law, ok, witness) triples:

    - unit-fixes-image: the neutral element fixes its image pointwise;
    - common-image: all elements share the unit's image;
    - restriction-permutes: each element permutes the common image;
    - inverse-restriction: the group inverse restricts to the inverse
      permutation;
    - restriction-separates: distinct elements differ on the common image;
    - value-transfer: if f merges x with an image point x', then every group
      element merges or separates the two points exactly as f does.
    """
    maps = tuple(maps)
    group, unit, inv = transformation_group(maps)
    e = maps[unit]
    image = tuple(sorted(set(e.map)))
    results = []

    wit = next(((x, e.map[x]) for x in image if e.map[x] != x), None)
    results.append(("unit-fixes-image", wit is None, wit))

    wit = next((i for i, m in enumerate(maps) if tuple(sorted(set(m.map))) != image), None)
    results.append(("common-image", wit is None, wit))

    wit = None
    for i, m in enumerate(maps):
        if tuple(sorted(m.map[x] for x in image)) != image:
            wit = i
            break
    results.append(("restriction-permutes", wit is None, wit))

    wit = None
    for i, m in enumerate(maps):
        back = maps[inv[i]]
        bad = next((x for x in image if back.map[m.map[x]] != x), None)
        if bad is not None:
            wit = (i, bad)
            break
    results.append(("inverse-restriction", wit is None, wit))

    wit = None
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            if all(maps[i].map[x] == maps[j].map[x] for x in image):
                wit = (i, j)
                break
        if wit:
            break
    results.append(("restriction-separates", wit is None, wit))

    wit = None
    for i, f in enumerate(maps):
        for x in range(f.window):
            for xp in image:
                if f.map[x] != f.map[xp]:
                    continue
                for j, g in enumerate(maps):
                    if (g.map[x] == f.map[x]) != (g.map[xp] == f.map[xp]):
                        wit = (i, x, xp, j)
                        break
                if wit:
                    break
            if wit:
                break
        if wit:
            break
    results.append(("value-transfer", wit is None, wit))
    return tuple(results)


@dataclass(frozen=True)
class GroupRestriction:
    rep: RepresentationMap
    group: FinSemigroup
    maps: tuple
    unit: int
    image: tuple[int, ...]


def group_restriction(maps, name="G") -> GroupRestriction:
    """Cut a shared-image transformation group down to the partial
    permutations it induces on the common image; an isomorphism because
    distinct elements already differ there."""
    maps = tuple(maps)
    group, unit, _ = transformation_group(maps, name=name)
    image = tuple(sorted(set(maps[unit].map)))
    members = set(image)
    win = maps[0].window
    pperms = []
    for m in maps:
        vals = tuple(m.map[x] if x in members else None for x in range(win))
        pp = PartialPerm(win, vals)
        if pp.im() != image:
            raise TheoremViolationError("restriction does not permute the common image")
        pperms.append(pp)
    rep = RepresentationMap(source=group, images=tuple(pperms), space=IN, window=win,
                            name=f"restrict_{name}")
    return GroupRestriction(rep=rep, group=group, maps=maps, unit=unit, image=image)


def bundled_group_fixtures():
    """Transformation groups whose neutral element is a proper retraction,
    not the identity map."""
    z2 = (Transformation(4, (0, 1, 0, 1)), Transformation(4, (1, 0, 1, 0)))
    z3 = (
        Transformation(5, (0, 1, 2, 0, 0)),
        Transformation(5, (1, 2, 0, 1, 1)),
        Transformation(5, (2, 0, 1, 2, 2)),
    )
    import itertools

    s3 = tuple(
        Transformation(6, p + p) for p in itertools.permutations(range(3))
    )
    return (("Z2_shared", z2), ("Z3_shared", z3), ("S3_shared", s3))


# -- Clifford structure --------------------------------------------------------

@dataclass(frozen=True)
class CliffordDecomposition:
    inv: InverseStructure
    semilattice: FinSemigroup
    idem: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]


def clifford_decompose(inv: InverseStructure) -> CliffordDecomposition:
    """Split a Clifford semigroup into its idempotent semilattice and the
    maximal subgroup over each idempotent, verifying that the components
    partition the carrier and that products factor through the meet: x*y
    equals (x*ef)*(y*ef) for x over e and y over f."""
    if not is_clifford(inv):
        raise DomainError("not a Clifford semigroup: some x*x^-1 differs from x^-1*x")
    idem = inv.idempotents
    sl, _ = subsemigroup(inv.base, idem)
    comps = tuple(maximal_subgroup(inv, e) for e in idem)
    seen = {}
    for k, comp in enumerate(comps):
        for x in comp:
            if x in seen:
                raise TheoremViolationError(f"element {x} lies over two idempotents")
            seen[x] = k
    if len(seen) != inv.n:
        raise TheoremViolationError("maximal subgroups do not cover the carrier")
    t = inv.base.table
    for x in range(inv.n):
        e = t[x][inv.inv[x]]
        for y in range(inv.n):
            f = t[y][inv.inv[y]]
            ef = t[e][f]
            if t[x][y] != t[t[x][ef]][t[y][ef]]:
                raise TheoremViolationError(f"strong product law fails at ({x}, {y})")
    return CliffordDecomposition(inv=inv, semilattice=sl, idem=idem, components=comps)


def clifford_product_embed(inv: InverseStructure) -> RepresentationMap:
    """Pack a Clifford semigroup into the product of its idempotent
    semilattice with one zero-extended maximal subgroup per idempotent.

    Component e of the image of s carries s*e when e lies below s*s^-1 and
    the adjoined zero otherwise; the first component records s*s^-1 itself.
    The product target is virtual, so large factor counts stay cheap.
    """
    dec = clifford_decompose(inv)
    t = inv.base.table
    factors = [dec.semilattice]
    positions = []
    for comp in dec.components:
        grp, order = subsemigroup(inv.base, comp)
        factors.append(adjoin_zero(grp))
        positions.append({x: i for i, x in enumerate(order)})
    prod = FinProduct(tuple(factors))
    sl_pos = {e: i for i, e in enumerate(dec.idem)}
    images = []
    for s in range(inv.n):
        ss1 = t[s][inv.inv[s]]
        parts = [sl_pos[ss1]]
        for k, e in enumerate(dec.idem):
            if natural_order(inv.base, e, ss1):
                se = t[s][e]
                if se not in positions[k]:
                    raise TheoremViolationError(f"{s}*{e} escapes its component")
                parts.append(positions[k][se])
            else:
                parts.append(len(dec.components[k]))
        images.append(prod.encode(parts))
    sample = 0 if inv.n <= 64 else 512
    return RepresentationMap(source=inv.base, images=tuple(images), space=FINITE,
                             target=prod, sample=sample,
                             name=f"clifford_product_{inv.base.name or inv.n}")


def semil_iso(e: PartialPerm) -> tuple[int, ...]:
    """Characteristic vector of the domain of an idempotent partial
    bijection; composition of idempotents becomes pointwise minimum."""
    if compose(e, e) != e:
        raise DomainError("not an idempotent partial bijection")
    return tuple(0 if v is None else 1 for v in e.map)


# -- topological audit ---------------------------------------------------------

def separating_opens(rep: RepresentationMap) -> tuple[BasicOpen, ...]:
    """Canonical point-separating basic opens of the target: for each pair of
    images, the single-atom constraints at the first window point where they
    differ."""
    if rep.space == FINITE:
        raise KindError("abstract finite targets have no basic opens")
    win = rep.window or max(getattr(i, "window", 1) for i in rep.images)

    def value(img, x):
        if isinstance(img, LazyMap):
            return lazy_eval(img, x)
        return img.map[x]

    def atom_open(img, x):
        v = value(img, x)
        if rep.space == NN:
            return BasicOpen(NN, ((x, v),))
        if v is None:
            return BasicOpen(IN, ((W_DOM, x),))
        return BasicOpen(IN, ((U_ATOM, x, v),))

    out = set()
    n = rep.source.n
    for i in range(n):
        for j in range(i + 1, n):
            x = next((x for x in range(win)
                      if value(rep.images[i], x) != value(rep.images[j], x)), None)
            if x is None:
                raise TheoremViolationError(
                    f"images {i} and {j} agree on the whole window")
            out.add(atom_open(rep.images[i], x))
            out.add(atom_open(rep.images[j], x))
    return tuple(sorted(out, key=lambda b: (len(b.atoms), str(b.atoms))))


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    preimage_failures: tuple  # (BasicOpen, preimage mask) pairs that are not open
    relative_failures: tuple  # source open masks whose image has no open trace
    undecidable: tuple        # basic opens whose membership could not be decided


def verify_embedding(rep: RepresentationMap, source_top=None, basic_opens=None) -> EmbeddingReport:
    """Topological audit of an already-verified injective homomorphism.

    Preimages of the given target basic opens must be open in the source,
    and the image of every source basic open must be a union of traces of
    target basic opens on the image set (relative openness).  Membership
    questions a lazy image cannot decide are reported, not guessed.  A None
    source means the discrete topology without materializing it.
    """
    from .topo import TopSemigroup, TopSpec, TruncatedPresentation

    if isinstance(source_top, TopSemigroup):
        source_top = source_top.top
    if source_top is None:
        is_open = lambda _m: True
        basis = tuple(1 << x for x in range(rep.source.n))
        carrier = rep.source.n
    elif isinstance(source_top, TopSpec):
        is_open = source_top.is_open
        # every open is a union of minimal neighborhoods, and the trace
        # family below is union-closed, so auditing the minimal ones suffices
        basis = tuple(sorted({source_top.min_nbhd(x) for x in range(source_top.n)}))
        carrier = source_top.n
    elif isinstance(source_top, TruncatedPresentation):
        is_open = source_top.is_open
        basis = source_top.basis_masks()
        carrier = source_top.base.n
    else:
        raise KindError(f"unsupported source topology {type(source_top).__name__}")
    if carrier != rep.source.n:
        raise KindError("source topology carrier does not match the representation source")
    if basic_opens is None:
        basic_opens = separating_opens(rep)

    n = rep.source.n
    traces = []
    bad_pre = []
    undecidable = []
    for b in basic_opens:
        mask = 0
        decided = True
        for i, img in enumerate(rep.images):
            try:
                if basic_open_member(img, b):
                    mask |= 1 << i
            except EvaluationError:
                undecidable.append(b)
                decided = False
                break
        if not decided:
            continue
        traces.append(mask)
        if not is_open(mask):
            bad_pre.append((b, mask))

    # atom[x] = intersection of all decided traces through x; a subset lies in
    # the union/intersection closure of the traces iff it contains the atom of
    # each of its points
    full = (1 << n) - 1
    atom = [full] * n
    for mask in traces:
        m = mask
        while m:
            low = m & -m
            atom[low.bit_length() - 1] &= mask
            m ^= low

    def in_closure(u):
        m = u
        while m:
            low = m & -m
            if atom[low.bit_length() - 1] & ~u:
                return False
            m ^= low
        return True

    bad_rel = tuple(u for u in basis if not in_closure(u))
    return EmbeddingReport(
        ok=not bad_pre and not bad_rel,
        preimage_failures=tuple(bad_pre),
        relative_failures=bad_rel,
        undecidable=tuple(undecidable),
    )
