"""Finite transformations, partial permutations, and lazily evaluated maps.

Composition is read left to right throughout: (x)(f*g) = ((x)f)g.  A
Transformation on window n is a total map n -> n; a PartialPerm is an
injective partial map whose domain and image live inside the window.  LazyMap
is a small closed combinator language for window-evaluable elements of the
full function space on the naturals and of the partial-bijection space;
evaluation returns None where the map is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, EvaluationError, LoadError, WindowEscapeError


@dataclass(frozen=True)
class Transformation:
    window: int
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.window:
            raise DomainError(f"map of length {len(self.map)} on window {self.window}")
        for x, v in enumerate(self.map):
            if not 0 <= v < self.window:
                raise DomainError(f"value {v} at {x} outside window {self.window}")

    def __call__(self, x):
        return self.map[x]


def identity_transformation(n) -> Transformation:
    return Transformation(n, tuple(range(n)))


@dataclass(frozen=True)
class PartialPerm:
    """Injective partial map; ``map[x] is None`` marks undefined points."""

    window: int
    map: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.window:
            raise DomainError(f"map of length {len(self.map)} on window {self.window}")
        seen = set()
        for x, v in enumerate(self.map):
            if v is None:
                continue
            if not 0 <= v < self.window:
                raise DomainError(f"value {v} at {x} outside window {self.window}")
            if v in seen:
                raise DomainError(f"not injective: value {v} repeats")
            seen.add(v)

    def __call__(self, x):
        return self.map[x]

    def dom(self) -> tuple[int, ...]:
        return tuple(x for x, v in enumerate(self.map) if v is not None)

    def im(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.map if v is not None))

    def graph(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, v) for x, v in enumerate(self.map) if v is not None)


def pp_from_pairs(n, pairs) -> PartialPerm:
    vals: list[int | None] = [None] * n
    for x, y in pairs:
        if vals[x] is not None:
            raise DomainError(f"point {x} mapped twice")
        vals[x] = y
    return PartialPerm(n, tuple(vals))


def identity_pp(n) -> PartialPerm:
    return PartialPerm(n, tuple(range(n)))


def empty_pp(n) -> PartialPerm:
    return PartialPerm(n, (None,) * n)


def compose(f, g):
    """Left-to-right composition of two same-window maps of the same type."""
    if type(f) is not type(g):
        raise DomainError(f"cannot compose {type(f).__name__} with {type(g).__name__}")
    if isinstance(f, (Transformation, PartialPerm)):
        if f.window != g.window:
            raise DomainError("window mismatch")
        if isinstance(f, Transformation):
            return Transformation(f.window, tuple(g.map[v] for v in f.map))
        vals = tuple(None if v is None else g.map[v] for v in f.map)
        return PartialPerm(f.window, vals)
    if isinstance(f, LazyMap):
        return Compose(f, g)
    raise DomainError(f"cannot compose {type(f).__name__}")


def invert(f: PartialPerm) -> PartialPerm:
    """Relational converse of an injective partial map."""
    vals: list[int | None] = [None] * f.window
    for x, v in enumerate(f.map):
        if v is not None:
            vals[v] = x
    return PartialPerm(f.window, tuple(vals))


# -- lazy maps ---------------------------------------------------------------

class LazyMap:
    """Base class of the combinator AST; subclasses implement ``eval``."""

    def eval(self, x: int) -> int | None:
        raise NotImplementedError

    def __call__(self, x):
        return self.eval(x)


@dataclass(frozen=True)
class Identity(LazyMap):
    def eval(self, x):
        return x


@dataclass(frozen=True)
class Const(LazyMap):
    value: int

    def eval(self, x):
        return self.value


@dataclass(frozen=True)
class FiniteTable(LazyMap):
    """Finitely many listed exceptions over a fallback map.  A None value in
    the table makes the point undefined."""

    entries: tuple[tuple[int, int | None], ...]
    fallback: LazyMap

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(k), v) for k, v in self.entries))
        keys = [k for k, _ in self.entries]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate table keys")

    def eval(self, x):
        for k, v in self.entries:
            if k == x:
                return v
        return self.fallback.eval(x)


@dataclass(frozen=True)
class AffineParity(LazyMap):
    """Block map on residue classes: a rule (r, inner, r_out) sends
    x = q*modulus + r to inner(q)*modulus + r_out.  Residues without a rule
    are undefined."""

    modulus: int
    rules: tuple[tuple[int, LazyMap, int], ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError("modulus must be positive")
        seen = set()
        for r, _, r_out in self.rules:
            if not (0 <= r < self.modulus and 0 <= r_out < self.modulus):
                raise DomainError(f"residue pair ({r}, {r_out}) outside modulus {self.modulus}")
            if r in seen:
                raise DomainError(f"duplicate rule for residue {r}")
            seen.add(r)

    def eval(self, x):
        q, r = divmod(x, self.modulus)
        for rr, inner, r_out in self.rules:
            if rr == r:
                v = inner.eval(q)
                return None if v is None else v * self.modulus + r_out
        return None


UNDEFINED = AffineParity(1, ())  # nowhere-defined map


def pair_index(i, j) -> int:
    """The pairing 2^i * (2j + 1) - 1; row i sweeps the block A_i."""
    return (1 << i) * (2 * j + 1) - 1


def unpair_index(x):
    """Inverse of pair_index: block and offset of a natural number."""
    v = x + 1
    i = (v & -v).bit_length() - 1
    return i, ((v >> i) - 1) // 2


@dataclass(frozen=True)
class PairBlock(LazyMap):
    """Acts blockwise through the pairing function: block i is moved by
    ``inners[i]``; blocks past the list are left pointwise fixed."""

    inners: tuple[LazyMap, ...]

    def eval(self, x):
        i, j = unpair_index(x)
        if i >= len(self.inners):
            return x
        v = self.inners[i].eval(j)
        return None if v is None else pair_index(i, v)


@dataclass(frozen=True)
class Compose(LazyMap):
    first: LazyMap
    second: LazyMap

    def eval(self, x):
        v = self.first.eval(x)
        return None if v is None else self.second.eval(v)


def lazy_eval(m: LazyMap, x: int) -> int | None:
    if x < 0:
        raise EvaluationError(f"negative point {x}")
    return m.eval(x)


def window_restrict(m: LazyMap, n: int) -> Transformation:
    """Restriction to [0, n) as a total transformation; raises a
    WindowEscapeError naming the first escaping or undefined point."""
    vals = []
    for x in range(n):
        v = m.eval(x)
        if v is None or v >= n:
            raise WindowEscapeError(x, v, n)
        vals.append(v)
    return Transformation(n, tuple(vals))


def agree_on_window(f, g, n) -> bool:
    return all(f.eval(x) == g.eval(x) for x in range(n))


def lazy_extend_identity(t: Transformation) -> LazyMap:
    """View a window transformation inside the full function space by fixing
    every point beyond the window; this respects composition because the
    window maps into itself."""
    return FiniteTable(tuple((x, t.map[x]) for x in range(t.window)), Identity())


def lazy_extend_undefined(p: PartialPerm) -> LazyMap:
    """View a window partial permutation inside the partial-bijection space by
    leaving everything beyond the window undefined."""
    return FiniteTable(tuple((x, p.map[x]) for x in range(p.window)), UNDEFINED)


def lazy_to_doc(m: LazyMap) -> dict:
    if isinstance(m, Identity):
        return {"kind": "identity"}
    if isinstance(m, Const):
        return {"kind": "const", "value": m.value}
    if isinstance(m, FiniteTable):
        return {"kind": "table", "entries": [[k, v] for k, v in m.entries],
                "fallback": lazy_to_doc(m.fallback)}
    if isinstance(m, AffineParity):
        return {"kind": "affine", "modulus": m.modulus,
                "rules": [[r, lazy_to_doc(inner), r_out] for r, inner, r_out in m.rules]}
    if isinstance(m, PairBlock):
        return {"kind": "pairblock", "inners": [lazy_to_doc(i) for i in m.inners]}
    if isinstance(m, Compose):
        return {"kind": "compose", "first": lazy_to_doc(m.first), "second": lazy_to_doc(m.second)}
    raise DomainError(f"not a serializable lazy map: {type(m).__name__}")


def lazy_from_doc(doc) -> LazyMap:
    try:
        kind = doc["kind"]
        if kind == "identity":
            return Identity()
        if kind == "const":
            return Const(int(doc["value"]))
        if kind == "table":
            return FiniteTable(tuple((int(k), None if v is None else int(v)) for k, v in doc["entries"]),
                               lazy_from_doc(doc["fallback"]))
        if kind == "affine":
            return AffineParity(int(doc["modulus"]),
                                tuple((int(r), lazy_from_doc(inner), int(r_out))
                                      for r, inner, r_out in doc["rules"]))
        if kind == "pairblock":
            return PairBlock(tuple(lazy_from_doc(i) for i in doc["inners"]))
        if kind == "compose":
            return Compose(lazy_from_doc(doc["first"]), lazy_from_doc(doc["second"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise LoadError(f"malformed lazy map document: {exc}") from exc
    raise LoadError(f"unknown lazy map kind {kind!r}")


# -- basic open sets ---------------------------------------------------------

NN = "NN"  # the space of total maps on the naturals
IN = "IN"  # the space of partial bijections of the naturals

U_ATOM = "U"        # (x, y) belongs to the graph
W_DOM = "W"         # x is outside the domain
W_IM = "Winv"       # x is outside the image


@dataclass(frozen=True)
class BasicOpen:
    """A basic open set of one of the two target spaces.

    For NN the atoms are graph constraints (x, y) and the set is
    {g : g(x) = y for all listed pairs}.  For IN each atom is one of
    (U, x, y), (W, x), (Winv, x) from the canonical subbasis.
    """

    space: str
    atoms: tuple[tuple, ...]

    def __post_init__(self):
        if self.space not in (NN, IN):
            raise DomainError(f"unknown space {self.space!r}")
        for atom in self.atoms:
            if self.space == NN:
                if len(atom) != 2:
                    raise DomainError(f"NN atom must be a pair, got {atom!r}")
            elif atom[0] not in (U_ATOM, W_DOM, W_IM):
                raise DomainError(f"unknown IN atom {atom!r}")

    def mentioned_points(self):
        if self.space == NN:
            return tuple(x for x, _ in self.atoms)
        return tuple(a[1] for a in self.atoms)


def _value_at(h, x):
    if isinstance(h, (Transformation, PartialPerm)):
        if x >= h.window:
            if isinstance(h, Transformation):
                raise EvaluationError(f"transformation window {h.window} cannot see point {x}")
            return None  # a window partial permutation is undefined beyond it
        return h.map[x]
    if isinstance(h, LazyMap):
        return h.eval(x)
    raise DomainError(f"not an evaluable element: {type(h).__name__}")


def basic_open_member(h, b: BasicOpen) -> bool:
    """Exact membership of an element in a basic open set.

    Raises EvaluationError when the element cannot decide a constraint, e.g.
    a transformation window smaller than a mentioned point, or an image
    constraint against a lazy map with no finite image description.
    """
    if b.space == NN:
        if isinstance(h, PartialPerm):
            raise EvaluationError("partial maps do not live in the total function space")
        for x, y in b.atoms:
            if _value_at(h, x) != y:
                return False
        return True
    if isinstance(h, Transformation):
        raise EvaluationError("total window maps do not live in the partial-bijection space")
    for atom in b.atoms:
        if atom[0] == U_ATOM:
            _, x, y = atom
            if _value_at(h, x) != y:
                return False
        elif atom[0] == W_DOM:
            if _value_at(h, atom[1]) is not None:
                return False
        else:  # W_IM
            x = atom[1]
            if isinstance(h, PartialPerm):
                if x in h.im():
                    return False
            else:
                raise EvaluationError("image membership is not decidable for a lazy map")
    return True
