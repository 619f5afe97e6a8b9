"""Independent reference implementations.

Everything here quantifies literally over the objects named in the
definitions (all partitions, all open sets, all subsets), trading speed for
directness, so the fast library paths can be cross-checked against them.
Nothing in this module calls the library code under test except for plain
data access (tables, open-set families, labels).
"""

from itertools import product as iproduct


def growth_vectors(n):
    """All canonical partition vectors of [0, n) in lexicographic order."""
    if n == 0:
        yield ()
        return
    stack = [((0,), 0)]
    while stack:
        prefix, mx = stack.pop()
        if len(prefix) == n:
            yield prefix
            continue
        for v in range(min(mx + 1, n - 1), -1, -1):
            stack.append((prefix + (v,), max(mx, v)))


def right_stable(table, vec):
    n = len(vec)
    for a in range(n):
        for b in range(a + 1, n):
            if vec[a] != vec[b]:
                continue
            for s in range(n):
                if vec[table[a][s]] != vec[table[b][s]]:
                    return False
    return True


def left_stable(table, vec):
    n = len(vec)
    for a in range(n):
        for b in range(a + 1, n):
            if vec[a] != vec[b]:
                continue
            for s in range(n):
                if vec[table[s][a]] != vec[table[s][b]]:
                    return False
    return True


def congruences_by_filter(table, two_sided=False):
    """Partition-filter enumeration: every canonical partition vector of the
    carrier, kept when stable under right (and optionally left) translation."""
    n = len(table)
    out = []
    for vec in growth_vectors(n):
        if right_stable(table, vec) and (not two_sided or left_stable(table, vec)):
            out.append(vec)
    return out


def assoc_by_triple_loop(table):
    n = len(table)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    return False
    return True


def vp_by_replay(table, inv, identity, vec):
    """Right-congruence dichotomy replay: for every s, either every t in the
    class of s satisfies 1 ~ t*t^-1, or right-translating s never leaves its
    class."""
    n = len(table)
    for a in range(n):
        first = all(vec[identity] == vec[table[t][inv[t]]]
                    for t in range(n) if vec[t] == vec[a])
        second = all(vec[table[a][t]] == vec[a] for t in range(n))
        if not (first or second):
            return False
    return True


# -- topology helpers ----------------------------------------------------------


def bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def upper_cone(table, y):
    """{z : z >= y} in a meet-semilattice: y*z = y."""
    return {z for z in range(len(table)) if table[y][z] == y}


def all_subsets(n):
    return range(1 << n)


def clopen_ideals_by_filter(table, opens):
    """Every subset that is open, has open complement, and absorbs right
    multiplication by the whole carrier."""
    n = len(table)
    full = (1 << n) - 1
    out = []
    for mask in all_subsets(n):
        if mask not in opens or (full & ~mask) not in opens:
            continue
        if all((1 << table[x][s]) & mask for x in bits(mask) for s in range(n)):
            out.append(mask)
    return out


def u_at_point_by_replay(table, opens, x):
    """For every open U containing x there are y in U and an open V containing
    x with V inside the upper cone of y."""
    for u_mask in opens:
        if not (u_mask >> x) & 1:
            continue
        good = False
        for y in bits(u_mask):
            cone = 0
            for z in upper_cone(table, y):
                cone |= 1 << z
            if any((v >> x) & 1 and not (v & ~cone) for v in opens):
                good = True
                break
        if not good:
            return False
    return True


def u2_at_point_by_replay(table, opens, x):
    """For every open U containing x there are y in U and a clopen ideal I
    with x outside I and the complement of I inside the upper cone of y."""
    n = len(table)
    full = (1 << n) - 1
    ideals = clopen_ideals_by_filter(table, opens)
    for u_mask in opens:
        if not (u_mask >> x) & 1:
            continue
        good = False
        for y in bits(u_mask):
            cone = 0
            for z in upper_cone(table, y):
                cone |= 1 << z
            for i_mask in ideals:
                rest = full & ~i_mask
                if not (i_mask >> x) & 1 and not (rest & ~cone):
                    good = True
                    break
            if good:
                break
        if not good:
            return False
    return True


def idempotent_mask(table):
    return sum(1 << e for e in range(len(table)) if table[e][e] == e)


def factor_set(table, inv, u_mask, w_mask):
    """{s : some b in U factors as b = e*s with e idempotent in W} meeting
    {s : s*s^-1 in W}."""
    n = len(table)
    emask = idempotent_mask(table) & w_mask
    out = 0
    for s in range(n):
        if not (w_mask >> table[s][inv[s]]) & 1:
            continue
        if any((u_mask >> table[e][s]) & 1 for e in bits(emask)):
            out |= 1 << s
    return out


def inversion_continuous_by_replay(table, inv, opens):
    n = len(table)
    for x in range(n):
        for o_mask in opens:
            if not (o_mask >> inv[x]) & 1:
                continue
            inv_ok = False
            for u_mask in opens:
                if not (u_mask >> x) & 1:
                    continue
                if all((o_mask >> inv[y]) & 1 for y in bits(u_mask)):
                    inv_ok = True
                    break
            if not inv_ok:
                return False
    return True


def ditop_by_replay(table, inv, opens, weak=False):
    """Literal definition: inversion continuous, and for every point x and
    every open O containing x there are opens U around x and W around x*x^-1
    (plus V around x^-1*x for the weak form) whose factorization set lies in
    O."""
    n = len(table)
    if not inversion_continuous_by_replay(table, inv, opens):
        return False
    for x in range(n):
        xx = table[x][inv[x]]
        xi = table[inv[x]][x]
        for o_mask in opens:
            if not (o_mask >> x) & 1:
                continue
            found = False
            for u_mask in opens:
                if not (u_mask >> x) & 1:
                    continue
                for w_mask in opens:
                    if not (w_mask >> xx) & 1:
                        continue
                    d = factor_set(table, inv, u_mask, w_mask)
                    if not weak:
                        if not (d & ~o_mask):
                            found = True
                            break
                        continue
                    for v_mask in opens:
                        if not (v_mask >> xi) & 1:
                            continue
                        dv = d & sum(1 << s for s in range(n)
                                     if (v_mask >> table[inv[s]][s]) & 1)
                        if not (dv & ~o_mask):
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if not found:
                return False
    return True


def min_nbhd_mask(opens, n, x):
    full = (1 << n) - 1
    out = full
    for o in opens:
        if (o >> x) & 1:
            out &= o
    return out


def basis_by_candidate_filter(table, opens):
    """Some right congruence has all classes open and every class inside each
    member's minimal neighborhood.  Checked by filtering every partition."""
    n = len(table)
    nb = [min_nbhd_mask(opens, n, x) for x in range(n)]
    for vec in congruences_by_filter(table):
        blocks = {}
        for x, c in enumerate(vec):
            blocks[c] = blocks.get(c, 0) | (1 << x)
        if all(not (nb[y] & ~blocks[vec[y]]) for y in range(n)) and \
                all(not (blocks[vec[x]] & ~nb[x]) for x in range(n)):
            return True
    return False


# -- shared-image transformation group laws ------------------------------------


def law_replay(maps):
    """The six shared-image laws, replayed from scratch on concrete window
    maps: (unit, image, permutation, inverse, separation, transfer)."""
    maps = list(maps)
    win = maps[0].window
    table = {}
    for f in maps:
        for g in maps:
            h = tuple(g(f(x)) for x in range(win))
            table[(f.map, g.map)] = h
    units = [u for u in maps
             if all(table[(u.map, f.map)] == f.map and table[(f.map, u.map)] == f.map
                    for f in maps)]
    if len(units) != 1:
        return None
    unit = units[0]
    image = sorted(set(unit(x) for x in range(win)))
    results = {}
    results["unit-fixes-image"] = all(unit(x) == x for x in image)
    results["common-image"] = all(sorted(set(f(x) for x in range(win))) == image
                                  for f in maps)
    results["restriction-permutes"] = all(
        sorted(f(x) for x in image) == image for f in maps)
    inverses = {}
    for f in maps:
        cands = [g for g in maps if table[(f.map, g.map)] == unit.map
                 and table[(g.map, f.map)] == unit.map]
        if len(cands) != 1:
            return None
        inverses[f.map] = cands[0]
    results["inverse-restriction"] = all(
        inverses[f.map](f(x)) == x for f in maps for x in image)
    results["restriction-separates"] = all(
        f.map == g.map or any(f(x) != g(x) for x in image)
        for f in maps for g in maps)
    ok = True
    for f in maps:
        back = {f(x): x for x in image}
        for x in range(win):
            xp = back[f(x)]
            for g in maps:
                if (f(x) == g(x)) != (f(xp) == g(xp)):
                    ok = False
    results["value-transfer"] = ok
    return results


def scattered_height_by_replay(n, opens):
    """Iterate literal Cantor-Bendixson derivatives on the raw open family.

    A point is isolated in a subspace A when some open meets A exactly in
    that point.  Returns the number of derivative steps needed to empty the
    carrier, or None if the sequence stalls on a nonempty perfect kernel.
    """
    alive = frozenset(range(n))
    steps = 0
    while alive:
        isolated = set()
        for x in alive:
            for u in opens:
                if {p for p in alive if (u >> p) & 1} == {x}:
                    isolated.add(x)
                    break
        if not isolated:
            return None
        alive = alive - isolated
        steps += 1
    return steps
