"""Levelwise-finite simplicial sets: nerves, two-sided bar constructions,
barycentric subdivision, diagonals, and component/Euler diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional

from .errors import CapExceeded, InvalidInput, SizeMismatch


@dataclass(eq=False)
class SimplicialCheck:
    name: str
    passed: bool
    witness: Optional[tuple] = None


@dataclass(eq=False)
class SimplicialReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = ["simplicial identity report"]
        for c in self.checks:
            line = f"  {c.name}: {'pass' if c.passed else 'FAIL'}"
            if c.witness is not None:
                line += f" witness={c.witness!r}"
            lines.append(line)
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class FiniteSimplicialSet:
    """Levels 0..dim_cap with tabulated faces and degeneracies.

    Degenerate elements are stored like any others; nondegeneracy is computed
    from the degeneracy tables, never recorded separately.
    """

    dim_cap: int
    levels: tuple  # levels[n] = tuple of elements
    faces: dict  # (n, i) -> {element: element}, n in 1..dim_cap
    degeneracies: dict  # (n, i) -> {element: element}, n in 0..dim_cap-1
    provenance: str = ""

    def __post_init__(self):
        if self.dim_cap < 0 or len(self.levels) != self.dim_cap + 1:
            raise InvalidInput("levels must cover 0..dim_cap")
        report = check_simplicial_identities(self)
        if not report.passed:
            bad = next(c for c in report.checks if not c.passed)
            raise InvalidInput(f"simplicial identities fail: {bad.name} at {bad.witness!r}")

    def level(self, n: int) -> tuple:
        if not 0 <= n <= self.dim_cap:
            raise CapExceeded(f"level {n} is beyond the cap {self.dim_cap}")
        return self.levels[n]

    def face(self, n: int, i: int, x):
        return self.faces[(n, i)][x]

    def degeneracy(self, n: int, i: int, x):
        return self.degeneracies[(n, i)][x]

    def is_degenerate(self, n: int, x) -> bool:
        if n == 0:
            return False
        for i in range(n):
            for y in self.levels[n - 1]:
                if self.degeneracies[(n - 1, i)][y] == x:
                    return True
        return False

    def nondegenerate(self, n: int) -> tuple:
        return tuple(x for x in self.level(n) if not self.is_degenerate(n, x))

    def apply_operator(self, n: int, x, alpha) -> tuple:
        """Apply a monotone operator alpha: [p] -> [n] to x in level n.

        Returns (p, x * alpha), factoring alpha into faces then degeneracies.
        """
        alpha = tuple(alpha)
        p = len(alpha) - 1
        if any(a > b for a, b in zip(alpha, alpha[1:])) or not alpha:
            raise InvalidInput(f"operator {alpha} is not monotone and non-empty")
        if alpha[0] < 0 or alpha[-1] > n:
            raise InvalidInput(f"operator {alpha} does not map into [{n}]")
        image = sorted(set(alpha))
        current, level = x, n
        for j in sorted(set(range(n + 1)) - set(image), reverse=True):
            current = self.face(level, j, current)
            level -= 1
        q = level

        def apply_surjection(positions):
            # positions: a monotone surjection onto 0..q; factor off one
            # codegeneracy at a time and apply the matching s_i outermost
            local_p = len(positions) - 1
            if local_p == q:
                return current
            i = next(j for j in range(local_p) if positions[j] == positions[j + 1])
            inner = apply_surjection(positions[: i + 1] + positions[i + 2 :])
            return self.degeneracy(local_p - 1, i, inner)

        result = apply_surjection(tuple(image.index(a) for a in alpha))
        return p, result


def check_simplicial_identities(s: FiniteSimplicialSet) -> SimplicialReport:
    """Exhaustively verify totality and all simplicial identities on the
    tabulated range, with witnesses on failure."""
    checks: list[SimplicialCheck] = []

    def check(name, condition):
        witness = None
        for item in condition():
            witness = item
            break
        checks.append(SimplicialCheck(name, witness is None, witness))

    def totality():
        for n in range(1, s.dim_cap + 1):
            for i in range(n + 1):
                table = s.faces.get((n, i))
                if table is None:
                    yield ("missing face table", n, i)
                    return
                for x in s.levels[n]:
                    if x not in table or table[x] not in set(s.levels[n - 1]):
                        yield ("face", n, i, x)
                        return
        for n in range(0, s.dim_cap):
            for i in range(n + 1):
                table = s.degeneracies.get((n, i))
                if table is None:
                    yield ("missing degeneracy table", n, i)
                    return
                for x in s.levels[n]:
                    if x not in table or table[x] not in set(s.levels[n + 1]):
                        yield ("degeneracy", n, i, x)
                        return

    check("totality", totality)
    if not checks[-1].passed:
        return SimplicialReport(checks)

    def face_face():
        for n in range(2, s.dim_cap + 1):
            for j in range(n + 1):
                for i in range(j):
                    for x in s.levels[n]:
                        if s.face(n - 1, i, s.face(n, j, x)) != s.face(
                            n - 1, j - 1, s.face(n, i, x)
                        ):
                            yield (n, i, j, x)

    check("d_i d_j = d_{j-1} d_i (i<j)", face_face)

    def degen_degen():
        for n in range(0, s.dim_cap - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    for x in s.levels[n]:
                        if s.degeneracy(n + 1, i, s.degeneracy(n, j, x)) != s.degeneracy(
                            n + 1, j + 1, s.degeneracy(n, i, x)
                        ):
                            yield (n, i, j, x)

    check("s_i s_j = s_{j+1} s_i (i<=j)", degen_degen)

    def face_degen():
        for n in range(0, s.dim_cap):
            for j in range(n + 1):
                for i in range(n + 2):
                    for x in s.levels[n]:
                        out = s.face(n + 1, i, s.degeneracy(n, j, x))
                        if i == j or i == j + 1:
                            expected = x
                        elif i < j:
                            expected = s.degeneracy(n - 1, j - 1, s.face(n, i, x))
                        else:
                            expected = s.degeneracy(n - 1, j, s.face(n, i - 1, x))
                        if out != expected:
                            yield (n, i, j, x)

    check("d_i s_j relations", face_degen)
    return SimplicialReport(checks)


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """A levelwise function commuting with every tabulated operator."""

    source: FiniteSimplicialSet
    target: FiniteSimplicialSet
    components: dict  # n -> {element: element}

    def __post_init__(self):
        cap = min(self.source.dim_cap, self.target.dim_cap)
        for n in range(cap + 1):
            comp = self.components.get(n)
            if comp is None:
                raise InvalidInput(f"missing component at level {n}")
            for x in self.source.level(n):
                if comp.get(x) not in set(self.target.level(n)):
                    raise InvalidInput(f"level {n} component is not total at {x!r}")
        for n in range(1, cap + 1):
            for i in range(n + 1):
                for x in self.source.level(n):
                    if self.components[n - 1][self.source.face(n, i, x)] != self.target.face(
                        n, i, self.components[n][x]
                    ):
                        raise InvalidInput(f"map does not commute with d_{i} at level {n}: {x!r}")
        for n in range(0, cap):
            for i in range(n + 1):
                for x in self.source.level(n):
                    if self.components[n + 1][
                        self.source.degeneracy(n, i, x)
                    ] != self.target.degeneracy(n, i, self.components[n][x]):
                        raise InvalidInput(f"map does not commute with s_{i} at level {n}: {x!r}")

    def apply(self, n: int, x):
        return self.components[n][x]


def identity_map(s: FiniteSimplicialSet) -> SimplicialMap:
    return SimplicialMap(s, s, {n: {x: x for x in s.level(n)} for n in range(s.dim_cap + 1)})


# --- categories and nerves -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """Objects, morphisms, and total source/target/identity/composition tables."""

    objects: tuple
    morphisms: tuple
    src: dict
    tgt: dict
    ident: dict  # object -> identity morphism
    comp: dict  # (g, f) -> g o f, defined when src(g) == tgt(f)

    def __post_init__(self):
        for f in self.morphisms:
            if self.src[f] not in self.objects or self.tgt[f] not in self.objects:
                raise InvalidInput(f"morphism {f!r} has untabulated endpoints")
        for x in self.objects:
            i = self.ident.get(x)
            if i not in self.morphisms or self.src[i] != x or self.tgt[i] != x:
                raise InvalidInput(f"bad identity for object {x!r}")
        for g in self.morphisms:
            for f in self.morphisms:
                if self.src[g] == self.tgt[f]:
                    gf = self.comp.get((g, f))
                    if gf not in self.morphisms:
                        raise InvalidInput(f"composition missing for {(g, f)!r}")
                    if self.src[gf] != self.src[f] or self.tgt[gf] != self.tgt[g]:
                        raise InvalidInput(f"composite {(g, f)!r} has wrong endpoints")
        for f in self.morphisms:
            if self.comp[(self.ident[self.tgt[f]], f)] != f or self.comp[(f, self.ident[self.src[f]])] != f:
                raise InvalidInput(f"unit law fails at {f!r}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.src[h] != self.tgt[g]:
                    continue
                for f in self.morphisms:
                    if self.src[g] != self.tgt[f]:
                        continue
                    if self.comp[(self.comp[(h, g)], f)] != self.comp[(h, self.comp[(g, f)])]:
                        raise InvalidInput(f"associativity fails at {(h, g, f)!r}")

    def compose(self, g, f):
        return self.comp[(g, f)]


def poset_category(objects, leq: Callable) -> FiniteCategory:
    """The category of a partial order: one morphism (x, y) whenever x <= y."""
    objects = tuple(objects)
    morphisms = tuple((x, y) for x in objects for y in objects if leq(x, y))
    src = {m: m[0] for m in morphisms}
    tgt = {m: m[1] for m in morphisms}
    ident = {x: (x, x) for x in objects}
    comp = {
        (g, f): (f[0], g[1])
        for g in morphisms
        for f in morphisms
        if g[0] == f[1]
    }
    return FiniteCategory(objects, morphisms, src, tgt, ident, comp)


def nerve(category: FiniteCategory, dim_cap: int) -> FiniteSimplicialSet:
    """Composable chains: level k holds (f_1, ..., f_k), inner faces compose."""
    if dim_cap < 0:
        raise InvalidInput("dim_cap must be non-negative")
    levels = [tuple(category.objects)]
    chains = [()]
    current = [((), x) for x in category.objects]  # (chain, endpoint)
    for _ in range(dim_cap):
        nxt = []
        for chain, end in current:
            for f in category.morphisms:
                if category.src[f] == end:
                    nxt.append((chain + (f,), category.tgt[f]))
        current = nxt
        levels.append(tuple(chain for chain, _ in current))

    faces, degeneracies = {}, {}
    for n in range(1, dim_cap + 1):
        for i in range(n + 1):
            table = {}
            for chain in levels[n]:
                if n == 1:
                    table[chain] = category.tgt[chain[0]] if i == 0 else category.src[chain[0]]
                elif i == 0:
                    table[chain] = chain[1:]
                elif i == n:
                    table[chain] = chain[:-1]
                else:
                    table[chain] = chain[: i - 1] + (
                        category.compose(chain[i], chain[i - 1]),
                    ) + chain[i + 1 :]
            faces[(n, i)] = table
    for n in range(0, dim_cap):
        for i in range(n + 1):
            table = {}
            for chain in levels[n]:
                if n == 0:
                    table[chain] = (category.ident[chain],)
                else:
                    obj = category.src[chain[0]] if i == 0 else category.tgt[chain[i - 1]]
                    table[chain] = chain[:i] + (category.ident[obj],) + chain[i:]
            degeneracies[(n, i)] = table
    return FiniteSimplicialSet(
        dim_cap, tuple(levels), faces, degeneracies, provenance="nerve"
    )


# --- monoids, actions, and the two-sided bar ------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    elements: tuple
    unit: Hashable
    table: dict  # (a, b) -> ab

    def __post_init__(self):
        if self.unit not in self.elements:
            raise InvalidInput("unit must be an element")
        for a in self.elements:
            for b in self.elements:
                if self.table.get((a, b)) not in self.elements:
                    raise InvalidInput(f"multiplication missing for {(a, b)!r}")
        for a in self.elements:
            if self.table[(self.unit, a)] != a or self.table[(a, self.unit)] != a:
                raise InvalidInput(f"unit law fails at {a!r}")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                        raise InvalidInput(f"associativity fails at {(a, b, c)!r}")

    def mul(self, a, b):
        return self.table[(a, b)]


def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid(("1",), "1", {("1", "1"): "1"})


@dataclass(frozen=True, eq=False)
class RightAction:
    monoid: FiniteMonoid
    carrier: tuple
    table: dict  # (x, m) -> x.m

    def __post_init__(self):
        for x in self.carrier:
            for m in self.monoid.elements:
                if self.table.get((x, m)) not in self.carrier:
                    raise InvalidInput(f"right action missing at {(x, m)!r}")
        for x in self.carrier:
            if self.table[(x, self.monoid.unit)] != x:
                raise InvalidInput(f"right unit law fails at {x!r}")
            for m in self.monoid.elements:
                for m2 in self.monoid.elements:
                    if self.table[(self.table[(x, m)], m2)] != self.table[
                        (x, self.monoid.mul(m, m2))
                    ]:
                        raise InvalidInput(f"right action law fails at {(x, m, m2)!r}")

    def act(self, x, m):
        return self.table[(x, m)]


@dataclass(frozen=True, eq=False)
class LeftAction:
    monoid: FiniteMonoid
    carrier: tuple
    table: dict  # (m, y) -> m.y

    def __post_init__(self):
        for y in self.carrier:
            for m in self.monoid.elements:
                if self.table.get((m, y)) not in self.carrier:
                    raise InvalidInput(f"left action missing at {(m, y)!r}")
        for y in self.carrier:
            if self.table[(self.monoid.unit, y)] != y:
                raise InvalidInput(f"left unit law fails at {y!r}")
            for m in self.monoid.elements:
                for m2 in self.monoid.elements:
                    if self.table[(m, self.table[(m2, y)])] != self.table[
                        (self.monoid.mul(m, m2), y)
                    ]:
                        raise InvalidInput(f"left action law fails at {(m, m2, y)!r}")

    def act(self, m, y):
        return self.table[(m, y)]


def two_sided_bar(
    x_action: RightAction, monoid: FiniteMonoid, y_action: LeftAction, dim_cap: int
) -> FiniteSimplicialSet:
    """Level k holds (x, (m_1..m_k), y); outer faces act, inner faces multiply."""
    if x_action.monoid is not monoid or y_action.monoid is not monoid:
        raise InvalidInput("both actions must be over the given monoid")
    levels = []
    for k in range(dim_cap + 1):
        level = []
        for x in x_action.carrier:
            for ms in _tuples(monoid.elements, k):
                for y in y_action.carrier:
                    level.append((x, ms, y))
        levels.append(tuple(level))

    faces, degeneracies = {}, {}
    for k in range(1, dim_cap + 1):
        for i in range(k + 1):
            table = {}
            for (x, ms, y) in levels[k]:
                if i == 0:
                    table[(x, ms, y)] = (x_action.act(x, ms[0]), ms[1:], y)
                elif i == k:
                    table[(x, ms, y)] = (x, ms[:-1], y_action.act(ms[-1], y))
                else:
                    merged = ms[: i - 1] + (monoid.mul(ms[i - 1], ms[i]),) + ms[i + 1 :]
                    table[(x, ms, y)] = (x, merged, y)
            faces[(k, i)] = table
    for k in range(0, dim_cap):
        for i in range(k + 1):
            table = {}
            for (x, ms, y) in levels[k]:
                table[(x, ms, y)] = (x, ms[:i] + (monoid.unit,) + ms[i:], y)
            degeneracies[(k, i)] = table
    return FiniteSimplicialSet(
        dim_cap, tuple(levels), faces, degeneracies, provenance="two_sided_bar"
    )


def _tuples(pool, k):
    if k == 0:
        yield ()
        return
    for rest in _tuples(pool, k - 1):
        for m in pool:
            yield (m,) + rest


# --- components and Euler characteristic ----------------------------------------

def pi0(s: FiniteSimplicialSet) -> tuple:
    """Components of the vertex set under d_0(x) ~ d_1(x), deterministically sorted."""
    parent = {v: v for v in s.level(0)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    if s.dim_cap >= 1:
        for e in s.level(1):
            union(s.face(1, 0, e), s.face(1, 1, e))
    groups: dict = {}
    for v in s.level(0):
        groups.setdefault(find(v), []).append(v)
    return tuple(
        tuple(sorted(group, key=repr)) for group in
        sorted(groups.values(), key=lambda g: repr(sorted(g, key=repr)))
    )


def euler_char(s: FiniteSimplicialSet) -> int:
    """Alternating sum of nondegenerate counts; refuses truncation at the cap."""
    top = s.nondegenerate(s.dim_cap) if s.dim_cap >= 1 else ()
    if s.dim_cap >= 1 and top:
        raise CapExceeded(
            f"nondegenerate simplices at the cap level {s.dim_cap}; higher levels unknown"
        )
    total = 0
    for n in range(s.dim_cap + 1):
        total += (-1) ** n * len(s.nondegenerate(n))
    return total


# --- barycentric subdivision ------------------------------------------------

def _face_closure(s: FiniteSimplicialSet, n: int, x) -> set:
    """All iterated faces of (n, x), traversing through degenerate elements."""
    seen = {(n, x)}
    frontier = [(n, x)]
    while frontier:
        m, z = frontier.pop()
        if m == 0:
            continue
        for i in range(m + 1):
            item = (m - 1, s.face(m, i, z))
            if item not in seen:
                seen.add(item)
                frontier.append(item)
    return seen


def nondegenerate_simplices(s: FiniteSimplicialSet) -> list:
    return [(n, x) for n in range(s.dim_cap + 1) for x in s.nondegenerate(n)]


def face_poset(s: FiniteSimplicialSet):
    """Nondegenerate simplices ordered by iterated-face reachability."""
    objs = nondegenerate_simplices(s)
    closures = {obj: _face_closure(s, *obj) for obj in objs}

    def leq(a, b):
        return a == b or a in closures[b]

    return objs, leq


def subdivide(s: FiniteSimplicialSet) -> FiniteSimplicialSet:
    """The nerve of the face poset of nondegenerate simplices.

    The output cap is one above the longest strict chain, so the top level is
    entirely degenerate and Euler characteristics stay computable.
    """
    if s.dim_cap >= 1 and s.nondegenerate(s.dim_cap):
        raise CapExceeded(
            f"nondegenerate simplices at the cap level {s.dim_cap}; subdivision is not determined"
        )
    objs, leq = face_poset(s)
    if not objs:
        raise InvalidInput("cannot subdivide an empty simplicial set")
    # longest strict chain via DFS over the strict order
    longer: dict = {}

    def longest_from(a):
        if a in longer:
            return longer[a]
        best = 1
        for b in objs:
            if b != a and leq(a, b):
                best = max(best, 1 + longest_from(b))
        longer[a] = best
        return best

    max_chain = max(longest_from(a) for a in objs)
    category = poset_category(objs, leq)
    result = nerve(category, max_chain)
    return FiniteSimplicialSet(
        result.dim_cap,
        result.levels,
        result.faces,
        result.degeneracies,
        provenance="subdivide",
    )


def _embeddings(s: FiniteSimplicialSet, small, big) -> list:
    """All monotone injections along which `small` is a face of `big`."""
    (p, x), (m, y) = small, big
    if p > m:
        return []
    out = []
    for subset in _increasing_maps(p, m):
        if s.apply_operator(m, y, subset) == (p, x):
            out.append(subset)
    return out


def _increasing_maps(p, m):
    # strictly increasing (p+1)-subsets of 0..m
    def rec(start, need):
        if need == 0:
            yield ()
            return
        for v in range(start, m - need + 2):
            for rest in rec(v + 1, need - 1):
                yield (v,) + rest

    yield from rec(0, p + 1)


def last_vertex_map(s: FiniteSimplicialSet, subdivided: Optional[FiniteSimplicialSet] = None) -> SimplicialMap:
    """The simplicial map from the subdivision back to the original complex,
    sending a chain to the target simplex spanned by the last vertices of its
    members."""
    sub = subdivided if subdivided is not None else subdivide(s)
    components: dict = {}
    for p in range(sub.dim_cap + 1):
        comp = {}
        for element in sub.level(p):
            if p == 0:
                chain_objs = [element]
            else:
                chain_objs = [element[0][0]] + [arrow[1] for arrow in element]
            top = chain_objs[-1]
            alpha = []
            for obj in chain_objs:
                embeddings = _embeddings(s, obj, top)
                if not embeddings:
                    raise InvalidInput(f"{obj!r} is not a face of {top!r}")
                alpha.append(max(emb[-1] for emb in embeddings))
            if any(a > b for a, b in zip(alpha, alpha[1:])):
                raise InvalidInput(f"last-vertex indices {alpha} are not monotone")
            level, image = s.apply_operator(top[0], top[1], tuple(alpha))
            if level != p:
                raise InvalidInput("last-vertex image landed in the wrong level")
            comp[element] = image
        components[p] = comp
    return SimplicialMap(sub, s, components)


# --- bisimplicial sets -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BisimplicialSet:
    """Doubly indexed levels with commuting horizontal and vertical structures."""

    hcap: int
    vcap: int
    levels: dict  # (p, q) -> tuple
    hfaces: dict  # (p, q, i) -> table, to (p-1, q)
    hdegens: dict  # (p, q, i) -> table, to (p+1, q)
    vfaces: dict  # (p, q, i) -> table, to (p, q-1)
    vdegens: dict  # (p, q, i) -> table, to (p, q+1)

    def __post_init__(self):
        for q in range(self.vcap + 1):
            row = _row_sset(self, q)
            report = check_simplicial_identities(row)
            if not report.passed:
                raise InvalidInput(f"horizontal identities fail in row {q}")
        for p in range(self.hcap + 1):
            col = _col_sset(self, p)
            report = check_simplicial_identities(col)
            if not report.passed:
                raise InvalidInput(f"vertical identities fail in column {p}")
        # levelwise commutation of the two structures
        for p in range(1, self.hcap + 1):
            for q in range(1, self.vcap + 1):
                for i in range(p + 1):
                    for j in range(q + 1):
                        for x in self.levels[(p, q)]:
                            one = self.vfaces[(p - 1, q, j)][self.hfaces[(p, q, i)][x]]
                            two = self.hfaces[(p, q - 1, i)][self.vfaces[(p, q, j)][x]]
                            if one != two:
                                raise InvalidInput(
                                    f"face commutation fails at {(p, q, i, j, x)!r}"
                                )
        for p in range(1, self.hcap + 1):
            for q in range(0, self.vcap):
                for i in range(p + 1):
                    for j in range(q + 1):
                        for x in self.levels[(p, q)]:
                            one = self.vdegens[(p - 1, q, j)][self.hfaces[(p, q, i)][x]]
                            two = self.hfaces[(p, q + 1, i)][self.vdegens[(p, q, j)][x]]
                            if one != two:
                                raise InvalidInput(
                                    f"face/degeneracy commutation fails at {(p, q, i, j, x)!r}"
                                )
        for p in range(0, self.hcap):
            for q in range(0, self.vcap):
                for i in range(p + 1):
                    for j in range(q + 1):
                        for x in self.levels[(p, q)]:
                            one = self.vdegens[(p + 1, q, j)][self.hdegens[(p, q, i)][x]]
                            two = self.hdegens[(p, q + 1, i)][self.vdegens[(p, q, j)][x]]
                            if one != two:
                                raise InvalidInput(
                                    f"degeneracy commutation fails at {(p, q, i, j, x)!r}"
                                )


def _row_sset(b: BisimplicialSet, q: int) -> FiniteSimplicialSet:
    levels = tuple(b.levels[(p, q)] for p in range(b.hcap + 1))
    faces = {(p, i): b.hfaces[(p, q, i)] for p in range(1, b.hcap + 1) for i in range(p + 1)}
    degens = {(p, i): b.hdegens[(p, q, i)] for p in range(0, b.hcap) for i in range(p + 1)}
    return FiniteSimplicialSet(b.hcap, levels, faces, degens, provenance=f"row {q}")


def _col_sset(b: BisimplicialSet, p: int) -> FiniteSimplicialSet:
    levels = tuple(b.levels[(p, q)] for q in range(b.vcap + 1))
    faces = {(q, i): b.vfaces[(p, q, i)] for q in range(1, b.vcap + 1) for i in range(q + 1)}
    degens = {(q, i): b.vdegens[(p, q, i)] for q in range(0, b.vcap) for i in range(q + 1)}
    return FiniteSimplicialSet(b.vcap, levels, faces, degens, provenance=f"column {p}")


def box_product(x: FiniteSimplicialSet, y: FiniteSimplicialSet) -> BisimplicialSet:
    """The external product: level (p, q) is X_p x Y_q."""
    levels = {
        (p, q): tuple((a, b) for a in x.level(p) for b in y.level(q))
        for p in range(x.dim_cap + 1)
        for q in range(y.dim_cap + 1)
    }
    hfaces = {
        (p, q, i): {(a, b): (x.face(p, i, a), b) for (a, b) in levels[(p, q)]}
        for p in range(1, x.dim_cap + 1)
        for q in range(y.dim_cap + 1)
        for i in range(p + 1)
    }
    hdegens = {
        (p, q, i): {(a, b): (x.degeneracy(p, i, a), b) for (a, b) in levels[(p, q)]}
        for p in range(0, x.dim_cap)
        for q in range(y.dim_cap + 1)
        for i in range(p + 1)
    }
    vfaces = {
        (p, q, i): {(a, b): (a, y.face(q, i, b)) for (a, b) in levels[(p, q)]}
        for p in range(x.dim_cap + 1)
        for q in range(1, y.dim_cap + 1)
        for i in range(q + 1)
    }
    vdegens = {
        (p, q, i): {(a, b): (a, y.degeneracy(q, i, b)) for (a, b) in levels[(p, q)]}
        for p in range(x.dim_cap + 1)
        for q in range(0, y.dim_cap)
        for i in range(q + 1)
    }
    return BisimplicialSet(x.dim_cap, y.dim_cap, levels, hfaces, hdegens, vfaces, vdegens)


def diag(b: BisimplicialSet) -> FiniteSimplicialSet:
    """Restrict to the diagonal levels; operators are the two-sided composites."""
    cap = min(b.hcap, b.vcap)
    levels = tuple(b.levels[(n, n)] for n in range(cap + 1))
    faces = {}
    for n in range(1, cap + 1):
        for i in range(n + 1):
            faces[(n, i)] = {
                x: b.vfaces[(n - 1, n, i)][b.hfaces[(n, n, i)][x]] for x in levels[n]
            }
    degens = {}
    for n in range(0, cap):
        for i in range(n + 1):
            degens[(n, i)] = {
                x: b.vdegens[(n + 1, n, i)][b.hdegens[(n, n, i)][x]] for x in levels[n]
            }
    return FiniteSimplicialSet(cap, levels, faces, degens, provenance="diag")


# --- assorted constructors --------------------------------------------------------

def standard_simplex(n: int, dim_cap: int) -> FiniteSimplicialSet:
    """Level m holds the nondecreasing (m+1)-tuples in 0..n."""
    levels = []
    for m in range(dim_cap + 1):
        level = []

        def rec(start, length, prefix):
            if length == 0:
                level.append(tuple(prefix))
                return
            for v in range(start, n + 1):
                rec(v, length - 1, prefix + [v])

        rec(0, m + 1, [])
        levels.append(tuple(level))
    faces = {
        (m, i): {t: t[:i] + t[i + 1 :] for t in levels[m]}
        for m in range(1, dim_cap + 1)
        for i in range(m + 1)
    }
    degens = {
        (m, i): {t: t[: i + 1] + t[i:] for t in levels[m]}
        for m in range(0, dim_cap)
        for i in range(m + 1)
    }
    return FiniteSimplicialSet(dim_cap, tuple(levels), faces, degens, provenance=f"delta^{n}")


def disjoint_union(s: FiniteSimplicialSet, t: FiniteSimplicialSet) -> FiniteSimplicialSet:
    if s.dim_cap != t.dim_cap:
        raise SizeMismatch("disjoint union needs equal caps")
    levels = tuple(
        tuple(("l", x) for x in s.level(n)) + tuple(("r", y) for y in t.level(n))
        for n in range(s.dim_cap + 1)
    )
    faces, degens = {}, {}
    for n in range(1, s.dim_cap + 1):
        for i in range(n + 1):
            table = {("l", x): ("l", s.face(n, i, x)) for x in s.level(n)}
            table.update({("r", y): ("r", t.face(n, i, y)) for y in t.level(n)})
            faces[(n, i)] = table
    for n in range(0, s.dim_cap):
        for i in range(n + 1):
            table = {("l", x): ("l", s.degeneracy(n, i, x)) for x in s.level(n)}
            table.update({("r", y): ("r", t.degeneracy(n, i, y)) for y in t.level(n)})
            degens[(n, i)] = table
    return FiniteSimplicialSet(s.dim_cap, levels, faces, degens, provenance="disjoint_union")


# --- categorical barycentric subdivision -------------------------------------------

def category_subdivision(category: FiniteCategory, max_len: int = 12):
    """The poset of identity-free composable tuples, ordered by consecutive
    composition and end omission, with its comparison functor back to the
    category (objects map to the target of the last arrow).

    Returns (subdivided_category, object_map, morphism_map).
    """
    identities = set(category.ident.values())
    arrows = [f for f in category.morphisms if f not in identities]

    tuples = [(("obj", x)) for x in category.objects]
    chains = [[()]]
    current = [((), x) for x in category.objects]
    for length in range(1, max_len + 1):
        nxt = []
        for chain, end in current:
            for f in arrows:
                if category.src[f] == end:
                    nxt.append((chain + (f,), category.tgt[f]))
        if not nxt:
            break
        current = nxt
        chains.append([chain for chain, _ in current])
    else:
        if current:
            raise CapExceeded(
                f"identity-free chains keep growing past length {max_len}"
            )

    objects = [("obj", x) for x in category.objects]
    for level in chains[1:]:
        objects.extend(("chain", c) for c in level)

    def reductions(chain):
        """Everything obtainable by windowing and composing consecutive blocks."""
        n = len(chain)
        out = set()
        for start in range(n + 1):
            for end in range(start, n + 1):
                window = chain[start:end]
                if not window:
                    continue
                for blocks in _block_partitions(window):
                    composed = []
                    ok = True
                    for block in blocks:
                        g = block[0]
                        for f in block[1:]:
                            g = category.compose(f, g)
                        if g in identities:
                            ok = False
                            break
                        composed.append(g)
                    if ok:
                        out.add(("chain", tuple(composed)))
        # all vertex objects of the chain are also reachable
        if n:
            out.add(("obj", category.src[chain[0]]))
            for f in chain:
                out.add(("obj", category.tgt[f]))
        return out

    reachable = {("obj", x): {("obj", x)} for x in category.objects}
    for level in chains[1:]:
        for chain in level:
            reachable[("chain", chain)] = reductions(chain) | {("chain", chain)}

    def leq(a, b):
        return a in reachable[b]

    sub = poset_category(objects, leq)

    def object_target(obj):
        kind, payload = obj
        if kind == "obj":
            return payload
        return category.tgt[payload[-1]]

    object_map = {obj: object_target(obj) for obj in objects}
    morphism_map = {}
    for arrow in sub.morphisms:
        a, b = arrow
        # the comparison arrow composes everything of b above a's window end
        morphism_map[arrow] = _comparison_arrow(category, a, b, identities)
    return sub, object_map, morphism_map


def _block_partitions(window):
    if not window:
        yield ()
        return
    for first_len in range(1, len(window) + 1):
        head = tuple(window[:first_len])
        for rest in _block_partitions(window[first_len:]):
            yield (head,) + rest


def _comparison_arrow(category, a, b, identities):
    """The composite of b's trailing arrows from the endpoint of a to b's end."""
    target_a = a[1] if a[0] == "obj" else category.tgt[a[1][-1]]
    if b[0] == "obj":
        return category.ident[b[1]]
    chain = b[1]
    # find the last position in b's chain whose target matches, composing the rest
    # from the rightmost occurrence of target_a along the chain
    positions = [i for i in range(len(chain) + 1) if _vertex(category, chain, i) == target_a]
    if not positions:
        raise InvalidInput(f"{a!r} does not sit under {b!r}")
    start = positions[-1]
    g = category.ident[target_a]
    for f in chain[start:]:
        g = category.compose(f, g)
    return g


def _vertex(category, chain, i):
    return category.src[chain[0]] if i == 0 else category.tgt[chain[i - 1]]
