"""Free-algebra truncations, shifted functors, operads fibered over a base
operad, fibered set objects with pullback and collapse, Hom equalizers, and
the bar-comparison component diagnostic."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as iter_permutations, product as iter_product
from typing import Hashable, Optional

from .errors import ArityOverflow, CapExceeded, InvalidInput
from .perm import Permutation, pad_fixed
from .setoperad import SetOperad
from .sset import FiniteSimplicialSet, LeftAction, SimplicialMap

MonoidModule = LeftAction  # a finite left module over a finite monoid


# --- orbit classes ---------------------------------------------------------------

def _canonical_class(operad: SetOperad, shift: int, y, xs: tuple):
    """Lexicographically minimal representative of the orbit of (y, xs) under
    the symmetric group permuting the last len(xs) inputs of y."""
    m = len(xs)
    total = shift + m
    if m <= 1:
        return (y, xs)
    best = None
    for images in iter_permutations(range(1, m + 1)):
        sigma = Permutation(images)
        acted = operad.act(y, pad_fixed(sigma, shift))
        shuffled = tuple(xs[sigma(i) - 1] for i in range(1, m + 1))
        key = (operad.element_index(total, acted), shuffled)
        if best is None or key < best[0]:
            best = (key, (acted, shuffled))
    return best[1]


@dataclass(eq=False)
class TruncatedAlgebra:
    """Orbit levels of the shifted construction: level m holds classes of
    pairs (y in C(shift+m), xs in X^m), with the symmetric group acting on the
    last m inputs.  shift = 0 is the free algebra itself."""

    operad: SetOperad
    xset: tuple
    cap: int
    shift: int
    levels: tuple  # levels[m] = tuple of canonical (y, xs) pairs

    def __post_init__(self):
        self._classify_cache: dict = {}

    def level(self, m: int) -> tuple:
        if not 0 <= m <= self.cap:
            raise CapExceeded(f"level {m} beyond cap {self.cap}")
        return self.levels[m]

    def classify(self, y, xs: tuple):
        key = (y, tuple(xs))
        hit = self._classify_cache.get(key)
        if hit is None:
            hit = _canonical_class(self.operad, self.shift, y, key[1])
            self._classify_cache[key] = hit
        return hit

    def all_classes(self) -> list:
        return [cls for level in self.levels for cls in level]

    @property
    def size(self) -> int:
        return sum(len(level) for level in self.levels)


def d_functor(operad: SetOperad, shift: int, xset, cap: int) -> TruncatedAlgebra:
    """Levels of the shifted construction; shift 0 recovers the free algebra."""
    if shift < 0 or cap < 0:
        raise InvalidInput("shift and cap must be non-negative")
    xset = tuple(xset)
    if shift + cap > operad.arity_cap:
        raise CapExceeded(
            f"need carriers up to arity {shift + cap}, tabulated cap is {operad.arity_cap}"
        )
    levels = []
    for m in range(cap + 1):
        seen = dict()
        for y in operad.elements(shift + m):
            for xs in iter_product(xset, repeat=m):
                cls = _canonical_class(operad, shift, y, xs)
                seen[cls] = True
        levels.append(tuple(seen))
    return TruncatedAlgebra(operad, xset, cap, shift, tuple(levels))


def free_algebra(operad: SetOperad, xset, cap: int) -> TruncatedAlgebra:
    """The free-algebra truncation: orbit levels of C(m) x X^m."""
    return d_functor(operad, 0, xset, cap)


def monad_unit(algebra: TruncatedAlgebra, x):
    if algebra.shift != 0:
        raise InvalidInput("the monad unit lives in the unshifted algebra")
    if x not in algebra.xset:
        raise InvalidInput(f"{x!r} is not a generator")
    return algebra.classify(algebra.operad.unit, (x,))


def structure_map(algebra: TruncatedAlgebra, y, inner_classes: list):
    """The action of the free-algebra monad: compose y with the carriers of
    the inner classes (live inputs first, all decorations pushed to the tail).

    For shift 0 this is the monad multiplication; for positive shift it is the
    module structure over the monad."""
    operad = algebra.operad
    shift = algebra.shift
    m = len(inner_classes)
    decorations = tuple(x for _, xs in inner_classes for x in xs)
    if len(decorations) > algebra.cap:
        raise CapExceeded(
            f"composite decoration count {len(decorations)} exceeds cap {algebra.cap}"
        )
    # y carries its `shift` live inputs first; the m argument slots are the
    # trailing decorated ones, so the composite keeps decorations contiguous
    inners = [operad.unit] * shift + [cls[0] for cls in inner_classes]
    arities = [1] * shift + [len(cls[1]) for cls in inner_classes]
    composed = operad.compose(y, inners, shift + m, arities)
    return algebra.classify(composed, decorations)


@dataclass(eq=False)
class LawCheck:
    name: str
    passed: bool
    instances: int
    witness: Optional[tuple] = None


@dataclass(eq=False)
class LawReport:
    title: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [self.title]
        for c in self.checks:
            line = f"  {c.name}: {'pass' if c.passed else 'FAIL'} ({c.instances} instances)"
            if c.witness is not None:
                line += f" witness={c.witness!r}"
            lines.append(line)
        return "\n".join(lines)


def _graded_tuples(level_classes, count: int, budget: int):
    """Tuples of `count` classes whose decoration counts sum to <= budget."""
    if count == 0:
        yield ()
        return
    for cls in level_classes:
        deg = len(cls[1])
        if deg > budget:
            continue
        for rest in _graded_tuples(level_classes, count - 1, budget - deg):
            yield (cls,) + rest


def monad_law_report(operad: SetOperad, xset, cap: int) -> LawReport:
    """Exhaustive unit and associativity laws for the free-algebra monad,
    below the decoration cap."""
    algebra = free_algebra(operad, xset, cap)
    classes = algebra.all_classes()
    checks = []

    # unit on the outside: compose the operad unit with one class
    count, witness, passed = 0, None, True
    for cls in classes:
        count += 1
        if structure_map(algebra, operad.unit, [cls]) != cls:
            passed, witness = False, cls
            break
    checks.append(LawCheck("left unit", passed, count, witness))

    # unit on the inside: wrap every generator of a class
    count, witness, passed = 0, None, True
    for cls in classes:
        y, xs = cls
        count += 1
        wrapped = [monad_unit(algebra, x) for x in xs]
        if structure_map(algebra, y, wrapped) != cls:
            passed, witness = False, cls
            break
    checks.append(LawCheck("right unit", passed, count, witness))

    # associativity on two-layer nests; instances whose intermediate
    # composites leave the truncation are skipped
    count, witness, passed = 0, None, True
    for m in range(0, operad.arity_cap + 1):
        for c in operad.elements(m):
            for mids in _graded_tuples_nested(operad, classes, m, cap):
                try:
                    flat_once = [structure_map(algebra, d, list(inner)) for d, inner in mids]
                    left = structure_map(algebra, c, flat_once)
                    total_inner = [cls for _, inner in mids for cls in inner]
                    arities = [len(inner) for _, inner in mids]
                    composed = operad.compose(c, [d for d, _ in mids], m, arities)
                    right = structure_map(algebra, composed, total_inner)
                except (ArityOverflow, CapExceeded):
                    continue
                count += 1
                if left != right:
                    passed, witness = False, (c, mids)
                    break
            if not passed:
                break
        if not passed:
            break
    checks.append(LawCheck("associativity", passed, count, witness))
    return LawReport(f"monad laws: {operad.name}, |X|={len(algebra.xset)}, cap={cap}", checks)


def _graded_tuples_nested(operad, classes, m, budget, arity_budget=None):
    """Tuples of m pairs (d, inner classes) with total decoration <= budget
    and total arity of the d's bounded by the tabulated range."""
    if arity_budget is None:
        arity_budget = operad.arity_cap
    if m == 0:
        yield ()
        return
    for k in range(0, arity_budget + 1):
        for d in operad.elements(k):
            for inner in _graded_tuples(classes, k, budget):
                used = sum(len(cls[1]) for cls in inner)
                for rest in _graded_tuples_nested(
                    operad, classes, m - 1, budget - used, arity_budget - k
                ):
                    yield ((d, inner),) + rest


def shifted_action_report(operad: SetOperad, shift: int, xset, cap: int) -> LawReport:
    """The module laws of the shifted construction over the free-algebra monad."""
    algebra = free_algebra(operad, xset, cap)
    shifted = d_functor(operad, shift, xset, cap)
    classes = algebra.all_classes()
    checks = []

    count, witness, passed = 0, None, True
    for cls in shifted.all_classes():
        y, xs = cls
        count += 1
        wrapped = [monad_unit(algebra, x) for x in xs]
        if structure_map(shifted, y, wrapped) != cls:
            passed, witness = False, cls
            break
    checks.append(LawCheck("unit", passed, count, witness))

    count, witness, passed = 0, None, True
    for m in range(0, operad.arity_cap - shift + 1):
        for y in operad.elements(shift + m):
            for mids in _graded_tuples_nested(operad, classes, m, cap):
                try:
                    flat_once = [structure_map(algebra, d, list(inner)) for d, inner in mids]
                    left = structure_map(shifted, y, flat_once)
                    total_inner = [cls for _, inner in mids for cls in inner]
                    arities = [len(inner) for _, inner in mids]
                    composed = operad.compose(
                        y,
                        [operad.unit] * shift + [d for d, _ in mids],
                        shift + m,
                        [1] * shift + arities,
                    )
                    right = structure_map(shifted, composed, total_inner)
                except (ArityOverflow, CapExceeded):
                    continue
                count += 1
                if left != right:
                    passed, witness = False, (y, mids)
                    break
            if not passed:
                break
        if not passed:
            break
    checks.append(LawCheck("associativity", passed, count, witness))
    return LawReport(
        f"shifted action laws: {operad.name}, shift={shift}, |X|={len(xset)}, cap={cap}",
        checks,
    )


# --- fibered set objects ------------------------------------------------------------

def discrete_sset(elements, dim_cap: int, provenance: str = "discrete") -> FiniteSimplicialSet:
    """The constant simplicial set on a finite set."""
    elements = tuple(elements)
    levels = tuple(elements for _ in range(dim_cap + 1))
    faces = {
        (n, i): {x: x for x in elements}
        for n in range(1, dim_cap + 1)
        for i in range(n + 1)
    }
    degens = {
        (n, i): {x: x for x in elements}
        for n in range(0, dim_cap)
        for i in range(n + 1)
    }
    return FiniteSimplicialSet(dim_cap, levels, faces, degens, provenance=provenance)


@dataclass(eq=False)
class FiberedSetObject:
    """A finite-set fiber for every simplex of a base, with a fiber map for
    every face and degeneracy, compatible with the simplicial identities."""

    base: FiniteSimplicialSet
    fibers: dict  # (n, s) -> tuple
    maps: dict  # ("d"|"s", n, i, s) -> {u: u'}

    def __post_init__(self):
        report = check_fibered(self)
        if not report.passed:
            bad = next(c for c in report.checks if not c.passed)
            raise InvalidInput(f"fibered functoriality fails: {bad.name} at {bad.witness!r}")

    def fiber(self, n: int, s) -> tuple:
        return self.fibers[(n, s)]

    def map_face(self, n: int, i: int, s, u):
        return self.maps[("d", n, i, s)][u]

    def map_degeneracy(self, n: int, i: int, s, u):
        return self.maps[("s", n, i, s)][u]


def check_fibered(f: FiberedSetObject) -> LawReport:
    base = f.base
    checks = []

    def run(name, gen):
        witness = None
        count = 0
        for item in gen():
            count += 1
            if item is not None:
                witness = item
                break
        checks.append(LawCheck(name, witness is None, count, witness))

    def totality():
        for n in range(base.dim_cap + 1):
            for s in base.level(n):
                if (n, s) not in f.fibers:
                    yield (n, s)
                    return
                yield None
        for n in range(1, base.dim_cap + 1):
            for i in range(n + 1):
                for s in base.level(n):
                    table = f.maps.get(("d", n, i, s))
                    target = set(f.fibers[(n - 1, base.face(n, i, s))])
                    if table is None or any(table.get(u) not in target for u in f.fibers[(n, s)]):
                        yield ("d", n, i, s)
                        return
                    yield None
        for n in range(0, base.dim_cap):
            for i in range(n + 1):
                for s in base.level(n):
                    table = f.maps.get(("s", n, i, s))
                    target = set(f.fibers[(n + 1, base.degeneracy(n, i, s))])
                    if table is None or any(table.get(u) not in target for u in f.fibers[(n, s)]):
                        yield ("s", n, i, s)
                        return
                    yield None

    run("totality", totality)
    if not checks[-1].passed:
        return LawReport("fibered object", checks)

    def face_face():
        for n in range(2, base.dim_cap + 1):
            for j in range(n + 1):
                for i in range(j):
                    for s in base.level(n):
                        mid1 = base.face(n, j, s)
                        mid2 = base.face(n, i, s)
                        for u in f.fibers[(n, s)]:
                            one = f.maps[("d", n - 1, i, mid1)][f.maps[("d", n, j, s)][u]]
                            two = f.maps[("d", n - 1, j - 1, mid2)][f.maps[("d", n, i, s)][u]]
                            if one != two:
                                yield (n, i, j, s, u)
                                return
                            yield None

    run("face/face", face_face)

    def face_degen():
        for n in range(0, base.dim_cap):
            for j in range(n + 1):
                for i in range(n + 2):
                    for s in base.level(n):
                        up = base.degeneracy(n, j, s)
                        for u in f.fibers[(n, s)]:
                            out = f.maps[("d", n + 1, i, up)][f.maps[("s", n, j, s)][u]]
                            if i == j or i == j + 1:
                                expected = u
                            elif i < j:
                                expected = f.maps[("s", n - 1, j - 1, base.face(n, i, s))][
                                    f.maps[("d", n, i, s)][u]
                                ]
                            else:
                                expected = f.maps[("s", n - 1, j, base.face(n, i - 1, s))][
                                    f.maps[("d", n, i - 1, s)][u]
                                ]
                            if out != expected:
                                yield (n, i, j, s, u)
                                return
                            yield None

    run("face/degeneracy", face_degen)

    def degen_degen():
        for n in range(0, base.dim_cap - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    for s in base.level(n):
                        up_j = base.degeneracy(n, j, s)
                        up_i = base.degeneracy(n, i, s)
                        for u in f.fibers[(n, s)]:
                            one = f.maps[("s", n + 1, i, up_j)][f.maps[("s", n, j, s)][u]]
                            two = f.maps[("s", n + 1, j + 1, up_i)][f.maps[("s", n, i, s)][u]]
                            if one != two:
                                yield (n, i, j, s, u)
                                return
                            yield None

    run("degeneracy/degeneracy", degen_degen)
    return LawReport("fibered object", checks)


def pullback(along: SimplicialMap, f: FiberedSetObject) -> FiberedSetObject:
    """Reindex fibers along a simplicial map into the base."""
    if along.target is not f.base:
        raise InvalidInput("pullback needs a map into the fibered object's base")
    base = along.source
    fibers = {
        (n, s): f.fibers[(n, along.apply(n, s))]
        for n in range(base.dim_cap + 1)
        for s in base.level(n)
    }
    maps = {}
    for n in range(1, base.dim_cap + 1):
        for i in range(n + 1):
            for s in base.level(n):
                maps[("d", n, i, s)] = f.maps[("d", n, i, along.apply(n, s))]
    for n in range(0, base.dim_cap):
        for i in range(n + 1):
            for s in base.level(n):
                maps[("s", n, i, s)] = f.maps[("s", n, i, along.apply(n, s))]
    return FiberedSetObject(base, fibers, maps)


def collapse(f: FiberedSetObject) -> tuple:
    """The colimit over the simplex category of the base: the disjoint union
    of all fibers modulo every fiber map.  Components come back sorted."""
    items = [
        (n, s, u)
        for n in range(f.base.dim_cap + 1)
        for s in f.base.level(n)
        for u in f.fibers[(n, s)]
    ]
    parent = {item: item for item in items}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    base = f.base
    for n in range(1, base.dim_cap + 1):
        for i in range(n + 1):
            for s in base.level(n):
                t = base.face(n, i, s)
                for u in f.fibers[(n, s)]:
                    union((n, s, u), (n - 1, t, f.maps[("d", n, i, s)][u]))
    for n in range(0, base.dim_cap):
        for i in range(n + 1):
            for s in base.level(n):
                t = base.degeneracy(n, i, s)
                for u in f.fibers[(n, s)]:
                    union((n, s, u), (n + 1, t, f.maps[("s", n, i, s)][u]))
    groups: dict = {}
    for item in items:
        groups.setdefault(find(item), []).append(item)
    return tuple(
        tuple(sorted(g, key=repr)) for g in sorted(groups.values(), key=lambda g: repr(sorted(g, key=repr)))
    )


# --- the fibered operad over a base operad ------------------------------------------

@dataclass(eq=False)
class FiberedOperadData:
    """The shifted-functor family over a base operad with a single nullary
    point: levels, fibers over base elements, composition, and projection."""

    operad: SetOperad
    xset: tuple
    cap: int  # largest operad arity n
    deco_cap: int  # decoration budget per element
    levels: dict  # n -> TruncatedAlgebra with shift n
    fibers: dict  # n -> {base element: tuple of classes}

    def classes(self, n: int) -> list:
        return self.levels[n].all_classes()

    def project(self, n: int, cls):
        y, xs = cls
        point = self.operad.elements(0)[0]
        return self.operad.compose(
            y,
            [self.operad.unit] * n + [point] * len(xs),
            n + len(xs),
            [1] * n + [0] * len(xs),
        )

    def unit_class(self):
        return (self.operad.unit, ())

    def act(self, n: int, cls, sigma: Permutation):
        y, xs = cls
        acted = self.operad.act(y, pad_fixed(sigma, 0, right=len(xs)))
        return self.levels[n].classify(acted, xs)

    def compose(self, n: int, a_cls, b_list):
        """Composition over the base: live inputs compose, decorations of the
        arguments are shuffled together at the tail (argument order first,
        then the outer element's own decorations)."""
        y, xs = a_cls
        p = len(xs)
        inners = [z for _, (z, _) in b_list]
        live_arities = [b_n + len(ws) for b_n, (_, ws) in b_list]
        composed = self.operad.compose(
            y,
            inners + [self.operad.unit] * p,
            n + p,
            live_arities + [1] * p,
        )
        # move every argument block to the front, decorations to the tail
        front, tail, offset = [], [], 0
        for b_n, (_, ws) in b_list:
            front.extend(range(offset + 1, offset + b_n + 1))
            tail.extend(range(offset + b_n + 1, offset + b_n + len(ws) + 1))
            offset += b_n + len(ws)
        tail.extend(range(offset + 1, offset + p + 1))
        shuffled = self.operad.act(composed, Permutation(tuple(front + tail)))
        decorations = tuple(w for _, (_, ws) in b_list for w in ws) + tuple(xs)
        total_live = sum(b_n for b_n, _ in b_list)
        if len(decorations) > self.deco_cap:
            raise CapExceeded(
                f"composite decoration count {len(decorations)} exceeds {self.deco_cap}"
            )
        if total_live > self.cap:
            raise CapExceeded(f"composite arity {total_live} exceeds {self.cap}")
        return self.levels[total_live].classify(shuffled, decorations)

    def as_fibered(self, n: int, dim_cap: int = 1) -> FiberedSetObject:
        """The level-n family as a fibered object over the discrete base."""
        base = discrete_sset(self.operad.elements(n), dim_cap, provenance=f"base({n})")
        fibers = {
            (lvl, x): tuple(self.fibers[n][x])
            for lvl in range(dim_cap + 1)
            for x in self.operad.elements(n)
        }
        maps = {}
        for lvl in range(1, dim_cap + 1):
            for i in range(lvl + 1):
                for x in self.operad.elements(n):
                    maps[("d", lvl, i, x)] = {u: u for u in fibers[(lvl, x)]}
        for lvl in range(0, dim_cap):
            for i in range(lvl + 1):
                for x in self.operad.elements(n):
                    maps[("s", lvl, i, x)] = {u: u for u in fibers[(lvl, x)]}
        return FiberedSetObject(base, fibers, maps)


def build_fibered_A(operad: SetOperad, xset, cap: int, deco_cap: Optional[int] = None) -> FiberedOperadData:
    """Assemble the family A(n) of shifted free-algebra levels, fibered over
    the base operad, with composition over the base composition.

    Requires a single nullary point in the base."""
    if len(operad.carriers.get(0, ())) != 1:
        raise InvalidInput("the base operad must have a single nullary point")
    deco_cap = cap if deco_cap is None else deco_cap
    xset = tuple(xset)
    levels, fibers = {}, {}
    for n in range(cap + 1):
        if n + deco_cap > operad.arity_cap:
            raise CapExceeded(
                f"A({n}) needs carriers to arity {n + deco_cap}, cap {operad.arity_cap}"
            )
        levels[n] = d_functor(operad, n, xset, deco_cap)
    data = FiberedOperadData(operad, xset, cap, deco_cap, levels, {})
    for n in range(cap + 1):
        grouping: dict = {x: [] for x in operad.elements(n)}
        for cls in levels[n].all_classes():
            grouping[data.project(n, cls)].append(cls)
        fibers[n] = {x: tuple(v) for x, v in grouping.items()}
    data.fibers.update(fibers)
    return data


# --- the module identity -------------------------------------------------------------

@dataclass(eq=False)
class LemmaReport:
    title: str
    lhs_size: int
    rhs_size: int
    bijective: bool
    natural: bool
    witness: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.bijective and self.natural

    def to_text(self) -> str:
        return (
            f"{self.title}\n"
            f"  sides: {self.lhs_size} vs {self.rhs_size}; "
            f"bijective: {self.bijective}; natural: {self.natural}"
            + (f"; witness={self.witness!r}" if self.witness is not None else "")
        )


def free_module_classes(operad: SetOperad, xset, mset, cap: int) -> list:
    """Classes of (y in C(m+1), xs in X^m, v in M) with the symmetric group on
    the last m inputs; the module slot is the first input and is untouched."""
    xset, mset = tuple(xset), tuple(mset)
    out = dict()
    for m in range(cap + 1):
        if 1 + m > operad.arity_cap:
            raise CapExceeded(f"need carriers to arity {1 + m}")
        for y in operad.elements(1 + m):
            for xs in iter_product(xset, repeat=m):
                for v in mset:
                    y2, xs2 = _canonical_class(operad, 1, y, xs)
                    out[(y2, xs2, v)] = True
    return list(out)


def lemma_pred_check(operad: SetOperad, xset, mset, cap: int, test_map: Optional[dict] = None) -> LemmaReport:
    """The free-module identity: classes of (y, xs, v) correspond to pairs of
    a collapsed level-1 fibered class and a module element, naturally in the
    module variable."""
    xset, mset = tuple(xset), tuple(mset)
    lhs = free_module_classes(operad, xset, mset, cap)
    data = build_fibered_A(operad, xset, cap=1, deco_cap=cap)
    collapsed = collapse(data.as_fibered(1))
    # over a discrete base every component is one class at every level; name
    # components by their level-0 member
    comp_of = {}
    for group in collapsed:
        rep = next(item for item in group if item[0] == 0)
        for item in group:
            comp_of[item[2]] = rep[2]
    rhs = {(comp_of[cls], v) for cls in data.classes(1) for v in mset}

    forward = {}
    bijective, witness = True, None
    for (y, xs, v) in lhs:
        image = (comp_of[data.levels[1].classify(y, xs)], v)
        forward[(y, xs, v)] = image
    if len(set(forward.values())) != len(lhs) or set(forward.values()) != rhs:
        bijective = False
        witness = ("size", len(lhs), len(set(forward.values())), len(rhs))

    natural = True
    if test_map is None and len(mset) >= 1:
        test_map = {v: mset[0] for v in mset}
    if test_map is not None:
        for (y, xs, v) in lhs:
            pushed_then_map = forward[(y, xs, test_map[v])]
            mapped_then_push = (forward[(y, xs, v)][0], test_map[forward[(y, xs, v)][1]])
            if pushed_then_map != mapped_then_push:
                natural, witness = False, (y, xs, v)
                break
    return LemmaReport(
        f"free module identity: {operad.name}, |X|={len(xset)}, |M|={len(mset)}, cap={cap}",
        len(lhs),
        len(rhs),
        bijective,
        natural,
        witness,
    )


# --- Hom equalizer ---------------------------------------------------------------------

def _all_functions(domain, codomain):
    domain, codomain = tuple(domain), tuple(codomain)
    if not domain:
        yield {}
        return
    for values in iter_product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))


def hom_equalizer(monoid, module_m: MonoidModule, module_n: MonoidModule) -> tuple:
    """Equivariant maps computed as the equalizer of the two canonical maps
    from functions M -> N to functions (R x M) -> N, cross-checked against the
    direct equivariance filter."""
    if module_m.monoid is not monoid or module_n.monoid is not monoid:
        raise InvalidInput("both modules must be over the given monoid")
    results = []
    for f in _all_functions(module_m.carrier, module_n.carrier):
        first = {
            (r, m): f[module_m.act(r, m)] for r in monoid.elements for m in module_m.carrier
        }
        second = {
            (r, m): module_n.act(r, f[m]) for r in monoid.elements for m in module_m.carrier
        }
        if first == second:
            results.append(f)
    direct = [
        f
        for f in _all_functions(module_m.carrier, module_n.carrier)
        if all(
            f[module_m.act(r, m)] == module_n.act(r, f[m])
            for r in monoid.elements
            for m in module_m.carrier
        )
    ]
    if results != direct:
        raise InvalidInput("equalizer disagrees with the direct equivariance filter")
    return tuple(results)


# --- the bar-comparison diagnostic -------------------------------------------------------

@dataclass(eq=False)
class ComponentVerdict:
    base_component: tuple
    lhs_classes: int
    rhs_classes: int
    verdict: str  # bijective | non-bijective | truncation-inconclusive


@dataclass(eq=False)
class SpecialnessReport:
    ell: int
    deco_cap: int
    dim_cap: int
    level_sizes: tuple
    components: list
    guard_failures: int
    extras: dict = field(default_factory=dict)  # reserved for future invariants

    @property
    def all_bijective(self) -> bool:
        return all(c.verdict == "bijective" for c in self.components)

    def to_text(self) -> str:
        lines = [
            f"bar comparison diagnostic: ell={self.ell}, deco_cap={self.deco_cap}, dim_cap={self.dim_cap}",
            f"  level sizes: {list(self.level_sizes)}",
            f"  guard failures: {self.guard_failures}",
        ]
        for c in self.components:
            lines.append(
                f"  component {c.base_component!r}: lhs={c.lhs_classes} rhs={c.rhs_classes} -> {c.verdict}"
            )
        return "\n".join(lines)


def specialness_diagnostic(data: FiberedOperadData, ell: int, dim_cap: int) -> SpecialnessReport:
    """Compare components of the two-sided bar of the level families against
    the constant family over the base bar, one base component at a time.

    A non-bijective verdict certifies failure of the necessary component-level
    condition; a bijective verdict is only the necessary condition, never a
    proof.  Composites that leave the truncation are counted and taint the
    affected components as inconclusive."""
    operad = data.operad
    if ell > data.cap:
        raise CapExceeded(f"diagnostic needs level {ell}, built cap is {data.cap}")
    budget = data.deco_cap
    guard_failures = 0

    zero_classes = data.classes(0)
    if ell == 0:
        size = len(zero_classes)
        verdicts = [
            ComponentVerdict(("*",), size, size, "bijective")
        ]
        return SpecialnessReport(0, budget, dim_cap, (size,), verdicts, 0)

    one_classes = data.classes(1)
    ell_classes = data.classes(ell)

    def graded_rows(budget_left, count):
        yield from _graded_tuples(one_classes, count, budget_left)

    def level_elements(p: int):
        out = []
        for a in ell_classes:
            da = len(a[1])
            if da > budget:
                continue
            for rows in _rows_product(p, budget - da):
                used = da + sum(len(b[1]) for row in rows for b in row)
                for cs in _graded_tuples(zero_classes, ell, budget - used):
                    out.append((a, rows, cs))
        return out

    def _rows_product(p, budget_left):
        if p == 0:
            yield ()
            return
        for row in graded_rows(budget_left, ell):
            used = sum(len(b[1]) for b in row)
            for rest in _rows_product(p - 1, budget_left - used):
                yield (row,) + rest

    level_sizes = tuple(len(level_elements(p)) for p in range(dim_cap + 1))

    # base components: elements of the base arity-ell carrier glued along
    # composites with arity-one elements
    base_parent = {x: x for x in operad.elements(ell)}

    def bfind(v):
        while base_parent[v] != v:
            base_parent[v] = base_parent[base_parent[v]]
            v = base_parent[v]
        return v

    def bunion(a, b):
        ra, rb = bfind(a), bfind(b)
        if ra != rb:
            base_parent[ra] = rb

    tainted_base = set()
    for x in operad.elements(ell):
        for us in iter_product(operad.elements(1), repeat=ell):
            try:
                composed = operad.compose(x, list(us), ell, [1] * ell)
            except (ArityOverflow, CapExceeded):
                guard_failures += 1
                tainted_base.add(x)
                continue
            bunion(composed, x)

    # vertices and their collapse values
    vertices = level_elements(0)
    value = {}
    vertex_tainted = set()
    for v in vertices:
        a, _, cs = v
        try:
            value[v] = data.compose(ell, a, [(0, c) for c in cs])
        except (ArityOverflow, CapExceeded):
            guard_failures += 1
            vertex_tainted.add(v)

    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for e in level_elements(1):
        a, rows, cs = e
        row = rows[0]
        d0 = d1 = None
        try:
            d0 = (data.compose(ell, a, [(1, b) for b in row]), (), cs)
        except (ArityOverflow, CapExceeded):
            guard_failures += 1
        try:
            d1 = (a, (), tuple(data.compose(1, b, [(0, c)]) for b, c in zip(row, cs)))
        except (ArityOverflow, CapExceeded):
            guard_failures += 1
        if d0 is not None and d1 is not None:
            union(d0, d1)
        else:
            for endpoint in (d0, d1):
                if endpoint is not None:
                    vertex_tainted.add(endpoint)

    component_of = {}
    for v in vertices:
        component_of.setdefault(find(v), []).append(v)

    verdicts = []
    base_groups: dict = {}
    for x in operad.elements(ell):
        base_groups.setdefault(bfind(x), []).append(x)
    for root in sorted(base_groups, key=repr):
        members = sorted(base_groups[root], key=repr)
        tainted = any(x in tainted_base for x in members)
        over = [v for v in vertices if data.project(ell, v[0]) in set(members)]
        lhs_classes = {find(v) for v in over}
        values_seen = set()
        for v in over:
            if v in vertex_tainted or v not in value:
                tainted = True
                continue
            values_seen.add(value[v])
        if any(v in vertex_tainted for comp_root in lhs_classes for v in component_of[comp_root]):
            tainted = True
        rhs = set(zero_classes)
        values_known = all(v in value for v in over)
        if values_known and {value[v] for v in over} != rhs:
            # vertex values are unaffected by dropped identifications, so a
            # missing target class certifies failure even under truncation
            verdict = "non-bijective"
        elif tainted:
            verdict = "truncation-inconclusive"
        else:
            class_values = []
            constant = True
            for r in lhs_classes:
                vals = {value[v] for v in component_of[r]}
                if len(vals) != 1:
                    constant = False
                    break
                class_values.append(vals.pop())
            injective = constant and len(set(class_values)) == len(lhs_classes)
            surjective = constant and set(class_values) == rhs
            verdict = "bijective" if (injective and surjective) else "non-bijective"
        verdicts.append(
            ComponentVerdict(tuple(repr(m) for m in members), len(lhs_classes), len(rhs), verdict)
        )
    return SpecialnessReport(ell, budget, dim_cap, level_sizes, verdicts, guard_failures)
