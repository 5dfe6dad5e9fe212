"""Tabulated finite set-operads, tree evaluation, and an axiom checker."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import permutations as iter_permutations
from typing import Callable, Hashable, Optional

from .errors import ArityOverflow, CapExceeded, InvalidInput, SizeMismatch
from .perm import Permutation, block_wreath
from .trees import Internal, Leaf, OperadTree, leaf_permutation


@dataclass(frozen=True, eq=False)
class SetOperad:
    """A set-operad tabulated up to an explicit arity cap.

    Composition and action are total on the tabulated range; anything whose
    result would leave the range raises ArityOverflow instead of truncating.
    """

    name: str
    arity_cap: int
    carriers: dict  # arity -> tuple of elements
    unit: Hashable
    compose_fn: Callable = field(repr=False)
    act_fn: Callable = field(repr=False)

    def __post_init__(self):
        if self.arity_cap < 1:
            raise InvalidInput("arity cap must be at least 1")
        if self.unit not in self.carriers.get(1, ()):
            raise InvalidInput("unit must be a tabulated element of arity 1")
        object.__setattr__(self, "_idx", {n: {x: i for i, x in enumerate(xs)} for n, xs in self.carriers.items()})

    def arities(self) -> list[int]:
        return sorted(self.carriers)

    def elements(self, n: int) -> tuple:
        if n not in self.carriers:
            raise ArityOverflow(f"{self.name}: arity {n} is not tabulated (cap {self.arity_cap})")
        return self.carriers[n]

    def contains(self, n: int, x) -> bool:
        return n in self._idx and x in self._idx[n]

    def element_index(self, n: int, x) -> int:
        if not self.contains(n, x):
            raise InvalidInput(f"{self.name}: {x!r} is not a tabulated element of arity {n}")
        return self._idx[n][x]

    def arity_of(self, x) -> int:
        """The unique tabulated arity of x; ambiguous elements need explicit arities."""
        hits = [n for n, idx in self._idx.items() if x in idx]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise InvalidInput(f"{self.name}: {x!r} is not tabulated")
        raise InvalidInput(
            f"{self.name}: {x!r} occurs at arities {hits}; pass arities explicitly"
        )

    def compose(self, outer, inners: list, outer_arity: Optional[int] = None,
                inner_arities: Optional[list] = None):
        """Operad composition gamma(outer; inners), block ordered."""
        k = self.arity_of(outer) if outer_arity is None else outer_arity
        if not self.contains(k, outer):
            raise InvalidInput(f"{self.name}: {outer!r} is not tabulated at arity {k}")
        if len(inners) != k:
            raise SizeMismatch(f"outer arity {k} but {len(inners)} inner elements")
        if inner_arities is None:
            ns = [self.arity_of(d) for d in inners]
        else:
            ns = list(inner_arities)
            for d, n in zip(inners, ns):
                if not self.contains(n, d):
                    raise InvalidInput(f"{self.name}: {d!r} is not tabulated at arity {n}")
        total = sum(ns)
        if total > self.arity_cap:
            raise ArityOverflow(
                f"{self.name}: composite arity {total} exceeds cap {self.arity_cap}"
            )
        result = self.compose_fn(outer, list(inners))
        if not self.contains(total, result):
            raise CapExceeded(f"{self.name}: composite {result!r} is not tabulated at arity {total}")
        return result

    def act(self, x, sigma: Permutation):
        n = sigma.size
        if not self.contains(n, x):
            raise SizeMismatch(f"{x!r} is not a tabulated arity-{n} element")
        result = self.act_fn(x, sigma)
        if not self.contains(n, result):
            raise CapExceeded(f"{self.name}: acted element {result!r} is not tabulated")
        return result


def comm_operad(arity_cap: int) -> SetOperad:
    """The terminal operad: one operation in every arity."""
    carriers = {n: ("*",) for n in range(0, arity_cap + 1)}
    return SetOperad(
        name="comm",
        arity_cap=arity_cap,
        carriers=carriers,
        unit="*",
        compose_fn=lambda c, ds: "*",
        act_fn=lambda c, s: "*",
    )


def _assoc_compose(outer: Permutation, inners: list[Permutation]) -> Permutation:
    # Nested-interval semantics: entry j of block i lands at the global rank
    # of sub-slot d_i(j) inside outer slot c(i).
    ns = [d.size for d in inners]
    images: list[int] = []
    for i in range(1, outer.size + 1):
        below = sum(ns[a - 1] for a in range(1, outer.size + 1) if outer(a) < outer(i))
        images.extend(below + inners[i - 1](j) for j in range(1, ns[i - 1] + 1))
    return Permutation(tuple(images))


def assoc_operad(arity_cap: int) -> SetOperad:
    """The associative operad: arity n carrier is the symmetric group on n letters."""
    carriers = {
        n: tuple(Permutation(p) for p in iter_permutations(range(1, n + 1)))
        for n in range(0, arity_cap + 1)
    }
    return SetOperad(
        name="assoc",
        arity_cap=arity_cap,
        carriers=carriers,
        unit=Permutation.identity(1),
        compose_fn=_assoc_compose,
        act_fn=lambda c, s: c.compose(s),
    )


# --- free operad with a collapsed point in arity zero ----------------------
#
# Elements are terms over named operations where any subtree containing no
# input slot is collapsed to the single nullary point "*".  Terms are nested
# tuples: ("slot", i), "*", or ("op", name, children).

STAR = "*"


def _term_slots(term, out: list[int]) -> None:
    if term == STAR:
        return
    if term[0] == "slot":
        out.append(term[1])
        return
    for child in term[2]:
        _term_slots(child, out)


def _term_size(term) -> int:
    if term == STAR or term[0] == "slot":
        return 0
    return 1 + sum(_term_size(c) for c in term[2])


def _normalize_term(term):
    if term == STAR or term[0] == "slot":
        return term
    slots: list[int] = []
    _term_slots(term, slots)
    if not slots:
        return STAR
    return ("op", term[1], tuple(_normalize_term(c) for c in term[2]))


def _relabel_term(term, mapping):
    if term == STAR:
        return term
    if term[0] == "slot":
        return ("slot", mapping(term[1]))
    return ("op", term[1], tuple(_relabel_term(c, mapping) for c in term[2]))


def _substitute_term(term, replacements: dict):
    if term == STAR:
        return term
    if term[0] == "slot":
        return replacements[term[1]]
    return ("op", term[1], tuple(_substitute_term(c, replacements) for c in term[2]))


def _weak_compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def _cartesian(option_lists):
    if not option_lists:
        yield ()
        return
    for head in option_lists[0]:
        for rest in _cartesian(option_lists[1:]):
            yield (head,) + rest


def _enumerate_planar(ops: dict, n_slots: int, max_ops: int) -> list:
    """Planar terms with `n_slots` slot leaves, labelled 1..n left to right."""
    if n_slots == 0:
        return [STAR]
    results: list = []
    if n_slots == 1:
        results.append(("slot", 1))
    if max_ops >= 1:
        for name, arity in sorted(ops.items()):
            if arity == 0:
                continue
            for split in _weak_compositions(n_slots, arity):
                offsets = []
                acc = 0
                for cnt in split:
                    offsets.append(acc)
                    acc += cnt
                for size_total in range(max_ops):
                    for sizes in _weak_compositions(size_total, arity):
                        parts_options = []
                        for cnt, size_budget in zip(split, sizes):
                            opts = [
                                t
                                for t in _enumerate_planar(ops, cnt, size_budget)
                                if _term_size(t) == size_budget
                            ]
                            parts_options.append(opts)
                        if any(not opts for opts in parts_options):
                            continue
                        for combo in _cartesian(parts_options):
                            children = tuple(
                                _relabel_term(part, lambda s, off=offsets[i]: s + off)
                                for i, part in enumerate(combo)
                            )
                            results.append(("op", name, children))
    return results


def free_pointed_operad(ops: dict, arity_cap: int, size_cap: int) -> SetOperad:
    """Free operad on named operations with all slotless composites collapsed
    to a single nullary point.  Carriers are truncated by term size; composites
    that leave the truncation raise CapExceeded."""
    unit = ("slot", 1)
    carriers: dict[int, tuple] = {0: (STAR,)}
    for n in range(1, arity_cap + 1):
        elems = []
        for planar in _enumerate_planar(ops, n, size_cap):
            for labels in iter_permutations(range(1, n + 1)):
                mapping = dict(zip(range(1, n + 1), labels))
                elems.append(_normalize_term(_relabel_term(planar, lambda s: mapping[s])))
        carriers[n] = tuple(dict.fromkeys(elems))

    def compose_fn(outer, inners):
        ns = []
        for d in inners:
            slots: list[int] = []
            _term_slots(d, slots)
            ns.append(len(slots))
        offsets = [0] * (len(ns) + 1)
        for i, n in enumerate(ns):
            offsets[i + 1] = offsets[i] + n
        replacements = {
            i: _relabel_term(d, lambda s, off=offsets[i - 1]: s + off)
            for i, d in enumerate(inners, start=1)
        }
        return _normalize_term(_substitute_term(outer, replacements))

    def act_fn(term, sigma: Permutation):
        inv = sigma.inverse()
        return _relabel_term(term, inv)

    return SetOperad(
        name="free-pointed",
        arity_cap=arity_cap,
        carriers=carriers,
        unit=unit,
        compose_fn=compose_fn,
        act_fn=act_fn,
    )


# --- tree evaluation --------------------------------------------------------

def eval_tree(operad: SetOperad, tree: OperadTree):
    """Fold operad composition over a tree whose generators are tabulated elements.

    Returns the element of arity tree.arity; the fold is positional, followed
    by the action of the leaf labelling.
    """

    def fold(node):
        # returns (element, arity)
        if isinstance(node, Leaf):
            return operad.unit, 1
        element = node.gen.name
        if not operad.contains(node.gen.arity, element):
            raise InvalidInput(
                f"generator {element!r} is not tabulated at arity {node.gen.arity}"
            )
        if not node.children:
            return element, 0
        parts = [fold(c) for c in node.children]
        composed = operad.compose(
            element,
            [p[0] for p in parts],
            outer_arity=node.gen.arity,
            inner_arities=[p[1] for p in parts],
        )
        return composed, sum(p[1] for p in parts)

    folded, _ = fold(tree.root)
    pi = leaf_permutation(tree)
    if pi.is_identity():
        return folded
    return operad.act(folded, pi)


# --- axiom checking ---------------------------------------------------------

@dataclass
class AxiomCheck:
    name: str
    passed: bool
    instances: int
    exhaustive: bool
    witness: Optional[tuple] = None


@dataclass
class OperadAxiomReport:
    operad: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exhaustive(self) -> bool:
        return all(c.exhaustive for c in self.checks)

    def to_text(self) -> str:
        lines = [f"operad axiom report: {self.operad}"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            mode = "exhaustive" if c.exhaustive else "sampled"
            line = f"  {c.name}: {status} ({c.instances} instances, {mode})"
            if c.witness is not None:
                line += f" witness={c.witness!r}"
            lines.append(line)
        return "\n".join(lines)


def _compositions_upto(total_max: int, parts: int):
    for total in range(total_max + 1):
        yield from _weak_compositions(total, parts)


def _all_perms(n: int):
    return [Permutation(p) for p in iter_permutations(range(1, n + 1))]


def _rand_perm(rng: random.Random, n: int) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def check_operad_axioms(operad: SetOperad, budget: int = 20000) -> OperadAxiomReport:
    """Verify unit, associativity, action, and the two composition/equivariance
    axioms (outer action routed through the block wreath permutation).

    Each axiom is checked exhaustively when its instance space fits in
    `budget`, and on a seeded random sample of `budget` instances otherwise.
    """
    if budget <= 0:
        raise InvalidInput("budget must be positive")
    rng = random.Random(20240)
    cap = operad.arity_cap
    arities = [n for n in operad.arities() if operad.carriers[n]]
    pos_arities = [n for n in arities if n > 0]
    checks: list[AxiomCheck] = []

    def run(name, count, exhaustive_iter, random_instance, verify):
        # Instances whose composites leave the truncation are skipped, not failed.
        passed, witness = True, None

        def attempt(inst):
            nonlocal passed, witness
            try:
                ok = verify(inst)
            except (ArityOverflow, CapExceeded):
                return 0
            if not ok:
                passed, witness = False, inst
            return 1

        used = 0
        if count <= budget:
            for inst in exhaustive_iter():
                used += attempt(inst)
                if not passed:
                    break
            checks.append(AxiomCheck(name, passed, used, True, witness))
        else:
            for _ in range(budget):
                used += attempt(random_instance())
                if not passed:
                    break
            checks.append(AxiomCheck(name, passed, used, False, witness))

    def elements_count(n):
        return len(operad.elements(n))

    # -- unit and action laws
    def unit_iter():
        for n in arities:
            for c in operad.elements(n):
                yield (n, c)

    def unit_rand():
        n = rng.choice(arities)
        return (n, rng.choice(operad.elements(n)))

    unit_count = sum(elements_count(n) for n in arities)
    run("left_unit", unit_count, unit_iter, unit_rand,
        lambda inst: operad.compose(operad.unit, [inst[1]], 1, [inst[0]]) == inst[1])
    run("right_unit", unit_count, unit_iter, unit_rand,
        lambda inst: operad.compose(inst[1], [operad.unit] * inst[0], inst[0], [1] * inst[0])
        == inst[1])
    run("action_identity", unit_count, unit_iter, unit_rand,
        lambda inst: operad.act(inst[1], Permutation.identity(inst[0])) == inst[1])

    def action_iter():
        for n in arities:
            perms = _all_perms(n)
            for c in operad.elements(n):
                for s in perms:
                    for t in perms:
                        yield (c, s, t)

    def action_rand():
        n = rng.choice(arities)
        return (rng.choice(operad.elements(n)), _rand_perm(rng, n), _rand_perm(rng, n))

    action_count = sum(elements_count(n) * math.factorial(n) ** 2 for n in arities)
    run("action_composition", action_count, action_iter, action_rand,
        lambda inst: operad.act(operad.act(inst[0], inst[1]), inst[2])
        == operad.act(inst[0], inst[1].compose(inst[2])))

    # -- associativity over three levels
    def assoc_shapes():
        for k in pos_arities:
            for ns in _compositions_upto(cap, k):
                for ms in _compositions_upto(cap, sum(ns)):
                    yield (k, ns, ms)

    def assoc_count():
        total = 0
        for k, ns, ms in assoc_shapes():
            prod = elements_count(k)
            for n in ns:
                prod *= elements_count(n)
            for m in ms:
                prod *= elements_count(m)
            total += prod
            if total > budget * 4:
                return total
        return total

    def assoc_iter():
        for k, ns, ms in assoc_shapes():
            for a in operad.elements(k):
                for bs in _cartesian([operad.elements(n) for n in ns]):
                    for cs in _cartesian([operad.elements(m) for m in ms]):
                        yield (a, list(bs), list(cs), list(ns), list(ms))

    def assoc_rand():
        k = rng.choice(pos_arities)
        ns = _rand_shape(rng, k, cap)
        ms = _rand_shape(rng, sum(ns), cap) if sum(ns) else []
        a = rng.choice(operad.elements(k))
        bs = [rng.choice(operad.elements(n)) for n in ns]
        cs = [rng.choice(operad.elements(m)) for m in ms]
        return (a, bs, cs, ns, ms)

    def assoc_verify(inst):
        a, bs, cs, ns, ms = inst
        k = len(ns)
        mid = operad.compose(a, bs, k, ns)
        left = operad.compose(mid, cs, sum(ns), ms)
        grouped, grouped_ns, pos = [], [], 0
        for b, n in zip(bs, ns):
            grouped.append(operad.compose(b, cs[pos : pos + n], n, ms[pos : pos + n]))
            grouped_ns.append(sum(ms[pos : pos + n]))
            pos += n
        return left == operad.compose(a, grouped, k, grouped_ns)

    run("associativity", assoc_count(), assoc_iter, assoc_rand, assoc_verify)

    # -- outer equivariance (block wreath on the right)
    def outer_shapes():
        for k in pos_arities:
            for ns in _compositions_upto(cap, k):
                yield (k, ns)

    def outer_count():
        total = 0
        for k, ns in outer_shapes():
            prod = elements_count(k) * math.factorial(k)
            for n in ns:
                prod *= elements_count(n)
            total += prod
            if total > budget * 4:
                return total
        return total

    def outer_iter():
        for k, ns in outer_shapes():
            for a in operad.elements(k):
                for lam in _all_perms(k):
                    for ds in _cartesian([operad.elements(n) for n in ns]):
                        yield (a, lam, list(ds), list(ns))

    def outer_rand():
        k = rng.choice(pos_arities)
        ns = _rand_shape(rng, k, cap)
        return (
            rng.choice(operad.elements(k)),
            _rand_perm(rng, k),
            [rng.choice(operad.elements(n)) for n in ns],
            ns,
        )

    def outer_verify(inst):
        a, lam, ds, ns = inst
        k = len(ns)
        left = operad.compose(operad.act(a, lam), ds, k, ns)
        inv = lam.inverse()
        reordered = [ds[inv(i) - 1] for i in range(1, lam.size + 1)]
        sizes = [ns[inv(i) - 1] for i in range(1, lam.size + 1)]
        wreath = block_wreath(lam, [Permutation.identity(s) for s in sizes], sizes)
        return left == operad.act(operad.compose(a, reordered, k, sizes), wreath)

    run("equivariance_outer", outer_count(), outer_iter, outer_rand, outer_verify)

    # -- inner equivariance (block sum via the identity wreath)
    def inner_count():
        total = 0
        for k, ns in outer_shapes():
            prod = elements_count(k)
            for n in ns:
                prod *= elements_count(n) * math.factorial(n)
            total += prod
            if total > budget * 4:
                return total
        return total

    def inner_iter():
        for k, ns in outer_shapes():
            for a in operad.elements(k):
                for ds in _cartesian([operad.elements(n) for n in ns]):
                    for taus in _cartesian([_all_perms(n) for n in ns]):
                        yield (a, list(ds), list(taus), list(ns))

    def inner_rand():
        k = rng.choice(pos_arities)
        ns = _rand_shape(rng, k, cap)
        return (
            rng.choice(operad.elements(k)),
            [rng.choice(operad.elements(n)) for n in ns],
            [_rand_perm(rng, n) for n in ns],
            ns,
        )

    def inner_verify(inst):
        a, ds, taus, ns = inst
        k = len(ns)
        left = operad.compose(a, [operad.act(d, t) for d, t in zip(ds, taus)], k, ns)
        wreath = block_wreath(Permutation.identity(len(ns)), taus, ns)
        return left == operad.act(operad.compose(a, ds, k, ns), wreath)

    run("equivariance_inner", inner_count(), inner_iter, inner_rand, inner_verify)

    return OperadAxiomReport(operad.name, checks)


def _rand_shape(rng: random.Random, parts: int, cap: int) -> list[int]:
    total = rng.randint(0, cap)
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1)) if parts > 1 else []
    bounds = [0] + cuts + [total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]
