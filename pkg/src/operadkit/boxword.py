"""Words of the free operad on two coloured alphabets, interchange rewriting,
colour-internal collapse, and a bounded decision procedure for word equality."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations as iter_permutations
from typing import Hashable, Optional

from .errors import InvalidInput, PatternMismatch, SizeMismatch
from .perm import Permutation
from .setoperad import SetOperad
from .trees import LEFT, RIGHT, GeneratorSignature, Internal, Leaf, OperadTree, parse_sexpr


class FreeColor:
    """One colour of an alphabet with no internal operad structure."""

    def __init__(self, signatures):
        self.signatures = {}
        for sig in signatures:
            if sig.name in self.signatures:
                raise InvalidInput(f"duplicate generator name {sig.name!r}")
            self.signatures[sig.name] = sig

    unit_label = None
    nullary_point = None

    def validate(self, label, arity) -> None:
        sig = self.signatures.get(label)
        if sig is None or sig.arity != arity:
            raise InvalidInput(f"unknown generator {label!r} of arity {arity}")

    def compose(self, label, arity, parts, part_arities):
        raise InvalidInput("free colours have no internal composition")

    def act(self, label, sigma):
        raise InvalidInput("free colours have no label action")

    def canonical_choices(self, label, arity):
        return None  # no regrouping

    def name_of(self, label) -> str:
        return str(label)

    def resolve(self, name: str):
        if name not in self.signatures:
            raise InvalidInput(f"unknown generator name {name!r}")
        sig = self.signatures[name]
        return sig.name, sig.arity

    def describe(self):
        return ("free", tuple(sorted((str(s.name), s.arity) for s in self.signatures.values())))


class TableColor:
    """One colour backed by a tabulated set-operad."""

    def __init__(self, operad: SetOperad):
        self.operad = operad

    @property
    def unit_label(self):
        return self.operad.unit

    @property
    def nullary_point(self):
        zeros = self.operad.carriers.get(0, ())
        return zeros[0] if len(zeros) == 1 else None

    def validate(self, label, arity) -> None:
        if not self.operad.contains(arity, label):
            raise InvalidInput(f"{label!r} is not a tabulated arity-{arity} element")

    def compose(self, label, arity, parts, part_arities):
        inners, arities = [], []
        for part, n in zip(parts, part_arities):
            if part is None:
                inners.append(self.operad.unit)
                arities.append(1)
            else:
                inners.append(part)
                arities.append(n)
        return self.operad.compose(label, inners, arity, arities)

    def act(self, label, sigma):
        return self.operad.act(label, sigma)

    def canonical_choices(self, label, arity):
        if arity < 2 or arity > 6:
            return None
        return [
            (Permutation(p), self.operad.act(label, Permutation(p)))
            for p in iter_permutations(range(1, arity + 1))
        ]

    def name_of(self, label) -> str:
        if isinstance(label, Permutation):
            return label.format()
        return str(label)

    def resolve(self, name: str):
        for n, elems in self.operad.carriers.items():
            for e in elems:
                if self.name_of(e) == name:
                    return e, n
        raise InvalidInput(f"no tabulated element named {name!r}")

    def describe(self):
        return ("table", self.operad.name, self.operad.arity_cap)


@dataclass(frozen=True)
class BoxAlphabet:
    """A two-colour alphabet, optionally identifying the colours' nullary points."""

    left: object
    right: object
    identify_nullaries: bool = False

    def side(self, color: str):
        if color == LEFT:
            return self.left
        if color == RIGHT:
            return self.right
        raise InvalidInput(f"box words use colours left/right, got {color!r}")

    def compatible(self, other: "BoxAlphabet") -> bool:
        return (
            self.left.describe() == other.left.describe()
            and self.right.describe() == other.right.describe()
            and self.identify_nullaries == other.identify_nullaries
        )

    def normalize_gen(self, gen: GeneratorSignature) -> GeneratorSignature:
        """Rewrite an identified right nullary point to the left one."""
        if (
            self.identify_nullaries
            and gen.arity == 0
            and gen.color == RIGHT
            and self.right.nullary_point is not None
            and gen.name == self.right.nullary_point
        ):
            if self.left.nullary_point is None:
                raise InvalidInput("cannot identify nullaries: left colour has no unique point")
            return GeneratorSignature(self.left.nullary_point, 0, LEFT)
        return gen

    def is_neutral_nullary(self, gen: GeneratorSignature) -> bool:
        if not self.identify_nullaries or gen.arity != 0:
            return False
        return gen.name == self.side(gen.color).nullary_point

    def neutral_part_for(self, color: str):
        point = self.side(color).nullary_point
        if point is None:
            raise InvalidInput(f"{color} colour has no nullary point")
        return point


def free_alphabet(signatures, identify_nullaries=False) -> BoxAlphabet:
    lefts = [s for s in signatures if s.color == LEFT]
    rights = [s for s in signatures if s.color == RIGHT]
    return BoxAlphabet(FreeColor(lefts), FreeColor(rights), identify_nullaries)


def table_alphabet(left: SetOperad, right: SetOperad, identify_nullaries=False) -> BoxAlphabet:
    return BoxAlphabet(TableColor(left), TableColor(right), identify_nullaries)


# --- words -------------------------------------------------------------------

def _validate_node(node, alphabet) -> None:
    if isinstance(node, Leaf):
        return
    if node.gen.color not in (LEFT, RIGHT):
        raise InvalidInput(f"box word node {node.gen.name!r} must be coloured left or right")
    alphabet.side(node.gen.color).validate(node.gen.name, node.gen.arity)
    for child in node.children:
        _validate_node(child, alphabet)


def _normalize_nullaries(node, alphabet):
    if isinstance(node, Leaf):
        return node
    gen = alphabet.normalize_gen(node.gen)
    return Internal(gen, tuple(_normalize_nullaries(c, alphabet) for c in node.children))


@dataclass(frozen=True)
class BoxWord:
    """A free-operad word over a two-colour alphabet.

    The tree is kept planar (leaf at position i is labelled i) and the whole
    symmetric decoration lives in `perm`, which sends each global input slot
    to its leaf position.
    """

    tree: OperadTree
    perm: Permutation
    alphabet: BoxAlphabet = field(compare=False)

    def __post_init__(self):
        slots = self.tree.leaf_slots()
        if slots != list(range(1, len(slots) + 1)):
            raise InvalidInput("box word trees must be planar: leaves labelled 1..n in order")
        if self.perm.size != len(slots):
            raise SizeMismatch(f"leaf permutation size {self.perm.size} vs arity {len(slots)}")
        _validate_node(self.tree.root, self.alphabet)

    @property
    def arity(self) -> int:
        return self.perm.size

    @staticmethod
    def from_labeled(root, alphabet: BoxAlphabet) -> "BoxWord":
        """Build a word from a tree whose leaves carry global slot labels."""
        root = _normalize_nullaries(root, alphabet)
        labels: list[int] = []

        def strip(node):
            if isinstance(node, Leaf):
                labels.append(node.slot)
                return Leaf(len(labels))
            return Internal(node.gen, tuple(strip(c) for c in node.children))

        planar = strip(root)
        n = len(labels)
        if sorted(labels) != list(range(1, n + 1)):
            raise InvalidInput(f"leaf labels {labels} are not a bijection with 1..{n}")
        images = [0] * n
        for pos, label in enumerate(labels, start=1):
            images[label - 1] = pos
        return BoxWord(OperadTree(planar), Permutation(tuple(images)), alphabet)

    def labeled_root(self):
        """The tree with global slot labels restored at the leaves."""
        inv = self.perm.inverse()

        def restore(node):
            if isinstance(node, Leaf):
                return Leaf(inv(node.slot))
            return Internal(node.gen, tuple(restore(c) for c in node.children))

        return restore(self.tree.root)

    def to_text(self) -> str:
        def render(node):
            if isinstance(node, Leaf):
                return str(node.slot)
            side = self.alphabet.side(node.gen.color)
            prefix = "L:" if node.gen.color == LEFT else "R:"
            head = prefix + side.name_of(node.gen.name)
            if not node.children:
                return f"({head})"
            return "(" + head + " " + " ".join(render(c) for c in node.children) + ")"

        return render(self.tree.root) + self.perm.format()

    def __repr__(self) -> str:
        return f"BoxWord({self.to_text()})"


def parse_word(text: str, alphabet: BoxAlphabet) -> BoxWord:
    """Parse a coloured s-expression with an optional trailing permutation."""
    body = text.strip()
    trailing = None
    if body.endswith("]"):
        cut = body.rfind("[")
        if cut == -1:
            raise InvalidInput(f"unbalanced trailing permutation in {text!r}")
        trailing = Permutation.parse(body[cut:])
        body = body[:cut].strip()

    def resolve(head: str) -> GeneratorSignature:
        if head.startswith("L:"):
            color, name = LEFT, head[2:]
        elif head.startswith("R:"):
            color, name = RIGHT, head[2:]
        else:
            raise InvalidInput(f"box word heads need an L:/R: colour prefix, got {head!r}")
        label, arity = alphabet.side(color).resolve(name)
        return GeneratorSignature(label, arity, color)

    tree = parse_sexpr(body, resolve)
    word = BoxWord.from_labeled(tree.root, alphabet)
    if trailing is not None:
        if trailing.size != word.arity:
            raise SizeMismatch("trailing permutation size does not match word arity")
        word = BoxWord(word.tree, word.perm.compose(trailing), word.alphabet)
    return word


# --- interchange ------------------------------------------------------------

def interchange_perm(m: int, n: int) -> Permutation:
    """The permutation converting row-major to column-major order on an m x n grid."""
    if m < 1 or n < 1:
        raise InvalidInput("interchange needs m, n >= 1")
    images = [0] * (m * n)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            images[(i - 1) * n + (j - 1)] = (j - 1) * m + i
    return Permutation(tuple(images))


def _node_at(root, path):
    node = root
    for idx in path:
        if isinstance(node, Leaf) or idx >= len(node.children):
            raise PatternMismatch(f"no node at path {path}")
        node = node.children[idx]
    return node


def _replace_at(root, path, new_node):
    if not path:
        return new_node
    if isinstance(root, Leaf):
        raise PatternMismatch(f"no node at path {path}")
    idx = path[0]
    children = list(root.children)
    children[idx] = _replace_at(children[idx], path[1:], new_node)
    return Internal(root.gen, tuple(children))


def _interchange_node(node, alphabet):
    """Rewrite one interchange redex rooted at `node`, or raise PatternMismatch."""
    if isinstance(node, Leaf) or not node.children:
        raise PatternMismatch("interchange needs an internal node with children")
    kids = node.children
    if any(isinstance(k, Leaf) for k in kids):
        raise PatternMismatch("children must be generator nodes")
    first = kids[0].gen
    if any(k.gen != first for k in kids[1:]):
        raise PatternMismatch("children must share one generator label")
    if first.color == node.gen.color:
        raise PatternMismatch("children must carry the opposite colour")
    m, n = node.gen.arity, first.arity
    if n == 0:
        # alpha(beta0, ..., beta0) and beta(alpha0, ..., alpha0) both equal the
        # nullary child; only this collapsing direction is finitely branching.
        return Internal(first, ())
    grid = [k.children for k in kids]  # grid[i][j], row-major
    new_children = tuple(
        Internal(node.gen, tuple(grid[i][j] for i in range(m))) for j in range(n)
    )
    return Internal(first, new_children)


def apply_interchange(word: BoxWord, path) -> BoxWord:
    """Apply the interchange relation at `path` (child indices from the root).

    The node's children must all carry the same opposite-colour label; the
    grid of grandchild subtrees is transposed, which composes the trailing
    leaf permutation with interchange_perm of the two arities.
    """
    path = tuple(path)
    root = word.labeled_root()
    node = _node_at(root, path)
    rewritten = _interchange_node(node, word.alphabet)
    return BoxWord.from_labeled(_replace_at(root, path, rewritten), word.alphabet)


# --- colour-internal collapse -------------------------------------------------

def _absorbable(node, child, alphabet) -> bool:
    if isinstance(child, Leaf):
        return False
    if child.gen.color == node.gen.color:
        return True
    return alphabet.is_neutral_nullary(child.gen)


def _absorb_children(node, picks, alphabet):
    """Merge the picked child indices into `node` via its colour's composition."""
    side = alphabet.side(node.gen.color)
    parts, part_arities, new_children = [], [], []
    for idx, child in enumerate(node.children):
        if idx in picks:
            if alphabet.is_neutral_nullary(child.gen) and child.gen.color != node.gen.color:
                parts.append(alphabet.neutral_part_for(node.gen.color))
                part_arities.append(0)
            else:
                parts.append(child.gen.name)
                part_arities.append(child.gen.arity)
                new_children.extend(child.children)
        else:
            parts.append(None)
            part_arities.append(1)
            new_children.append(child)
    label = side.compose(node.gen.name, node.gen.arity, parts, part_arities)
    arity = sum(a if p is not None else 1 for p, a in zip(parts, part_arities))
    return Internal(GeneratorSignature(label, arity, node.gen.color), tuple(new_children))


def _elide_unit(node, alphabet):
    if isinstance(node, Leaf) or node.gen.arity != 1:
        return None
    unit = alphabet.side(node.gen.color).unit_label
    if unit is not None and node.gen.name == unit:
        return node.children[0]
    return None


def collapse_internal(word: BoxWord, left_op=None, right_op=None) -> BoxWord:
    """Merge all colour-internal adjacencies and elide unit nodes; idempotent.

    Optional `left_op`/`right_op` SetOperads override the word's alphabet
    tables for the duration of the collapse.
    """
    alphabet = word.alphabet
    if left_op is not None or right_op is not None:
        alphabet = BoxAlphabet(
            TableColor(left_op) if left_op is not None else alphabet.left,
            TableColor(right_op) if right_op is not None else alphabet.right,
            alphabet.identify_nullaries,
        )

    def normalize(node):
        if isinstance(node, Leaf):
            return node
        node = Internal(node.gen, tuple(normalize(c) for c in node.children))
        while True:
            elided = _elide_unit(node, alphabet)
            if elided is not None:
                node = elided
                if isinstance(node, Leaf):
                    return node
                continue
            picks = frozenset(
                i for i, c in enumerate(node.children) if _absorbable(node, c, alphabet)
            )
            if picks:
                node = _absorb_children(node, picks, alphabet)
                continue
            return node

    root = normalize(word.labeled_root())
    return BoxWord.from_labeled(root, word.alphabet)


# --- equivalence search -------------------------------------------------------

@dataclass(frozen=True)
class Equal:
    trace_left: tuple
    trace_right: tuple


@dataclass(frozen=True)
class Distinct:
    closure_left: frozenset
    closure_right: frozenset


@dataclass(frozen=True)
class Unknown:
    explored: int


def _node_key(node, alphabet) -> str:
    if isinstance(node, Leaf):
        return str(node.slot)
    side = alphabet.side(node.gen.color)
    parts = " ".join(_node_key(c, alphabet) for c in node.children)
    head = ("L:" if node.gen.color == LEFT else "R:") + side.name_of(node.gen.name)
    return f"({head} {parts})" if parts else f"({head})"


def _canonical_node(node, alphabet):
    """Regroup each node label into its minimal symmetric presentation."""
    if isinstance(node, Leaf):
        return node
    children = tuple(_canonical_node(c, alphabet) for c in node.children)
    side = alphabet.side(node.gen.color)
    choices = side.canonical_choices(node.gen.name, node.gen.arity)
    label = node.gen.name
    if choices:
        keys = [_node_key(c, alphabet) for c in children]
        best = None
        for lam, acted in choices:
            arranged = tuple(children[lam(j) - 1] for j in range(1, lam.size + 1))
            arranged_keys = tuple(keys[lam(j) - 1] for j in range(1, lam.size + 1))
            cand = (side.name_of(acted), arranged_keys)
            if best is None or cand < best[0]:
                best = (cand, acted, arranged)
        _, label, children = best
    gen = GeneratorSignature(label, node.gen.arity, node.gen.color)
    return Internal(gen, children)


def canonical_word(word: BoxWord) -> BoxWord:
    """The word with every node label regrouped into its minimal symmetric
    presentation; equal words with regrouped labels canonicalize identically."""
    root = _canonical_node(word.labeled_root(), word.alphabet)
    return BoxWord.from_labeled(root, word.alphabet)


def canonical_key(word: BoxWord) -> str:
    return canonical_word(word).to_text()


def _merge_candidates(node, alphabet):
    for idx, child in enumerate(node.children):
        if _absorbable(node, child, alphabet):
            yield idx


def apply_step(word: BoxWord, step) -> BoxWord:
    kind, path, extra = step
    if kind == "interchange":
        return apply_interchange(word, path)
    if kind == "merge":
        root = word.labeled_root()
        node = _node_at(root, path)
        if isinstance(node, Leaf):
            raise PatternMismatch(f"no internal node at {path}")
        new_node = _absorb_children(node, frozenset([extra]), word.alphabet)
        return BoxWord.from_labeled(_replace_at(root, path, new_node), word.alphabet)
    if kind == "elide":
        root = word.labeled_root()
        node = _node_at(root, path)
        elided = _elide_unit(node, word.alphabet)
        if elided is None:
            raise PatternMismatch(f"no unit node at {path}")
        return BoxWord.from_labeled(_replace_at(root, path, elided), word.alphabet)
    raise InvalidInput(f"unknown rewrite step kind {kind!r}")


def _neighbors(word: BoxWord):
    """All single-step rewrites of a word, with their step descriptors."""
    alphabet = word.alphabet
    out = []

    def visit(node, path):
        if isinstance(node, Leaf):
            return
        try:
            _interchange_node(node, alphabet)
        except PatternMismatch:
            pass
        else:
            out.append(("interchange", path, None))
        for idx in _merge_candidates(node, alphabet):
            try:
                _absorb_children(node, frozenset([idx]), alphabet)
            except Exception:
                continue
            out.append(("merge", path, idx))
        if _elide_unit(node, alphabet) is not None:
            out.append(("elide", path, None))
        for idx, child in enumerate(node.children):
            visit(child, path + (idx,))

    visit(word.labeled_root(), ())
    results = []
    for step in out:
        try:
            results.append((step, canonical_word(apply_step(word, step))))
        except Exception:
            continue
    return results


def equivalent(w1: BoxWord, w2: BoxWord, budget: int):
    """Decide whether two words are congruent modulo interchange and the
    colour-internal identifications.

    Equal comes with a replayable pair of traces into a common word; Distinct
    is certified only by two exhausted, disjoint rewrite closures; Unknown
    reports budget exhaustion.
    """
    if budget <= 0:
        raise InvalidInput("budget must be positive")
    if not w1.alphabet.compatible(w2.alphabet):
        raise InvalidInput("words are over different coloured alphabets")

    start = [canonical_word(w1), canonical_word(w2)]
    sides = [{start[0].to_text(): (start[0], ())}, {start[1].to_text(): (start[1], ())}]
    frontiers = [list(sides[0].items()), list(sides[1].items())]
    explored = 2

    def meeting():
        common = set(sides[0]) & set(sides[1])
        if common:
            key = sorted(common)[0]
            return Equal(sides[0][key][1], sides[1][key][1])
        return None

    verdict = meeting()
    if verdict:
        return verdict

    while any(frontiers):
        for s in (0, 1):
            if not frontiers[s]:
                continue
            new_frontier = []
            for key, (word, trace) in sorted(frontiers[s], key=lambda kv: kv[0]):
                for step, neighbor in sorted(
                    _neighbors(word), key=lambda sn: sn[1].to_text()
                ):
                    nkey = neighbor.to_text()
                    if nkey in sides[s]:
                        continue
                    if explored >= budget:
                        return Unknown(explored)
                    sides[s][nkey] = (neighbor, trace + (step,))
                    new_frontier.append((nkey, sides[s][nkey]))
                    explored += 1
            frontiers[s] = new_frontier
            verdict = meeting()
            if verdict:
                return verdict

    return Distinct(frozenset(sides[0]), frozenset(sides[1]))


def replay(word: BoxWord, trace) -> BoxWord:
    """Apply a recorded trace of rewrite steps, canonicalizing after each one
    the same way the closure search does."""
    word = canonical_word(word)
    for step in trace:
        word = canonical_word(apply_step(word, step))
    return word
