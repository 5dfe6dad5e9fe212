"""Trees of a free operad: labelled leaves, grafting, and the symmetric action."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Optional, Union

from .errors import InvalidInput, SizeMismatch
from .perm import Permutation

LEFT = "left"
RIGHT = "right"
SINGLE = "single"
COLORS = (LEFT, RIGHT, SINGLE)


@dataclass(frozen=True)
class GeneratorSignature:
    """An operation symbol with a fixed arity and a colour tag."""

    name: Hashable
    arity: int
    color: str = SINGLE

    def __post_init__(self):
        if self.arity < 0:
            raise InvalidInput(f"arity must be non-negative, got {self.arity}")
        if self.color not in COLORS:
            raise InvalidInput(f"unknown color {self.color!r}")


@dataclass(frozen=True)
class Leaf:
    """An input slot, labelled by a positive integer."""

    slot: int

    def __post_init__(self):
        if self.slot < 1:
            raise InvalidInput(f"leaf slots are 1-indexed, got {self.slot}")


@dataclass(frozen=True)
class Internal:
    """An internal node: a generator applied to an ordered tuple of subtrees."""

    gen: GeneratorSignature
    children: tuple  # of Leaf | Internal

    def __post_init__(self):
        if len(self.children) != self.gen.arity:
            raise InvalidInput(
                f"generator {self.gen.name!r} has arity {self.gen.arity}, got {len(self.children)} children"
            )


Node = Union[Leaf, Internal]


def _collect_slots(node: Node, out: list[int]) -> None:
    if isinstance(node, Leaf):
        out.append(node.slot)
    else:
        for child in node.children:
            _collect_slots(child, out)


@dataclass(frozen=True)
class OperadTree:
    """A free-operad element: a tree whose leaf slots biject with {1, ..., n}."""

    root: Node

    def __post_init__(self):
        slots = self.leaf_slots()
        if sorted(slots) != list(range(1, len(slots) + 1)):
            raise InvalidInput(f"leaf slots {slots} are not a bijection with 1..{len(slots)}")

    def leaf_slots(self) -> list[int]:
        """Leaf labels read left to right."""
        out: list[int] = []
        _collect_slots(self.root, out)
        return out

    @property
    def arity(self) -> int:
        out: list[int] = []
        _collect_slots(self.root, out)
        return len(out)

    def to_sexpr(self) -> str:
        return _node_sexpr(self.root, colored=False)

    def to_colored_sexpr(self) -> str:
        return _node_sexpr(self.root, colored=True)

    def __repr__(self) -> str:
        return f"OperadTree({self.to_sexpr()})"


def leaf_tree() -> OperadTree:
    """The unit tree: a single input slot."""
    return OperadTree(Leaf(1))


def _node_sexpr(node: Node, colored: bool) -> str:
    if isinstance(node, Leaf):
        return str(node.slot)
    prefix = ""
    if colored and node.gen.color != SINGLE:
        prefix = "L:" if node.gen.color == LEFT else "R:"
    head = f"{prefix}{node.gen.name}"
    if not node.children:
        return f"({head})"
    return "(" + head + " " + " ".join(_node_sexpr(c, colored) for c in node.children) + ")"


def _relabel(node: Node, mapping) -> Node:
    if isinstance(node, Leaf):
        return Leaf(mapping(node.slot))
    return Internal(node.gen, tuple(_relabel(c, mapping) for c in node.children))


def _graft_node(node: Node, inner_roots: dict[int, Node]) -> Node:
    if isinstance(node, Leaf):
        return inner_roots[node.slot]
    return Internal(node.gen, tuple(_graft_node(c, inner_roots) for c in node.children))


def graft(outer: OperadTree, inners) -> OperadTree:
    """Substitute inners[i-1] into the leaf slot labelled i of outer.

    Leaf slots of the result are renumbered by block offsets: slot i receives
    the block sum(arity(inners[:i-1])) + 1 .. sum(arity(inners[:i])).
    """
    inners = list(inners)
    if len(inners) != outer.arity:
        raise SizeMismatch(f"outer arity {outer.arity} but {len(inners)} inner trees")
    offsets = [0] * (len(inners) + 1)
    for i, t in enumerate(inners):
        offsets[i + 1] = offsets[i] + t.arity
    roots = {
        i: _relabel(t.root, lambda s, off=offsets[i - 1]: s + off)
        for i, t in enumerate(inners, start=1)
    }
    return OperadTree(_graft_node(outer.root, roots))


def act_tree(tree: OperadTree, sigma: Permutation) -> OperadTree:
    """Right symmetric action on leaf labels.

    Satisfies act_tree(act_tree(T, s), t) == act_tree(T, s.compose(t)) and is
    compatible with evaluation: eval(act_tree(T, s)) == act(eval(T), s).
    """
    if sigma.size != tree.arity:
        raise SizeMismatch(f"tree arity {tree.arity} vs permutation size {sigma.size}")
    inv = sigma.inverse()
    return OperadTree(_relabel(tree.root, inv))


def leaf_permutation(tree: OperadTree) -> Permutation:
    """The permutation sending each global slot to its leaf position in the tree."""
    slots = tree.leaf_slots()
    images = [0] * len(slots)
    for pos, label in enumerate(slots, start=1):
        images[label - 1] = pos
    return Permutation(tuple(images))


# --- s-expression parsing -------------------------------------------------

def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    cur = ""
    for ch in text:
        if ch in "()":
            if cur:
                tokens.append(cur)
                cur = ""
            tokens.append(ch)
        elif ch.isspace():
            if cur:
                tokens.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        tokens.append(cur)
    return tokens


def parse_sexpr(text: str, resolve_gen) -> OperadTree:
    """Parse a tree s-expression like `(alpha (beta 1) 2)`.

    `resolve_gen(head)` must return the GeneratorSignature for a head token;
    heads may carry `L:`/`R:` colour prefixes, which are passed through.
    """
    tokens = _tokenize(text)
    pos = 0

    def parse_node() -> Node:
        nonlocal pos
        if pos >= len(tokens):
            raise InvalidInput(f"unexpected end of expression in {text!r}")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            if pos >= len(tokens) or tokens[pos] in "()":
                raise InvalidInput(f"expected generator name in {text!r}")
            gen = resolve_gen(tokens[pos])
            pos += 1
            children = []
            while pos < len(tokens) and tokens[pos] != ")":
                children.append(parse_node())
            if pos >= len(tokens):
                raise InvalidInput(f"unbalanced parentheses in {text!r}")
            pos += 1
            return Internal(gen, tuple(children))
        if tok == ")":
            raise InvalidInput(f"unexpected ')' in {text!r}")
        pos += 1
        try:
            return Leaf(int(tok))
        except ValueError as exc:
            raise InvalidInput(f"expected a leaf slot number, got {tok!r}") from exc

    node = parse_node()
    if pos != len(tokens):
        raise InvalidInput(f"trailing tokens in {text!r}")
    return OperadTree(node)
