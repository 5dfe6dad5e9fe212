"""Exact-rational little-cube configurations and the comparison maps between
box-product words over two cube colours and cubes of the joint dimension."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .boxword import BoxAlphabet, BoxWord
from .errors import (
    DimensionMismatch,
    InvalidInput,
    InvalidWitness,
    SearchExhausted,
    SizeMismatch,
)
from .perm import Permutation, act_tuple
from .trees import LEFT, RIGHT, GeneratorSignature, Internal, Leaf

PLAIN = "plain"
PRIME = "prime"

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InvalidInput(f"expected an exact rational, got {value!r}")


@dataclass(frozen=True)
class LittleCube:
    """A product of increasing affine maps, one interval (a, b) per axis."""

    intervals: tuple

    def __post_init__(self):
        ints = tuple((_frac(a), _frac(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ints)
        for a, b in ints:
            if not (ZERO <= a < b <= ONE):
                raise InvalidInput(f"axis interval [{a}, {b}] must satisfy 0 <= a < b <= 1")

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def compose(self, inner: "LittleCube") -> "LittleCube":
        """Affine substitution per axis: [a,b] o [c,d] = [a+(b-a)c, a+(b-a)d]."""
        if inner.dim != self.dim:
            raise DimensionMismatch(f"cannot compose dim {self.dim} with dim {inner.dim}")
        return LittleCube(
            tuple(
                (a + (b - a) * c, a + (b - a) * d)
                for (a, b), (c, d) in zip(self.intervals, inner.intervals)
            )
        )

    def scaled(self, lam: Fraction) -> "LittleCube":
        """Shrink by a factor about the centre, axis by axis."""
        out = []
        for a, b in self.intervals:
            mid = (a + b) / 2
            half = (b - a) * lam / 2
            out.append((mid - half, mid + half))
        return LittleCube(tuple(out))

    def strictly_inside(self, other: "LittleCube") -> bool:
        """Whole closed cube inside the open interior of `other`."""
        return all(
            oa < a and b < ob
            for (a, b), (oa, ob) in zip(self.intervals, other.intervals)
        )


def _interiors_disjoint(c1: LittleCube, c2: LittleCube) -> bool:
    return any(
        b1 <= a2 or b2 <= a1
        for (a1, b1), (a2, b2) in zip(c1.intervals, c2.intervals)
    )


def _closures_disjoint(c1: LittleCube, c2: LittleCube) -> bool:
    return any(
        b1 < a2 or b2 < a1
        for (a1, b1), (a2, b2) in zip(c1.intervals, c2.intervals)
    )


@dataclass(frozen=True)
class CubeConfig:
    """An ordered tuple of little cubes of one dimension.

    `plain` requires pairwise disjoint interiors; `prime` requires pairwise
    disjoint closed images, each inside the open unit cube.
    """

    dim: int
    cubes: tuple
    strictness: str = PLAIN

    def __post_init__(self):
        if self.strictness not in (PLAIN, PRIME):
            raise InvalidInput(f"unknown strictness {self.strictness!r}")
        cubes = tuple(
            c if isinstance(c, LittleCube) else LittleCube(tuple(c)) for c in self.cubes
        )
        object.__setattr__(self, "cubes", cubes)
        for c in cubes:
            if c.dim != self.dim:
                raise DimensionMismatch(f"cube of dim {c.dim} in a dim-{self.dim} configuration")
        for i, c1 in enumerate(cubes):
            for c2 in cubes[i + 1 :]:
                if self.strictness == PLAIN:
                    if not _interiors_disjoint(c1, c2):
                        raise InvalidInput(f"cubes {c1} and {c2} have overlapping interiors")
                else:
                    if not _closures_disjoint(c1, c2):
                        raise InvalidInput(f"cubes {c1} and {c2} have touching closures")
        if self.strictness == PRIME:
            for c in cubes:
                if not all(ZERO < a and b < ONE for a, b in c.intervals):
                    raise InvalidInput(f"prime configurations must avoid the boundary: {c}")

    @property
    def size(self) -> int:
        return len(self.cubes)


def config(dim: int, interval_lists, strictness: str = PLAIN) -> CubeConfig:
    """Convenience constructor from nested interval data."""
    return CubeConfig(
        dim,
        tuple(LittleCube(tuple((_frac(a), _frac(b)) for a, b in cube)) for cube in interval_lists),
        strictness,
    )


def unit_config(dim: int) -> CubeConfig:
    return CubeConfig(dim, (LittleCube(tuple((ZERO, ONE) for _ in range(dim))),))


def empty_config(dim: int) -> CubeConfig:
    return CubeConfig(dim, ())


def cube_compose(outer: CubeConfig, inners) -> CubeConfig:
    """Operadic substitution: block i is outer cube i applied to inners[i]."""
    inners = list(inners)
    if len(inners) != outer.size:
        raise SizeMismatch(f"outer has {outer.size} cubes but {len(inners)} inner configurations")
    cubes = []
    all_prime = outer.strictness == PRIME
    for big, inner in zip(outer.cubes, inners):
        if inner.dim != outer.dim:
            raise DimensionMismatch(f"inner dim {inner.dim} does not match outer dim {outer.dim}")
        all_prime = all_prime and inner.strictness == PRIME
        cubes.extend(big.compose(c) for c in inner.cubes)
    return CubeConfig(outer.dim, tuple(cubes), PRIME if all_prime else PLAIN)


def cube_act(e: CubeConfig, sigma: Permutation) -> CubeConfig:
    if sigma.size != e.size:
        raise SizeMismatch(f"configuration of size {e.size} vs permutation of size {sigma.size}")
    return CubeConfig(e.dim, act_tuple(e.cubes, sigma), e.strictness)


def scale_config(e: CubeConfig, lam) -> CubeConfig:
    lam = _frac(lam)
    if not (ZERO < lam <= ONE):
        raise InvalidInput(f"scale factor must lie in (0, 1], got {lam}")
    return CubeConfig(e.dim, tuple(c.scaled(lam) for c in e.cubes), e.strictness)


def phi_embed(c: CubeConfig, side: str, pad: int) -> CubeConfig:
    """Pad a configuration with full axes: left appends, right prepends."""
    if pad < 0:
        raise InvalidInput("pad must be non-negative")
    if pad == 0:
        return c
    full = tuple((ZERO, ONE) for _ in range(pad))
    if side == LEFT:
        cubes = tuple(LittleCube(cube.intervals + full) for cube in c.cubes)
    elif side == RIGHT:
        cubes = tuple(LittleCube(full + cube.intervals) for cube in c.cubes)
    else:
        raise InvalidInput(f"side must be left or right, got {side!r}")
    return CubeConfig(c.dim + pad, cubes, PLAIN)


def common_subdivision(first, second) -> list:
    """All pairwise intersections with non-empty interior, row-major over pairs."""
    out = []
    for a in first:
        for b in second:
            if a.dim != b.dim:
                raise DimensionMismatch("subdivision needs cubes of one dimension")
            ints = []
            for (a1, b1), (a2, b2) in zip(a.intervals, b.intervals):
                lo, hi = max(a1, a2), min(b1, b2)
                if lo >= hi:
                    ints = None
                    break
                ints.append((lo, hi))
            if ints is not None:
                out.append(LittleCube(tuple(ints)))
    return out


# --- the cube colour for box words -------------------------------------------

def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _cube_name(config_: CubeConfig) -> str:
    cubes = "|".join(
        ",".join(f"{_frac_str(a)}:{_frac_str(b)}" for a, b in cube.intervals)
        for cube in config_.cubes
    )
    return "{" + cubes + "}"


class CubeColor:
    """One cube colour of a box alphabet: labels are configurations of `dim`."""

    def __init__(self, dim: int):
        if dim < 1:
            raise InvalidInput("cube colours need dimension >= 1")
        self.dim = dim

    @property
    def unit_label(self):
        return unit_config(self.dim)

    @property
    def nullary_point(self):
        return empty_config(self.dim)

    def validate(self, label, arity) -> None:
        if not isinstance(label, CubeConfig) or label.dim != self.dim:
            raise InvalidInput(f"expected a dim-{self.dim} configuration, got {label!r}")
        if label.size != arity:
            raise InvalidInput(f"configuration of {label.size} cubes used at arity {arity}")

    def compose(self, label, arity, parts, part_arities):
        inners = [unit_config(self.dim) if p is None else p for p in parts]
        return cube_compose(label, inners)

    def act(self, label, sigma):
        return cube_act(label, sigma)

    def canonical_choices(self, label, arity):
        if arity < 2:
            return None
        order = sorted(range(1, arity + 1), key=lambda i: label.cubes[i - 1].intervals)
        lam = Permutation(tuple(order))
        return [(lam, cube_act(label, lam))]

    def name_of(self, label) -> str:
        return _cube_name(label)

    def resolve(self, name: str):
        body = name.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise InvalidInput(f"bad cube configuration name {name!r}")
        inner = body[1:-1]
        cubes = []
        if inner:
            for cube_text in inner.split("|"):
                axes = cube_text.split(",")
                if len(axes) != self.dim:
                    raise InvalidInput(f"cube {cube_text!r} has {len(axes)} axes, expected {self.dim}")
                ints = []
                for axis in axes:
                    lo, hi = axis.split(":")
                    ints.append((Fraction(lo), Fraction(hi)))
                cubes.append(LittleCube(tuple(ints)))
        label = CubeConfig(self.dim, tuple(cubes))
        return label, label.size

    def describe(self):
        return ("cubes", self.dim)


def cube_alphabet(k: int, ell: int, identify_nullaries: bool = True) -> BoxAlphabet:
    return BoxAlphabet(CubeColor(k), CubeColor(ell), identify_nullaries)


def cube_gen(config_: CubeConfig, color: str) -> GeneratorSignature:
    return GeneratorSignature(config_, config_.size, color)


def phi_eval(word: BoxWord) -> CubeConfig:
    """Evaluate a cube-coloured word to a configuration of the joint dimension.

    Left labels are padded with trailing full axes, right labels with leading
    ones, all composites are exact, and the result is invariant under the
    interchange rewrite."""
    left, right = word.alphabet.left, word.alphabet.right
    if not isinstance(left, CubeColor) or not isinstance(right, CubeColor):
        raise InvalidInput("phi evaluation needs a cube-coloured alphabet")
    k, ell = left.dim, right.dim
    total = k + ell

    def fold(node) -> CubeConfig:
        if isinstance(node, Leaf):
            return unit_config(total)
        label = node.gen.name
        if node.gen.color == LEFT:
            embedded = phi_embed(label, LEFT, ell)
        else:
            embedded = phi_embed(label, RIGHT, k)
        if not node.children:
            return embedded
        return cube_compose(embedded, [fold(c) for c in node.children])

    folded = fold(word.tree.root)
    if word.perm.is_identity():
        return folded
    return cube_act(folded, word.perm)


# --- smallness ----------------------------------------------------------------

@dataclass(frozen=True)
class GridWitness:
    """A pair of lower-dimensional configurations plus an injective cell
    assignment, assigning cube i to the cell (row, column) of assignment[i-1]."""

    f: CubeConfig
    g: CubeConfig
    assignment: tuple  # tuple of (cube_index, row, column), 1-indexed

    def cell_of(self, i: int):
        for idx, h, j in self.assignment:
            if idx == i:
                return (h, j)
        raise InvalidWitness(f"no cell assigned to cube {i}")


def _cell_cube(f_cube: LittleCube, g_cube: LittleCube) -> LittleCube:
    return LittleCube(f_cube.intervals + g_cube.intervals)


def is_small(e: CubeConfig, witness: GridWitness) -> bool:
    """Every cube strictly inside its assigned open cell, no other cell, and
    at most one cube per cell."""
    k, ell = witness.f.dim, witness.g.dim
    if e.dim != k + ell:
        raise DimensionMismatch(f"configuration dim {e.dim} vs witness dims {k}+{ell}")
    n = e.size
    indices = sorted(idx for idx, _, _ in witness.assignment)
    if indices != list(range(1, n + 1)):
        raise InvalidWitness(f"assignment indices {indices} do not cover 1..{n}")
    cells = [(h, j) for _, h, j in witness.assignment]
    for h, j in cells:
        if not (1 <= h <= witness.f.size and 1 <= j <= witness.g.size):
            raise InvalidWitness(f"cell ({h}, {j}) is outside the witness grid")
    if len(set(cells)) != len(cells):
        return False
    for idx, h, j in witness.assignment:
        cube = e.cubes[idx - 1]
        for h2 in range(1, witness.f.size + 1):
            for j2 in range(1, witness.g.size + 1):
                cell = _cell_cube(witness.f.cubes[h2 - 1], witness.g.cubes[j2 - 1])
                inside = cube.strictly_inside(cell)
                if (h2, j2) == (h, j) and not inside:
                    return False
                if (h2, j2) != (h, j) and inside:
                    return False
    return True


def _axis_cuts(intervals) -> list:
    """Interior grid cuts from corner coordinates and gap midpoints, keeping
    only cuts outside every closed cube interval."""
    coords = sorted({x for lo, hi in intervals for x in (lo, hi)})
    candidates = set(coords)
    for a, b in zip(coords, coords[1:]):
        candidates.add((a + b) / 2)
    admissible = [
        c
        for c in candidates
        if ZERO < c < ONE and all(c < lo or c > hi for lo, hi in intervals)
    ]
    return [ZERO] + sorted(admissible) + [ONE]


def _locate(cuts, lo, hi) -> Optional[int]:
    """Index of the grid cell (u, v) with u < lo and hi < v, if any."""
    for idx in range(len(cuts) - 1):
        u, v = cuts[idx], cuts[idx + 1]
        if u <= lo and hi <= v:
            return idx if (u < lo and hi < v) else None
    return None


def find_witness(e: CubeConfig, split: int) -> Optional[GridWitness]:
    """Search the finest admissible corner/midpoint grid for a smallness witness.

    Returns None when no witness exists in the candidate grid family; any
    returned witness is re-verified.
    """
    if not (1 <= split < e.dim):
        raise InvalidInput(f"split must satisfy 1 <= split < {e.dim}")
    k, ell = split, e.dim - split
    axes_cuts = []
    for axis in range(e.dim):
        intervals = [c.intervals[axis] for c in e.cubes]
        axes_cuts.append(_axis_cuts(intervals))

    cell_ids_f, cell_ids_g = [], []
    for cube in e.cubes:
        fid, gid = [], []
        for axis in range(k):
            lo, hi = cube.intervals[axis]
            idx = _locate(axes_cuts[axis], lo, hi)
            if idx is None:
                return None
            fid.append(idx)
        for axis in range(k, e.dim):
            lo, hi = cube.intervals[axis]
            idx = _locate(axes_cuts[axis], lo, hi)
            if idx is None:
                return None
            gid.append(idx)
        cell_ids_f.append(tuple(fid))
        cell_ids_g.append(tuple(gid))

    f_cells = sorted(set(cell_ids_f))
    g_cells = sorted(set(cell_ids_g))
    seen = set()
    assignment = []
    for i, (fid, gid) in enumerate(zip(cell_ids_f, cell_ids_g), start=1):
        cell = (f_cells.index(fid) + 1, g_cells.index(gid) + 1)
        if cell in seen:
            return None
        seen.add(cell)
        assignment.append((i, cell[0], cell[1]))

    def cell_cube(axis_offset, cell_idx):
        ints = []
        for axis, idx in enumerate(cell_idx):
            cuts = axes_cuts[axis_offset + axis]
            ints.append((cuts[idx], cuts[idx + 1]))
        return LittleCube(tuple(ints))

    f = CubeConfig(k, tuple(cell_cube(0, fid) for fid in f_cells))
    g = CubeConfig(ell, tuple(cell_cube(k, gid) for gid in g_cells))
    witness = GridWitness(f, g, tuple(assignment))
    if not is_small(e, witness):
        return None
    return witness


def shrink_to_small(e: CubeConfig, split: int, max_depth: int = 12):
    """Halve the scale about cube centres until a grid witness appears.

    Requires pairwise distinct centre points (automatic for disjoint
    interiors); raises SearchExhausted past `max_depth` halvings.
    """
    centers = [tuple((a + b) / 2 for a, b in c.intervals) for c in e.cubes]
    if len(set(centers)) != len(centers):
        raise InvalidInput("cube centres must be pairwise distinct")
    lam = ONE
    for depth in range(max_depth + 1):
        scaled = scale_config(e, lam)
        witness = find_witness(scaled, split)
        if witness is not None:
            return lam, witness
        lam = lam / 2
    raise SearchExhausted(
        f"no witness after {max_depth} halvings of the configuration"
    )


def _solve_adjuster(cell_interval, target_interval):
    (u, v) = cell_interval
    (lo, hi) = target_interval
    width = v - u
    return ((lo - u) / width, (hi - u) / width)


def psi_decompose(e: CubeConfig, witness: GridWitness) -> BoxWord:
    """Factor a small configuration through its witness grid.

    The word composes the row configuration with one copy of the column
    configuration per row; occupied cells carry the unique unary adjusters
    solving the cell-to-cube affine equations, empty cells carry the nullary
    point, and the trailing permutation restores the cube ordering.
    """
    if not is_small(e, witness):
        raise InvalidWitness("psi needs a verified smallness witness")
    k, ell = witness.f.dim, witness.g.dim
    alphabet = cube_alphabet(k, ell)
    occupied = {(h, j): idx for idx, h, j in witness.assignment}

    rows = []
    for h in range(1, witness.f.size + 1):
        cells = []
        for j in range(1, witness.g.size + 1):
            idx = occupied.get((h, j))
            if idx is None:
                cells.append(Internal(cube_gen(empty_config(k), LEFT), ()))
                continue
            cube = e.cubes[idx - 1]
            f_cube = witness.f.cubes[h - 1]
            g_cube = witness.g.cubes[j - 1]
            a = LittleCube(
                tuple(
                    _solve_adjuster(f_cube.intervals[axis], cube.intervals[axis])
                    for axis in range(k)
                )
            )
            b = LittleCube(
                tuple(
                    _solve_adjuster(g_cube.intervals[axis], cube.intervals[k + axis])
                    for axis in range(ell)
                )
            )
            adj = Internal(
                cube_gen(CubeConfig(k, (a,)), LEFT),
                (Internal(cube_gen(CubeConfig(ell, (b,)), RIGHT), (Leaf(idx),)),),
            )
            cells.append(adj)
        rows.append(Internal(cube_gen(witness.g, RIGHT), tuple(cells)))
    root = Internal(cube_gen(witness.f, LEFT), tuple(rows))
    return BoxWord.from_labeled(root, alphabet)


# --- rendering ------------------------------------------------------------------

SVG_SIZE = 512


def _svg_coord(x: Fraction) -> str:
    return f"{float(x * SVG_SIZE):.3f}"


def render_svg(e: CubeConfig, path: Optional[str] = None) -> str:
    """Deterministic vector drawing of a 1- or 2-dimensional configuration."""
    if e.dim not in (1, 2):
        raise InvalidInput(f"rendering supports dimensions 1 and 2, got {e.dim}")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white" stroke="black" stroke-width="2"/>',
    ]
    for i, cube in enumerate(e.cubes, start=1):
        if e.dim == 1:
            (a, b) = cube.intervals[0]
            y = SVG_SIZE // 2
            lines.append(
                f'<rect x="{_svg_coord(a)}" y="{y - 16}" width="{_svg_coord(b - a)}" height="32" '
                f'fill="none" stroke="black" stroke-width="1.5"/>'
            )
            cx = (a + b) / 2
            lines.append(
                f'<text x="{_svg_coord(cx)}" y="{y + 5}" font-size="14" text-anchor="middle">{i}</text>'
            )
        else:
            (a, b), (c, d) = cube.intervals
            x = _svg_coord(a)
            y = f"{float((ONE - d) * SVG_SIZE):.3f}"
            lines.append(
                f'<rect x="{x}" y="{y}" width="{_svg_coord(b - a)}" height="{_svg_coord(d - c)}" '
                f'fill="none" stroke="black" stroke-width="1.5"/>'
            )
            cx, cy = (a + b) / 2, (c + d) / 2
            lines.append(
                f'<text x="{_svg_coord(cx)}" y="{float((ONE - cy) * SVG_SIZE) + 5:.3f}" '
                f'font-size="14" text-anchor="middle">{i}</text>'
            )
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
