"""The shared structured-text schema: one JSON document format per object
kind, discriminated by a `kind` field, with exact rationals as "num/den"."""

from __future__ import annotations

import json
from fractions import Fraction

from .boxword import BoxAlphabet, BoxWord, FreeColor, TableColor, parse_word
from .cubes import CubeColor, CubeConfig, GridWitness, LittleCube, config as cube_config_from
from .errors import InvalidInput
from .perm import Permutation
from .setoperad import SetOperad, assoc_operad, comm_operad, free_pointed_operad
from .sset import FiniteCategory, FiniteMonoid, FiniteSimplicialSet, LeftAction, RightAction
from .trees import GeneratorSignature, LEFT, RIGHT

KINDS = ("cube-config", "box-word", "sset", "category", "operad-table", "monoid-module", "grid-witness")


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text) -> Fraction:
    if isinstance(text, str):
        return Fraction(text)
    if isinstance(text, int):
        return Fraction(text)
    raise InvalidInput(f"expected a rational string, got {text!r}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidInput(f"{path}: documents need a top-level 'kind' field")
    if data["kind"] not in KINDS:
        raise InvalidInput(f"{path}: unknown kind {data['kind']!r}")
    return data


# --- cube configurations -----------------------------------------------------------

def cube_config_to_obj(e: CubeConfig) -> dict:
    return {
        "kind": "cube-config",
        "k": e.dim,
        "strict": e.strictness == "prime",
        "cubes": [
            [[frac_str(a), frac_str(b)] for a, b in cube.intervals] for cube in e.cubes
        ],
    }


def obj_to_cube_config(data: dict) -> CubeConfig:
    if data.get("kind") != "cube-config":
        raise InvalidInput("expected a cube-config document")
    dim = int(data["k"])
    cubes = [
        [(parse_frac(a), parse_frac(b)) for a, b in cube] for cube in data["cubes"]
    ]
    return cube_config_from(dim, cubes, "prime" if data.get("strict") else "plain")


def witness_to_obj(w: GridWitness) -> dict:
    return {
        "kind": "grid-witness",
        "f": cube_config_to_obj(w.f),
        "g": cube_config_to_obj(w.g),
        "assignment": [[i, h, j] for i, h, j in w.assignment],
    }


def obj_to_witness(data: dict) -> GridWitness:
    if data.get("kind") != "grid-witness":
        raise InvalidInput("expected a grid-witness document")
    return GridWitness(
        obj_to_cube_config(data["f"]),
        obj_to_cube_config(data["g"]),
        tuple((int(i), int(h), int(j)) for i, h, j in data["assignment"]),
    )


# --- operad tables -------------------------------------------------------------------

def builtin_operad(name: str, cap: int, size_cap: int = 3) -> SetOperad:
    if name == "comm":
        return comm_operad(cap)
    if name == "assoc":
        return assoc_operad(cap)
    if name == "free-binary":
        return free_pointed_operad({"mu": 2}, cap, size_cap)
    raise InvalidInput(f"unknown builtin operad {name!r}; use comm, assoc, or free-binary")


def obj_to_operad(data: dict) -> SetOperad:
    if data.get("kind") != "operad-table":
        raise InvalidInput("expected an operad-table document")
    if "builtin" in data:
        return builtin_operad(data["builtin"], int(data["cap"]), int(data.get("size_cap", 3)))
    carriers = {int(n): tuple(elems) for n, elems in data["carriers"].items()}
    comp = {}
    for outer, inners, result in data["composition"]:
        comp[(outer, tuple(inners))] = result
    action = {}
    for element, images, result in data["action"]:
        action[(element, tuple(int(i) for i in images))] = result

    def compose_fn(outer, inner_list):
        key = (outer, tuple(inner_list))
        if key not in comp:
            raise InvalidInput(f"composition not tabulated for {key!r}")
        return comp[key]

    def act_fn(element, sigma: Permutation):
        key = (element, sigma.images)
        if key not in action:
            if sigma.is_identity():
                return element
            raise InvalidInput(f"action not tabulated for {key!r}")
        return action[key]

    return SetOperad(
        name=data.get("name", "table"),
        arity_cap=int(data["cap"]),
        carriers=carriers,
        unit=data["unit"],
        compose_fn=compose_fn,
        act_fn=act_fn,
    )


# --- box words -----------------------------------------------------------------------

def words_to_obj(words, colors_obj: dict) -> dict:
    return {
        "kind": "box-word",
        "colors": colors_obj,
        "words": [w.to_text() for w in words],
    }


def cube_word_to_obj(word: BoxWord) -> dict:
    left, right = word.alphabet.left, word.alphabet.right
    return {
        "kind": "box-word",
        "colors": {
            "left": {"type": "cubes", "dim": left.dim},
            "right": {"type": "cubes", "dim": right.dim},
            "identify_nullaries": word.alphabet.identify_nullaries,
        },
        "words": [word.to_text()],
    }


def obj_to_words(data: dict):
    if data.get("kind") != "box-word":
        raise InvalidInput("expected a box-word document")
    colors = dict(data["colors"])
    identify = bool(colors.pop("identify_nullaries", False))
    alphabet = BoxAlphabet(
        _color_from(colors["left"], LEFT),
        _color_from(colors["right"], RIGHT),
        identify,
    )
    return [parse_word(text, alphabet) for text in data["words"]], alphabet


def _color_from(spec, color):
    if spec["type"] == "free":
        return FreeColor(
            [GeneratorSignature(name, int(arity), color) for name, arity in spec["generators"]]
        )
    if spec["type"] == "operad":
        return TableColor(builtin_operad(spec["name"], int(spec["cap"])))
    if spec["type"] == "cubes":
        return CubeColor(int(spec["dim"]))
    raise InvalidInput(f"unknown colour spec {spec!r}")


# --- simplicial sets ------------------------------------------------------------------

def sset_to_obj(s: FiniteSimplicialSet) -> dict:
    names = {}
    for n in range(s.dim_cap + 1):
        reprs = [x if isinstance(x, str) else repr(x) for x in s.level(n)]
        unique = len(set(reprs)) == len(reprs)
        for idx, x in enumerate(s.level(n)):
            names[(n, x)] = reprs[idx] if unique else f"{n}.{idx}"
    levels = [[names[(n, x)] for x in s.level(n)] for n in range(s.dim_cap + 1)]
    faces = [
        [
            {names[(n, x)]: names[(n - 1, s.face(n, i, x))] for x in s.level(n)}
            for i in range(n + 1)
        ]
        for n in range(1, s.dim_cap + 1)
    ]
    degens = [
        [
            {names[(n, x)]: names[(n + 1, s.degeneracy(n, i, x))] for x in s.level(n)}
            for i in range(n + 1)
        ]
        for n in range(0, s.dim_cap)
    ]
    return {
        "kind": "sset",
        "dim_cap": s.dim_cap,
        "levels": levels,
        "faces": faces,
        "degeneracies": degens,
        "provenance": s.provenance,
    }


def obj_to_sset(data: dict) -> FiniteSimplicialSet:
    if data.get("kind") != "sset":
        raise InvalidInput("expected an sset document")
    dim_cap = int(data["dim_cap"])
    levels = tuple(tuple(level) for level in data["levels"])
    faces = {}
    for n in range(1, dim_cap + 1):
        for i in range(n + 1):
            faces[(n, i)] = dict(data["faces"][n - 1][i])
    degens = {}
    for n in range(0, dim_cap):
        for i in range(n + 1):
            degens[(n, i)] = dict(data["degeneracies"][n][i])
    return FiniteSimplicialSet(
        dim_cap, levels, faces, degens, provenance=data.get("provenance", "")
    )


# --- categories -----------------------------------------------------------------------

def obj_to_category(data: dict) -> FiniteCategory:
    if data.get("kind") != "category":
        raise InvalidInput("expected a category document")
    objects = tuple(data["objects"])
    morphisms = tuple(m["name"] for m in data["morphisms"])
    src = {m["name"]: m["src"] for m in data["morphisms"]}
    tgt = {m["name"]: m["tgt"] for m in data["morphisms"]}
    ident = dict(data["identities"])
    comp = {}
    for g, f, gf in data["composition"]:
        comp[(g, f)] = gf
    # identity composites may be omitted in documents
    for f in morphisms:
        comp.setdefault((ident[tgt[f]], f), f)
        comp.setdefault((f, ident[src[f]]), f)
    return FiniteCategory(objects, morphisms, src, tgt, ident, comp)


def category_to_obj(c: FiniteCategory) -> dict:
    return {
        "kind": "category",
        "objects": list(map(str, c.objects)),
        "morphisms": [
            {"name": str(m), "src": str(c.src[m]), "tgt": str(c.tgt[m])} for m in c.morphisms
        ],
        "identities": {str(o): str(c.ident[o]) for o in c.objects},
        "composition": sorted(
            [list(map(str, (g, f, gf))) for (g, f), gf in c.comp.items()]
        ),
    }


# --- monoids and modules ----------------------------------------------------------------

def obj_to_monoid(data: dict) -> FiniteMonoid:
    spec = data["monoid"]
    table = {}
    for a, b, ab in spec["table"]:
        table[(a, b)] = ab
    return FiniteMonoid(tuple(spec["elements"]), spec["unit"], table)


def obj_to_left_module(data: dict, name: str, monoid: FiniteMonoid) -> LeftAction:
    spec = data.get("left", {}).get(name)
    if spec is None:
        raise InvalidInput(f"no left module named {name!r} in the document")
    table = {}
    for r, m, rm in spec["action"]:
        table[(r, m)] = rm
    return LeftAction(monoid, tuple(spec["carrier"]), table)


def obj_to_right_module(data: dict, name: str, monoid: FiniteMonoid) -> RightAction:
    spec = data.get("right", {}).get(name)
    if spec is None:
        raise InvalidInput(f"no right module named {name!r} in the document")
    table = {}
    for x, r, xr in spec["action"]:
        table[(x, r)] = xr
    return RightAction(monoid, tuple(spec["carrier"]), table)
