"""Command-line front door: parse schema documents, dispatch to the library,
and emit deterministic reports.

Exit statuses: 0 success, 2 parse errors, 3 domain errors, 4 inconclusive
outcomes (budget or truncation)."""

from __future__ import annotations

import argparse
import json
import sys

from . import boxword, cubes, fibered, setoperad, sset
from .errors import InvalidInput, OperadError, SearchExhausted
from .io import (
    builtin_operad,
    cube_config_to_obj,
    cube_word_to_obj,
    dumps,
    load_document,
    obj_to_category,
    obj_to_cube_config,
    obj_to_left_module,
    obj_to_monoid,
    obj_to_operad,
    obj_to_right_module,
    obj_to_sset,
    obj_to_witness,
    obj_to_words,
    sset_to_obj,
    witness_to_obj,
)
from .perm import Permutation

PARSE_ERROR = 2
DOMAIN_ERROR = 3
INCONCLUSIVE = 4


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_operad(spec: str, cap: int, size_cap: int):
    if spec in ("comm", "assoc", "free-binary"):
        return builtin_operad(spec, cap, size_cap)
    return obj_to_operad(load_document(spec))


# --- op ------------------------------------------------------------------------

def cmd_op_axioms(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    report = setoperad.check_operad_axioms(operad, budget=args.budget)
    _emit(report.to_text())
    return 0 if report.passed else DOMAIN_ERROR


def cmd_op_wreath(args) -> int:
    lam = Permutation.parse(args.lam)
    kappas = [Permutation.parse(part) for part in args.kappas.split(";")]
    ks = [int(part) for part in args.ks.split(",")] if args.ks else [k.size for k in kappas]
    from .perm import block_wreath

    _emit(block_wreath(lam, kappas, ks).format())
    return 0


# --- box -----------------------------------------------------------------------

def cmd_box_sigma(args) -> int:
    _emit(boxword.interchange_perm(args.m, args.n).format())
    return 0


def cmd_box_rewrite(args) -> int:
    words, _ = obj_to_words(load_document(args.infile))
    word = words[args.word]
    path = tuple(int(p) for p in args.path.split(",")) if args.path else ()
    rewritten = boxword.apply_interchange(word, path)
    _emit(rewritten.to_text())
    return 0


def cmd_box_collapse(args) -> int:
    words, _ = obj_to_words(load_document(args.infile))
    _emit(boxword.collapse_internal(words[args.word]).to_text())
    return 0


def cmd_box_equiv(args) -> int:
    words, _ = obj_to_words(load_document(args.infile))
    if len(words) < 2:
        raise InvalidInput("equivalence needs a document with two words")
    verdict = boxword.equivalent(words[0], words[1], budget=args.budget)
    if isinstance(verdict, boxword.Equal):
        _emit(
            dumps(
                {
                    "verdict": "equal",
                    "trace_left": [list(map(str, step)) for step in verdict.trace_left],
                    "trace_right": [list(map(str, step)) for step in verdict.trace_right],
                }
            )
        )
        return 0
    if isinstance(verdict, boxword.Distinct):
        _emit(
            dumps(
                {
                    "verdict": "distinct",
                    "closure_sizes": [len(verdict.closure_left), len(verdict.closure_right)],
                }
            )
        )
        return 0
    _emit(dumps({"verdict": "unknown", "explored": verdict.explored}))
    return INCONCLUSIVE


# --- cubes -----------------------------------------------------------------------

def cmd_cubes_compose(args) -> int:
    outer = obj_to_cube_config(load_document(args.outer))
    inners = [obj_to_cube_config(load_document(p)) for p in args.inners]
    _emit(dumps(cube_config_to_obj(cubes.cube_compose(outer, inners))))
    return 0


def cmd_cubes_small(args) -> int:
    e = obj_to_cube_config(load_document(args.infile))
    witness = obj_to_witness(load_document(args.witness))
    _emit("true" if cubes.is_small(e, witness) else "false")
    return 0


def cmd_cubes_findw(args) -> int:
    e = obj_to_cube_config(load_document(args.infile))
    witness = cubes.find_witness(e, args.split)
    if witness is None:
        _emit("not-found")
        return 0
    _emit(dumps(witness_to_obj(witness)))
    return 0


def cmd_cubes_psi(args) -> int:
    e = obj_to_cube_config(load_document(args.infile))
    if args.witness:
        witness = obj_to_witness(load_document(args.witness))
    else:
        witness = cubes.find_witness(e, args.split)
        if witness is None:
            _emit("not-found")
            return INCONCLUSIVE
    word = cubes.psi_decompose(e, witness)
    _emit(dumps(cube_word_to_obj(word)))
    return 0


def cmd_cubes_phi(args) -> int:
    words, _ = obj_to_words(load_document(args.infile))
    _emit(dumps(cube_config_to_obj(cubes.phi_eval(words[args.word]))))
    return 0


def cmd_cubes_shrink(args) -> int:
    e = obj_to_cube_config(load_document(args.infile))
    try:
        lam, witness = cubes.shrink_to_small(e, args.split, max_depth=args.max_depth)
    except SearchExhausted as exc:
        _emit(f"search-exhausted: {exc}")
        return INCONCLUSIVE
    from .io import frac_str

    _emit(dumps({"lambda": frac_str(lam), "witness": witness_to_obj(witness)}))
    return 0


def cmd_cubes_subdivide(args) -> int:
    first = obj_to_cube_config(load_document(args.a))
    second = obj_to_cube_config(load_document(args.b))
    pieces = cubes.common_subdivision(list(first.cubes), list(second.cubes))
    out = cubes.CubeConfig(first.dim, tuple(pieces))
    _emit(dumps(cube_config_to_obj(out)))
    return 0


def cmd_cubes_render(args) -> int:
    e = obj_to_cube_config(load_document(args.infile))
    cubes.render_svg(e, args.out)
    _emit(f"wrote {args.out}")
    return 0


# --- sset -----------------------------------------------------------------------

def cmd_sset_nerve(args) -> int:
    category = obj_to_category(load_document(args.infile))
    _emit(dumps(sset_to_obj(sset.nerve(category, args.cap))))
    return 0


def cmd_sset_bar(args) -> int:
    data = load_document(args.infile)
    monoid = obj_to_monoid(data)
    right = obj_to_right_module(data, args.right, monoid)
    left = obj_to_left_module(data, args.left, monoid)
    _emit(dumps(sset_to_obj(sset.two_sided_bar(right, monoid, left, args.cap))))
    return 0


def cmd_sset_subdivide(args) -> int:
    s = obj_to_sset(load_document(args.infile))
    _emit(dumps(sset_to_obj(sset.subdivide(s))))
    return 0


def cmd_sset_pi0(args) -> int:
    s = obj_to_sset(load_document(args.infile))
    _emit(str(len(sset.pi0(s))))
    return 0


def cmd_sset_euler(args) -> int:
    s = obj_to_sset(load_document(args.infile))
    _emit(str(sset.euler_char(s)))
    return 0


def cmd_sset_check(args) -> int:
    s = obj_to_sset(load_document(args.infile))
    report = sset.check_simplicial_identities(s)
    _emit(report.to_text())
    return 0 if report.passed else DOMAIN_ERROR


# --- fib -------------------------------------------------------------------------

def _xset(arg: str) -> tuple:
    return tuple(part for part in arg.split(",") if part) if arg else ()


def cmd_fib_free(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    algebra = fibered.free_algebra(operad, _xset(args.x), args.n)
    _emit(dumps({"levels": [len(level) for level in algebra.levels]}))
    return 0


def cmd_fib_dfun(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    shifted = fibered.d_functor(operad, args.shift, _xset(args.x), args.n)
    _emit(dumps({"levels": [len(level) for level in shifted.levels]}))
    return 0


def cmd_fib_afib(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    data = fibered.build_fibered_A(operad, _xset(args.x), args.n, args.deco)
    summary = {
        "levels": {str(n): len(data.classes(n)) for n in range(args.n + 1)},
        "fibers": {
            str(n): {repr(x): len(v) for x, v in sorted(data.fibers[n].items(), key=lambda kv: repr(kv[0]))}
            for n in range(args.n + 1)
        },
    }
    _emit(dumps(summary))
    return 0


def cmd_fib_lemma_pred(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    report = fibered.lemma_pred_check(operad, _xset(args.x), _xset(args.m), args.n)
    _emit(report.to_text())
    return 0 if report.passed else DOMAIN_ERROR


def cmd_fib_hom(args) -> int:
    data = load_document(args.infile)
    monoid = obj_to_monoid(data)
    module_m = obj_to_left_module(data, args.m, monoid)
    module_n = obj_to_left_module(data, args.n, monoid)
    maps = fibered.hom_equalizer(monoid, module_m, module_n)
    _emit(dumps({"count": len(maps), "maps": [sorted(f.items()) for f in maps]}))
    return 0


def cmd_fib_special(args) -> int:
    operad = _load_operad(args.operad, args.cap, args.size_cap)
    data = fibered.build_fibered_A(operad, _xset(args.x), args.n, args.deco)
    report = fibered.specialness_diagnostic(data, args.ell, args.dim)
    _emit(report.to_text())
    if any(c.verdict == "truncation-inconclusive" for c in report.components):
        return INCONCLUSIVE
    return 0


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="operadkit",
        description="exact workbench for operads, box products, little cubes, and simplicial sets",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    op = sub.add_parser("op", help="operad tables and axioms").add_subparsers(dest="cmd", required=True)
    p = op.add_parser("axioms")
    p.add_argument("--operad", required=True, help="comm, assoc, free-binary, or a schema file")
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--size-cap", type=int, default=3)
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=cmd_op_axioms)
    p = op.add_parser("wreath")
    p.add_argument("--lam", required=True, help="outer permutation, e.g. [2,1]")
    p.add_argument("--kappas", required=True, help="semicolon-separated inner permutations")
    p.add_argument("--ks", default="", help="comma-separated block sizes (defaults to kappa sizes)")
    p.set_defaults(func=cmd_op_wreath)

    box = sub.add_parser("box", help="box-product words").add_subparsers(dest="cmd", required=True)
    p = box.add_parser("sigma")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_box_sigma)
    p = box.add_parser("rewrite")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--path", default="", help="comma-separated child indices")
    p.add_argument("--word", type=int, default=0)
    p.set_defaults(func=cmd_box_rewrite)
    p = box.add_parser("collapse")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--word", type=int, default=0)
    p.set_defaults(func=cmd_box_collapse)
    p = box.add_parser("equiv")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(func=cmd_box_equiv)

    cu = sub.add_parser("cubes", help="little-cube configurations").add_subparsers(dest="cmd", required=True)
    p = cu.add_parser("compose")
    p.add_argument("--outer", required=True)
    p.add_argument("--inners", nargs="+", required=True)
    p.set_defaults(func=cmd_cubes_compose)
    p = cu.add_parser("small")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_cubes_small)
    p = cu.add_parser("findw")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--split", type=int, required=True)
    p.set_defaults(func=cmd_cubes_findw)
    p = cu.add_parser("psi")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--split", type=int, default=1)
    p.add_argument("--witness", default="")
    p.set_defaults(func=cmd_cubes_psi)
    p = cu.add_parser("phi")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--word", type=int, default=0)
    p.set_defaults(func=cmd_cubes_phi)
    p = cu.add_parser("shrink")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--split", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=12)
    p.set_defaults(func=cmd_cubes_shrink)
    p = cu.add_parser("subdivide")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_cubes_subdivide)
    p = cu.add_parser("render")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cubes_render)

    ss = sub.add_parser("sset", help="finite simplicial sets").add_subparsers(dest="cmd", required=True)
    p = ss.add_parser("nerve")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--cap", type=int, required=True)
    p.set_defaults(func=cmd_sset_nerve)
    p = ss.add_parser("bar")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--right", required=True, help="name of the right module")
    p.add_argument("--left", required=True, help="name of the left module")
    p.add_argument("--cap", type=int, required=True)
    p.set_defaults(func=cmd_sset_bar)
    p = ss.add_parser("subdivide")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_sset_subdivide)
    p = ss.add_parser("pi0")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_sset_pi0)
    p = ss.add_parser("euler")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_sset_euler)
    p = ss.add_parser("check")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_sset_check)

    fib = sub.add_parser("fib", help="fibered constructions").add_subparsers(dest="cmd", required=True)
    for name, extra in (
        ("free", ()),
        ("dfun", ("shift",)),
        ("afib", ("deco",)),
        ("lemma-pred", ("m",)),
        ("special", ("deco", "ell", "dim")),
    ):
        p = fib.add_parser(name)
        p.add_argument("--operad", required=True)
        p.add_argument("--cap", type=int, default=4)
        p.add_argument("--size-cap", type=int, default=3)
        p.add_argument("--x", default="", help="comma-separated generators")
        p.add_argument("--n", type=int, required=True, help="truncation cap")
        if "shift" in extra:
            p.add_argument("--shift", type=int, required=True)
        if "deco" in extra:
            p.add_argument("--deco", type=int, default=None)
        if "m" in extra:
            p.add_argument("--m", default="", help="comma-separated module elements")
        if "ell" in extra:
            p.add_argument("--ell", type=int, required=True)
        if "dim" in extra:
            p.add_argument("--dim", type=int, default=3)
        p.set_defaults(
            func={
                "free": cmd_fib_free,
                "dfun": cmd_fib_dfun,
                "afib": cmd_fib_afib,
                "lemma-pred": cmd_fib_lemma_pred,
                "special": cmd_fib_special,
            }[name]
        )
    p = fib.add_parser("hom")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", required=True, help="name of the source left module")
    p.add_argument("--n", required=True, help="name of the target left module")
    p.set_defaults(func=cmd_fib_hom)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (InvalidInput,) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return PARSE_ERROR
    except OperadError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return DOMAIN_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return PARSE_ERROR
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON: {exc}\n")
        return PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
