import pytest

from operadkit.errors import CapExceeded, InvalidInput, SizeMismatch
from operadkit.sset import (
    BisimplicialSet,
    FiniteCategory,
    FiniteMonoid,
    FiniteSimplicialSet,
    LeftAction,
    RightAction,
    box_product,
    category_subdivision,
    check_simplicial_identities,
    diag,
    disjoint_union,
    euler_char,
    last_vertex_map,
    nerve,
    pi0,
    poset_category,
    standard_simplex,
    subdivide,
    trivial_monoid,
    two_sided_bar,
)


def one_object_category():
    return FiniteCategory(
        objects=("x",),
        morphisms=("id_x",),
        src={"id_x": "x"},
        tgt={"id_x": "x"},
        ident={"x": "id_x"},
        comp={("id_x", "id_x"): "id_x"},
    )


def arrow_category():
    objects = ("a", "b")
    morphisms = ("id_a", "id_b", "f")
    src = {"id_a": "a", "id_b": "b", "f": "a"}
    tgt = {"id_a": "a", "id_b": "b", "f": "b"}
    ident = {"a": "id_a", "b": "id_b"}
    comp = {
        ("id_a", "id_a"): "id_a",
        ("id_b", "id_b"): "id_b",
        ("f", "id_a"): "f",
        ("id_b", "f"): "f",
    }
    return FiniteCategory(objects, morphisms, src, tgt, ident, comp)


def iso_pair_category():
    objects = ("a", "b")
    morphisms = ("id_a", "id_b", "f", "g")  # g = f^{-1}
    src = {"id_a": "a", "id_b": "b", "f": "a", "g": "b"}
    tgt = {"id_a": "a", "id_b": "b", "f": "b", "g": "a"}
    ident = {"a": "id_a", "b": "id_b"}
    comp = {}
    for m in morphisms:
        comp[(m, ident[src[m]])] = m
        comp[(ident[tgt[m]], m)] = m
    comp[("g", "f")] = "id_a"
    comp[("f", "g")] = "id_b"
    return FiniteCategory(objects, morphisms, src, tgt, ident, comp)


def two_element_idempotent_monoid():
    return FiniteMonoid(
        ("1", "s"),
        "1",
        {("1", "1"): "1", ("1", "s"): "s", ("s", "1"): "s", ("s", "s"): "s"},
    )


def point_action_right(m):
    return RightAction(m, ("*",), {("*", e): "*" for e in m.elements})


def point_action_left(m):
    return LeftAction(m, ("*",), {(e, "*"): "*" for e in m.elements})


# --- nerve -----------------------------------------------------------------------

def test_nerve_point():
    n = nerve(one_object_category(), 3)
    assert [len(n.level(k)) for k in range(4)] == [1, 1, 1, 1]
    assert check_simplicial_identities(n).passed


def test_nerve_arrow_is_delta1():
    n = nerve(arrow_category(), 3)
    delta1 = standard_simplex(1, 3)
    assert [len(n.level(k)) for k in range(4)] == [len(delta1.level(k)) for k in range(4)]
    assert len(n.nondegenerate(1)) == 1
    assert n.nondegenerate(2) == ()
    assert n.nondegenerate(3) == ()


def test_nerve_iso_pair_level_counts():
    n = nerve(iso_pair_category(), 3)
    assert [len(n.level(k)) for k in range(4)] == [2, 4, 8, 16]
    # one alternating nondegenerate chain from each object in every dimension
    assert all(len(n.nondegenerate(k)) == 2 for k in (1, 2, 3))


def test_nerve_passes_identities_and_pi0():
    n = nerve(iso_pair_category(), 3)
    assert check_simplicial_identities(n).passed
    assert len(pi0(n)) == 1


# --- two-sided bar ----------------------------------------------------------------

def test_bar_trivial_monoid_is_product():
    m = trivial_monoid()
    x = RightAction(m, ("x1", "x2"), {(v, "1"): v for v in ("x1", "x2")})
    y = LeftAction(m, ("y1", "y2", "y3"), {("1", v): v for v in ("y1", "y2", "y3")})
    b = two_sided_bar(x, m, y, 2)
    assert all(len(b.level(k)) == 6 for k in range(3))
    assert len(pi0(b)) == 6


def test_bar_idempotent_monoid_sizes():
    m = two_element_idempotent_monoid()
    b = two_sided_bar(point_action_right(m), m, point_action_left(m), 3)
    assert [len(b.level(k)) for k in range(4)] == [1, 2, 4, 8]
    assert check_simplicial_identities(b).passed


def test_bar_of_monoid_on_itself_components():
    # pi0(B(M, M, M)) is the coequalizer M (x) _M M, which is M itself
    m = two_element_idempotent_monoid()
    x = RightAction(m, m.elements, {(a, b): m.mul(a, b) for a in m.elements for b in m.elements})
    y = LeftAction(m, m.elements, {(a, b): m.mul(a, b) for a in m.elements for b in m.elements})
    b = two_sided_bar(x, m, y, 2)
    components = pi0(b)
    assert len(components) == len(m.elements)
    # the classes are exactly the fibres of (x, y) -> x*y
    by_product = {}
    for (xx, _, yy) in b.level(0):
        by_product.setdefault(m.mul(xx, yy), set()).add((xx, (), yy))
    assert set(map(frozenset, by_product.values())) == {frozenset(c) for c in components}


def test_bar_identities_all_small_monoids():
    # all monoid structures on sets of size <= 2, all tiny actions
    import itertools

    for size in (1, 2):
        elements = tuple(str(i) for i in range(size))
        for values in itertools.product(elements, repeat=size * size):
            table = dict(zip(itertools.product(elements, elements), values))
            unit = None
            for e in elements:
                if all(table[(e, a)] == a == table[(a, e)] for a in elements):
                    unit = e
                    break
            if unit is None:
                continue
            try:
                m = FiniteMonoid(elements, unit, table)
            except InvalidInput:
                continue
            b = two_sided_bar(point_action_right(m), m, point_action_left(m), 3)
            assert check_simplicial_identities(b).passed


# --- pi0 and euler ----------------------------------------------------------------

def test_pi0_examples():
    two_points = disjoint_union(standard_simplex(0, 2), standard_simplex(0, 2))
    assert len(pi0(two_points)) == 2
    assert len(pi0(standard_simplex(1, 2))) == 1


def test_euler_examples():
    assert euler_char(standard_simplex(0, 1)) == 1
    assert euler_char(standard_simplex(2, 3)) == 1
    two_points = disjoint_union(standard_simplex(0, 1), standard_simplex(0, 1))
    assert euler_char(two_points) == 2


def test_euler_refuses_truncation():
    with pytest.raises(CapExceeded):
        euler_char(standard_simplex(2, 2))
    with pytest.raises(CapExceeded):
        euler_char(nerve(iso_pair_category(), 3))


# --- subdivision ------------------------------------------------------------------

def test_subdivide_point():
    sub = subdivide(standard_simplex(0, 1))
    assert [len(sub.nondegenerate(k)) for k in range(sub.dim_cap + 1)] == [1, 0]
    assert euler_char(sub) == 1


def test_subdivide_delta1():
    sub = subdivide(standard_simplex(1, 2))
    # path with 3 vertices and 2 nondegenerate edges
    assert len(sub.nondegenerate(0)) == 3
    assert len(sub.nondegenerate(1)) == 2
    assert euler_char(sub) == 1


def test_subdivide_delta2_counts():
    s = standard_simplex(2, 3)
    sub = subdivide(s)
    assert euler_char(s) == 1
    assert len(sub.nondegenerate(0)) == 7
    assert len(sub.nondegenerate(1)) == 12
    assert len(sub.nondegenerate(2)) == 6
    assert euler_char(sub) == 1


def test_subdivide_preserves_pi0_and_euler():
    corpus = [
        standard_simplex(1, 2),
        standard_simplex(2, 3),
        nerve(arrow_category(), 2),
        disjoint_union(standard_simplex(1, 2), standard_simplex(1, 2)),
    ]
    for s in corpus:
        sub = subdivide(s)
        assert check_simplicial_identities(sub).passed
        assert euler_char(sub) == euler_char(s)
        assert len(pi0(sub)) == len(pi0(s))


# --- last vertex map --------------------------------------------------------------

def test_last_vertex_point_is_identity_like():
    s = standard_simplex(0, 1)
    lv = last_vertex_map(s)
    assert lv.apply(0, (0, (0,))) == (0,)


def test_last_vertex_delta1_barycenter():
    s = standard_simplex(1, 2)
    lv = last_vertex_map(s)
    # the barycenter vertex (the nondegenerate edge) maps to vertex 1
    assert lv.apply(0, (1, (0, 1))) == (1,)
    assert lv.apply(0, (0, (0,))) == (0,)
    assert lv.apply(0, (0, (1,))) == (1,)


def test_last_vertex_preserves_pi0():
    for s in [
        standard_simplex(2, 3),
        nerve(arrow_category(), 2),
        disjoint_union(standard_simplex(1, 2), standard_simplex(1, 2)),
    ]:
        sub = subdivide(s)
        lv = last_vertex_map(s, sub)
        comps_src = pi0(sub)
        comps_tgt = pi0(s)
        assert len(comps_src) == len(comps_tgt)
        # the induced map on components is a bijection
        induced = set()
        for comp in comps_src:
            images = {lv.apply(0, v) for v in comp}
            targets = {i for i, tc in enumerate(comps_tgt) if images & set(tc)}
            assert len(targets) == 1
            induced.add(targets.pop())
        assert len(induced) == len(comps_tgt)


# --- bisimplicial and diag --------------------------------------------------------

def test_box_product_and_diag_product():
    x = standard_simplex(1, 2)
    y = nerve(arrow_category(), 2)
    b = box_product(x, y)
    d = diag(b)
    assert all(
        len(d.level(n)) == len(x.level(n)) * len(y.level(n)) for n in range(3)
    )
    assert check_simplicial_identities(d).passed


def test_diag_constant_is_constant():
    pt = standard_simplex(0, 2)
    b = box_product(pt, pt)
    d = diag(b)
    assert all(len(d.level(n)) == 1 for n in range(3))


def test_diag_of_levelwise_product_is_product_of_diags():
    x1, x2 = standard_simplex(1, 2), nerve(arrow_category(), 2)
    y1, y2 = standard_simplex(0, 2), standard_simplex(1, 2)
    bx, by = box_product(x1, y1), box_product(x2, y2)
    # levelwise product bisimplicial set
    levels = {
        key: tuple((a, b) for a in bx.levels[key] for b in by.levels[key])
        for key in bx.levels
    }

    def pair_table(t1, t2, key_levels):
        return {
            (a, b): (t1[a], t2[b]) for (a, b) in key_levels
        }

    hfaces = {
        k: pair_table(bx.hfaces[k], by.hfaces[k], levels[(k[0], k[1])])
        for k in bx.hfaces
    }
    hdegens = {
        k: pair_table(bx.hdegens[k], by.hdegens[k], levels[(k[0], k[1])])
        for k in bx.hdegens
    }
    vfaces = {
        k: pair_table(bx.vfaces[k], by.vfaces[k], levels[(k[0], k[1])])
        for k in bx.vfaces
    }
    vdegens = {
        k: pair_table(bx.vdegens[k], by.vdegens[k], levels[(k[0], k[1])])
        for k in bx.vdegens
    }
    prod = BisimplicialSet(bx.hcap, bx.vcap, levels, hfaces, hdegens, vfaces, vdegens)
    d_prod = diag(prod)
    d1, d2 = diag(bx), diag(by)
    for n in range(d_prod.dim_cap + 1):
        assert len(d_prod.level(n)) == len(d1.level(n)) * len(d2.level(n))


# --- identity checking ------------------------------------------------------------

def test_corrupted_face_table_detected():
    s = standard_simplex(1, 2)
    faces = {k: dict(v) for k, v in s.faces.items()}
    # swap one entry of d_0 at level 1
    faces[(1, 0)][(0, 1)] = (0,)
    with pytest.raises(InvalidInput):
        FiniteSimplicialSet(2, s.levels, faces, s.degeneracies)


# --- categorical subdivision -------------------------------------------------------

def test_category_subdivision_point():
    sub, object_map, morphism_map = category_subdivision(one_object_category())
    assert len(sub.objects) == 1
    assert object_map[("obj", "x")] == "x"


def test_category_subdivision_arrow():
    c = arrow_category()
    sub, object_map, morphism_map = category_subdivision(c)
    assert len(sub.objects) == 3  # a, b, and the chain (f)
    assert object_map[("chain", ("f",))] == "b"
    # the poset looks like a <- span -> b: [a] <= [f] >= [b]
    n_sub = nerve(sub, 2)
    n_c = nerve(c, 2)
    assert len(pi0(n_sub)) == len(pi0(n_c)) == 1
    # comparison arrows: from the source vertex the functor composes the chain
    arrow = (("obj", "a"), ("chain", ("f",)))
    assert morphism_map[arrow] == "f"
    arrow_b = (("obj", "b"), ("chain", ("f",)))
    assert morphism_map[arrow_b] == "id_b"


def test_category_subdivision_functorial_on_poset():
    # a three-object chain poset: x <= y <= z
    cat = poset_category(("x", "y", "z"), lambda a, b: a <= b)
    sub, object_map, morphism_map = category_subdivision(cat)
    for (g, f) in [(b_arrow, a_arrow) for b_arrow in sub.morphisms for a_arrow in sub.morphisms]:
        if g[0] == f[1]:
            composed = sub.compose(g, f)
            lhs = morphism_map[composed]
            rhs = cat.compose(morphism_map[g], morphism_map[f])
            assert lhs == rhs
    n_sub = nerve(sub, 3)
    assert len(pi0(n_sub)) == 1


def test_category_subdivision_rejects_unbounded_chains():
    # a non-identity idempotent generates arbitrarily long identity-free chains
    m = FiniteCategory(
        objects=("x",),
        morphisms=("id_x", "s"),
        src={"id_x": "x", "s": "x"},
        tgt={"id_x": "x", "s": "x"},
        ident={"x": "id_x"},
        comp={
            ("id_x", "id_x"): "id_x",
            ("id_x", "s"): "s",
            ("s", "id_x"): "s",
            ("s", "s"): "s",
        },
    )
    with pytest.raises(CapExceeded):
        category_subdivision(m, max_len=6)
