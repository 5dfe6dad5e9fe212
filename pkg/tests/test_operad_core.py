import pytest

from operadkit.errors import ArityOverflow, InvalidInput, SizeMismatch
from operadkit.perm import Permutation
from operadkit.setoperad import (
    SetOperad,
    assoc_operad,
    check_operad_axioms,
    comm_operad,
    eval_tree,
    free_pointed_operad,
)
from operadkit.trees import (
    GeneratorSignature,
    Internal,
    Leaf,
    OperadTree,
    act_tree,
    graft,
    leaf_tree,
    parse_sexpr,
)


def gen(name, arity, color="single"):
    return GeneratorSignature(name, arity, color)


def tree(node):
    return OperadTree(node)


ALPHA = gen("alpha", 2)
BETA = gen("beta", 1)


def test_tree_validation():
    with pytest.raises(InvalidInput):
        tree(Internal(ALPHA, (Leaf(1), Leaf(3))))  # slots not 1..2
    with pytest.raises(InvalidInput):
        Internal(ALPHA, (Leaf(1),))  # arity mismatch


def test_graft_unit_cases():
    t = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    assert graft(leaf_tree(), [t]) == t
    assert graft(t, [leaf_tree(), leaf_tree()]) == t


def test_graft_direct_substitution():
    outer = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    inner = tree(Internal(BETA, (Leaf(1),)))
    result = graft(outer, [inner, leaf_tree()])
    assert result == tree(Internal(ALPHA, (Internal(BETA, (Leaf(1),)), Leaf(2))))


def test_graft_renumbers_by_blocks():
    outer = tree(Internal(ALPHA, (Leaf(2), Leaf(1))))
    two = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    result = graft(outer, [two, leaf_tree()])
    # slot 1 of outer receives block 1..2, slot 2 receives block 3
    assert result == tree(Internal(ALPHA, (Leaf(3), Internal(ALPHA, (Leaf(1), Leaf(2))))))


def test_graft_arity_mismatch():
    outer = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    with pytest.raises(SizeMismatch):
        graft(outer, [leaf_tree()])


def test_graft_associativity():
    outer = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    mid = [tree(Internal(BETA, (Leaf(1),))), tree(Internal(ALPHA, (Leaf(2), Leaf(1))))]
    inner = [leaf_tree(), tree(Internal(BETA, (Leaf(1),))), leaf_tree()]
    staged = graft(graft(outer, mid), inner)
    grouped = graft(outer, [graft(mid[0], inner[:1]), graft(mid[1], inner[1:])])
    assert staged == grouped


def test_act_tree_identity_and_swap():
    t = tree(Internal(ALPHA, (Leaf(1), Leaf(2))))
    assert act_tree(t, Permutation.identity(2)) == t
    swapped = act_tree(t, Permutation((2, 1)))
    assert swapped == tree(Internal(ALPHA, (Leaf(2), Leaf(1))))


def test_act_tree_right_action_law():
    t = tree(Internal(ALPHA, (Internal(BETA, (Leaf(2),)), Leaf(1))))
    s = Permutation((2, 1))
    u = Permutation((2, 1))
    assert act_tree(act_tree(t, s), u) == act_tree(t, s.compose(u))


def test_sexpr_roundtrip():
    sigs = {"alpha": ALPHA, "beta": BETA}
    t = parse_sexpr("(alpha (beta 1) 2)", lambda h: sigs[h])
    assert t == tree(Internal(ALPHA, (Internal(BETA, (Leaf(1),)), Leaf(2))))
    assert t.to_sexpr() == "(alpha (beta 1) 2)"


# --- tabulated operads ------------------------------------------------------

def test_comm_is_terminal():
    comm = comm_operad(4)
    assert comm.compose("*", ["*", "*"], 2, [1, 1]) == "*"
    t = tree(Internal(gen("*", 2), (Leaf(1), Internal(gen("*", 2), (Leaf(2), Leaf(3))))))
    assert eval_tree(comm, t) == "*"
    # the shared point makes bare-element arity lookups ambiguous by design
    with pytest.raises(InvalidInput):
        comm.compose("*", ["*", "*"])


def test_assoc_compose_nested_interval_semantics():
    assoc = assoc_operad(4)
    c = Permutation((2, 1))
    d1 = Permutation((1, 2))
    d2 = Permutation((2, 1))
    # block 1 sits in outer slot 2 (ranks 3,4), block 2 in outer slot 1
    assert assoc.compose(c, [d1, d2]) == Permutation((3, 4, 2, 1))
    # oracle: rank of sub-slot d_i(j) within outer slot c(i)
    def rank_oracle(outer, inners):
        ns = [d.size for d in inners]
        images = []
        for i in range(1, outer.size + 1):
            below = sum(ns[a - 1] for a in range(1, outer.size + 1) if outer(a) < outer(i))
            images.extend(below + inners[i - 1](j) for j in range(1, ns[i - 1] + 1))
        return Permutation(tuple(images))

    import itertools, random as _random

    rng = _random.Random(7)
    for _ in range(50):
        k = rng.randint(1, 3)
        outer = Permutation(tuple(rng.sample(range(1, k + 1), k)))
        inners = []
        total = 0
        for _ in range(k):
            n = rng.randint(0, 4 - total) if total < 4 else 0
            total += n
            inners.append(Permutation(tuple(rng.sample(range(1, n + 1), n))))
        assert assoc.compose(outer, inners) == rank_oracle(outer, inners)


def test_eval_tree_identity_permutations():
    assoc = assoc_operad(4)
    id2 = Permutation.identity(2)
    t = tree(Internal(gen(id2, 2), (Internal(gen(id2, 2), (Leaf(1), Leaf(2))), Leaf(3))))
    assert eval_tree(assoc, t) == Permutation.identity(3)


def test_eval_tree_respects_leaf_labels():
    assoc = assoc_operad(4)
    id2 = Permutation.identity(2)
    t = tree(Internal(gen(id2, 2), (Leaf(2), Leaf(1))))
    assert eval_tree(assoc, t) == Permutation((2, 1))


def test_eval_tree_unit_leaf():
    assoc = assoc_operad(2)
    assert eval_tree(assoc, leaf_tree()) == assoc.unit


def test_eval_compatible_with_graft():
    assoc = assoc_operad(4)
    id2 = Permutation.identity(2)
    swap = Permutation((2, 1))
    outer = tree(Internal(gen(swap, 2), (Leaf(1), Leaf(2))))
    inners = [
        tree(Internal(gen(id2, 2), (Leaf(2), Leaf(1)))),
        tree(Internal(gen(swap, 2), (Leaf(1), Leaf(2)))),
    ]
    lhs = eval_tree(assoc, graft(outer, inners))
    rhs = assoc.compose(
        eval_tree(assoc, outer), [eval_tree(assoc, t) for t in inners]
    )
    assert lhs == rhs


def test_eval_untabulated_generator():
    assoc = assoc_operad(2)
    with pytest.raises(InvalidInput):
        eval_tree(assoc, tree(Internal(gen("mystery", 1), (Leaf(1),))))


def test_compose_overflow():
    assoc = assoc_operad(2)
    id2 = Permutation.identity(2)
    with pytest.raises(ArityOverflow):
        assoc.compose(id2, [id2, id2])


def test_axioms_comm_assoc_pass():
    assert check_operad_axioms(comm_operad(4), budget=20000).passed
    report = check_operad_axioms(assoc_operad(4), budget=4000)
    assert report.passed


def test_axioms_corrupted_compose_fails_with_witness():
    assoc = assoc_operad(3)

    def bad_compose(outer, inners):
        good = assoc.compose_fn(outer, inners)
        if good.size == 3:
            return good.compose(Permutation((2, 1, 3)))
        return good

    broken = SetOperad(
        name="assoc-broken",
        arity_cap=3,
        carriers=assoc.carriers,
        unit=assoc.unit,
        compose_fn=bad_compose,
        act_fn=assoc.act_fn,
    )
    report = check_operad_axioms(broken, budget=3000)
    assert not report.passed
    failing = {c.name for c in report.checks if not c.passed}
    assert "associativity" in failing
    assoc_check = next(c for c in report.checks if c.name == "associativity")
    assert assoc_check.witness is not None


def test_free_pointed_operad_small_carriers():
    free = free_pointed_operad({"mu": 2}, arity_cap=2, size_cap=2)
    assert free.elements(0) == ("*",)
    # arity 1, size <= 2: slot, mu(slot,*), mu(*,slot), and four size-2 nestings
    assert len(free.elements(1)) == 7
    unit = free.unit
    mu_x_star = ("op", "mu", (("slot", 1), "*"))
    assert free.compose(mu_x_star, [unit]) == mu_x_star
    # slotless composites collapse to the point
    assert free.compose(mu_x_star, [free.elements(0)[0]]) == "*"


def test_free_pointed_axioms_sampled():
    free = free_pointed_operad({"mu": 2}, arity_cap=2, size_cap=1)
    report = check_operad_axioms(free, budget=2000)
    assert report.passed
