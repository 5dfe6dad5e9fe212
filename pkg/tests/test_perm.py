import pytest
from hypothesis import given, strategies as st

from operadkit.errors import InvalidInput, SizeMismatch
from operadkit.perm import Permutation, act_tuple, block_sum, block_wreath, pad_fixed


def perm_strategy(max_n=6):
    return st.integers(min_value=0, max_value=max_n).flatmap(
        lambda n: st.permutations(list(range(1, n + 1))).map(lambda p: Permutation(tuple(p)))
    )


def sized_perm(n):
    return st.permutations(list(range(1, n + 1))).map(lambda p: Permutation(tuple(p)))


def test_identity_and_call():
    p = Permutation.identity(4)
    assert p.is_identity()
    assert [p(i) for i in range(1, 5)] == [1, 2, 3, 4]


def test_rejects_non_bijection():
    with pytest.raises(InvalidInput):
        Permutation((1, 1, 3))


def test_compose_order():
    s = Permutation((2, 3, 1))
    t = Permutation((2, 1, 3))
    # (s.compose(t))(i) == s(t(i))
    st_ = s.compose(t)
    assert [st_(i) for i in (1, 2, 3)] == [s(t(i)) for i in (1, 2, 3)]


@given(perm_strategy())
def test_inverse(p):
    assert p.compose(p.inverse()).is_identity()
    assert p.inverse().compose(p).is_identity()


def test_parse_format_roundtrip():
    p = Permutation((3, 1, 2))
    assert Permutation.parse(p.format()) == p
    assert Permutation.parse("[]") == Permutation(())


def test_act_tuple_is_right_action():
    xs = ("a", "b", "c")
    s = Permutation((2, 3, 1))
    t = Permutation((3, 2, 1))
    assert act_tuple(act_tuple(xs, s), t) == act_tuple(xs, s.compose(t))


def test_block_wreath_identity_blocks():
    lam = Permutation.identity(2)
    kappas = [Permutation.identity(1), Permutation.identity(1)]
    assert block_wreath(lam, kappas, [1, 1]).is_identity()
    # all identities over arbitrary block sizes
    lam3 = Permutation.identity(3)
    kappas3 = [Permutation.identity(k) for k in (2, 0, 3)]
    assert block_wreath(lam3, kappas3, [2, 0, 3]).is_identity()


def test_block_wreath_single_block_reduces_to_kappa():
    lam = Permutation.identity(1)
    kappa = Permutation((2, 1))
    assert block_wreath(lam, [kappa], [2]) == kappa


def test_block_wreath_block_rotation():
    # outer swap of a 1-block and a 2-block
    lam = Permutation((2, 1))
    kappas = [Permutation.identity(1), Permutation.identity(2)]
    assert block_wreath(lam, kappas, [1, 2]) == Permutation((2, 3, 1))


def test_block_wreath_size_mismatch():
    with pytest.raises(SizeMismatch):
        block_wreath(Permutation.identity(2), [Permutation.identity(1)], [1, 1])
    with pytest.raises(SizeMismatch):
        block_wreath(Permutation.identity(1), [Permutation.identity(2)], [1])


@given(
    st.integers(min_value=1, max_value=3).flatmap(
        lambda n: st.tuples(
            sized_perm(n),
            st.lists(st.integers(min_value=0, max_value=3), min_size=n, max_size=n),
        )
    ),
    st.data(),
)
def test_block_wreath_concatenation_oracle(shape, data):
    # acting by the wreath on a concatenated list equals permuting blocks by
    # lam and entries by the kappas
    lam, ks = shape
    kappas = [data.draw(sized_perm(k)) for k in ks]
    blocks = [tuple((i + 1, p) for p in range(1, k + 1)) for i, k in enumerate(ks)]
    full = tuple(x for b in blocks for x in b)
    w = block_wreath(lam, kappas, ks)
    expected = tuple(
        x
        for j in range(1, lam.size + 1)
        for x in act_tuple(blocks[lam(j) - 1], kappas[lam(j) - 1])
    )
    assert act_tuple(full, w) == expected


@given(
    st.integers(min_value=1, max_value=3).flatmap(
        lambda n: st.tuples(
            sized_perm(n),
            sized_perm(n),
            st.lists(st.integers(min_value=0, max_value=3), min_size=n, max_size=n),
        )
    ),
    st.data(),
)
def test_block_wreath_functorial(shape, data):
    # (lam o lam') wr (kappa_m o kappa'_{lam^{-1}(m)}) == (lam wr kappa) o (lam' wr kappa')
    lam, lam2, ks = shape
    n = lam.size
    kappas = [data.draw(sized_perm(k)) for k in ks]
    ks2 = [ks[lam(i) - 1] for i in range(1, n + 1)]
    kappas2 = [data.draw(sized_perm(k)) for k in ks2]
    w1 = block_wreath(lam, kappas, ks)
    w2 = block_wreath(lam2, kappas2, ks2)
    inv = lam.inverse()
    mus = [kappas[m - 1].compose(kappas2[inv(m) - 1]) for m in range(1, n + 1)]
    assert block_wreath(lam.compose(lam2), mus, ks) == w1.compose(w2)


def test_pad_and_block_sum():
    p = Permutation((2, 1))
    assert pad_fixed(p, 1) == Permutation((1, 3, 2))
    assert pad_fixed(p, 0, 1) == Permutation((2, 1, 3))
    assert block_sum([p, Permutation.identity(1)]) == Permutation((2, 1, 3))
