import pytest
from hypothesis import given, settings, strategies as st

from neg4lat.lattice import DimensionError, DomainError, LatticeClass, k_dot, pair, square
from neg4lat.weyl import (
    CREMONA,
    DISTINCT_WITHIN_BOUND,
    EQUIVALENT,
    PAIR,
    Flip,
    Negate,
    Reflect,
    Reflection,
    Swap,
    apply_word,
    distinct_permutations,
    enumerate_exceptional,
    enumerate_reduced,
    is_exceptional,
    normalize_with_word,
    orbit_equivalent,
    reduce,
    reflect,
    simplify_word,
    step_from_json,
)

from oracles import exceptional_box

X4 = LatticeClass(0, (1, 1, 1, 1))
Y4 = LatticeClass(3, (2, 2, 2, 1))


def test_cremona_example():
    assert reflect(X4, Reflection(CREMONA, (0, 1, 2))) == LatticeClass(-3, (-2, -2, -2, 1))


def test_reflection_negates_root():
    r = Reflection(PAIR, (0, 1))
    root = r.root(4)
    assert root == LatticeClass(1, (1, 1, 0, 0))
    assert reflect(root, r) == -root
    c = Reflection(CREMONA, (1, 2, 3))
    assert reflect(c.root(4), c) == -c.root(4)


@pytest.mark.parametrize("kind,idx", [(CREMONA, (0, 1)), (PAIR, (0, 1, 2)), (CREMONA, (0, 0, 1))])
def test_bad_reflections(kind, idx):
    with pytest.raises(IndexError):
        Reflection(kind, idx)


def test_reflection_index_out_of_range():
    with pytest.raises(IndexError):
        reflect(X4, Reflection(CREMONA, (1, 2, 4)))


def test_pair_kind_does_not_preserve_k_dot():
    r = Reflection(PAIR, (0, 1))
    x = LatticeClass.exceptional(0, 2)
    assert k_dot(reflect(x, r)) != k_dot(x)


def test_reduce_examples():
    # descent: (5;4,2,2,2,1) -> (2;2,1,1,1,1) -> (0;1,1,1,1,0); not a fixed point
    assert reduce(LatticeClass(5, (4, 2, 2, 2, 1))) == LatticeClass(0, (1, 1, 1, 1, 0))
    assert reduce(LatticeClass(0, (-1,))) == LatticeClass(0, (1,))
    assert reduce(LatticeClass(2, (2, 1, 1, 1, 1))) == LatticeClass(0, (1, 1, 1, 1, 0))


def test_orbit_trivial_case():
    v = orbit_equivalent(Y4, Y4)
    assert v.status == EQUIVALENT and v.witness == ()


def test_orbit_with_global_sign_small_cap():
    v = orbit_equivalent(X4, Y4, a_cap=6, allow_global_sign=True)
    assert v.equivalent
    assert apply_word(X4, v.witness) == Y4
    assert any(isinstance(s, Reflect) for s in v.witness)


def test_orbit_without_global_sign():
    # a = 0 makes x and -x trivially equivalent, so no sign flip is needed
    v = orbit_equivalent(X4, Y4, a_cap=12)
    assert v.status == EQUIVALENT
    assert not any(isinstance(s, Negate) for s in v.witness)
    assert apply_word(X4, v.witness) == Y4


def test_orbit_distinct_within_bound():
    v = orbit_equivalent(LatticeClass(0, (2, 0)), LatticeClass(1, (1, 1)), a_cap=5)
    assert v.status == DISTINCT_WITHIN_BOUND and v.witness is None


def test_orbit_errors():
    with pytest.raises(DimensionError):
        orbit_equivalent(X4, LatticeClass(0, (2,)))
    with pytest.raises(DomainError):
        orbit_equivalent(X4, Y4, a_cap=2)


def test_orbit_symmetric_and_square_preserving():
    classes = [LatticeClass(1, (2, 1, 0, 0, 0)), LatticeClass(2, (2, 2, 1, 1, 0)),
               LatticeClass(3, (3, 2, 1, 1, 1)), LatticeClass(0, (2, 0, 0, 0, 0))]
    for x in classes:
        for y in classes:
            if square(x) != square(y):
                continue
            fwd, back = orbit_equivalent(x, y, 10), orbit_equivalent(y, x, 10)
            assert fwd.status == back.status
            if fwd.equivalent:
                assert apply_word(x, fwd.witness) == y


def test_witness_json_round_trip():
    v = orbit_equivalent(X4, Y4, 12, True)
    word = [step_from_json(s) for s in v.to_json()["witness"]]
    assert apply_word(X4, word) == Y4


def test_simplify_word_keeps_action():
    word = [Flip(0), Flip(1), Flip(0), Swap(1, 2), Swap(2, 1), Flip(2)]
    x = LatticeClass(1, (3, -2, 1))
    assert apply_word(x, simplify_word(word)) == apply_word(x, word)
    assert simplify_word(word) == [Flip(1), Flip(2)]


def test_enumerate_reduced_examples():
    assert LatticeClass(0, (2,)) in enumerate_reduced(1, -4, 3)
    assert enumerate_reduced(0, -4, 10) == []
    assert LatticeClass(6, (2,) * 10) in enumerate_reduced(10, -4, 6)
    with pytest.raises(DomainError):
        enumerate_reduced(3, -4, -1)


def test_is_exceptional_examples():
    assert is_exceptional(LatticeClass.exceptional(0, 1))
    assert is_exceptional(LatticeClass(2, (1,) * 5))
    assert is_exceptional(LatticeClass(3, (2, 1, 1, 1, 1, 1, 1)))
    assert not is_exceptional(LatticeClass(0, (1,)))


def test_enumerate_exceptional_examples():
    cat = enumerate_exceptional(5, 2)
    assert len(cat) == 16
    by_a = [sum(1 for e in cat if e.a == a) for a in range(3)]
    assert by_a == [5, 10, 1]
    assert enumerate_exceptional(0, 3) == []
    assert LatticeClass(3, (2, 1, 1, 1, 1, 1, 1)) in enumerate_exceptional(7, 3)


@pytest.mark.parametrize("k", range(0, 8))
def test_enumerate_exceptional_matches_box(k):
    got = sorted((e.a, e.b) for e in enumerate_exceptional(k, 4))
    assert got == exceptional_box(k, 4)


def test_distinct_permutations():
    assert sorted(distinct_permutations((1, 1, 2))) == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def _root_reflections(k):
    return st.one_of(
        st.lists(st.integers(0, k - 1), min_size=3, max_size=3, unique=True)
        .map(lambda ix: Reflection(CREMONA, tuple(ix))),
    ) if k >= 3 else st.just(Reflection(PAIR, (0, 1)))


def _cls(k):
    return st.builds(LatticeClass, st.integers(-15, 15), st.tuples(*[st.integers(-15, 15)] * k))


@settings(max_examples=300)
@given(st.integers(2, 10).flatmap(lambda k: st.tuples(_cls(k), _cls(k), _root_reflections(k))))
def test_reflections_preserve_pairing(data):
    x, y, r = data
    assert pair(reflect(x, r), reflect(y, r)) == pair(x, y)
    assert reflect(reflect(x, r), r) == x
    if r.kind == CREMONA:
        assert k_dot(reflect(x, r)) == k_dot(x)


@given(st.integers(0, 10).flatmap(_cls))
def test_normalize_with_word_replays(x):
    n, word = normalize_with_word(x)
    assert apply_word(x, word) == n


@settings(max_examples=200)
@given(st.integers(0, 10).flatmap(_cls))
def test_reduce_idempotent_and_square_preserving(x):
    r = reduce(x)
    assert reduce(r) == r
    assert square(r) == square(x)
