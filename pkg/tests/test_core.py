import pytest
from hypothesis import given, strategies as st

from rdc.core import (
    EMPTY,
    HypothesisClass,
    add_pair,
    make_pairset,
    possible_responses,
    version_space,
)

from conftest import A, B, R1, R2


def test_version_space_examples(three_h):
    assert version_space(three_h, EMPTY) == {0, 1, 2}
    assert version_space(three_h, make_pairset([(A, R1)])) == {0, 1}
    assert version_space(three_h, make_pairset([(A, R2), (B, R2)])) == frozenset()


def test_possible_responses_examples(three_h):
    assert possible_responses(A, EMPTY, three_h) == {R1, R2}
    assert possible_responses(B, make_pairset([(A, R1)]), three_h) == {R1, R2}
    assert possible_responses(A, make_pairset([(A, R1), (B, R2)]), three_h) == {R1}
    assert possible_responses(A, make_pairset([(A, R2), (B, R2)]), three_h) == frozenset()


def test_pairset_is_canonical():
    S = make_pairset([(2, 0), (0, 1), (2, 0), (1, 1)])
    assert S == ((0, 1), (1, 1), (2, 0))
    assert add_pair(S, (1, 0)) == ((0, 1), (1, 0), (1, 1), (2, 0))
    assert add_pair(S, (0, 1)) is S
    assert hash(make_pairset([(1, 1), (0, 1)])) == hash(make_pairset([(0, 1), (1, 1)]))


def test_hypothesis_class_validation():
    with pytest.raises(ValueError):
        HypothesisClass.from_vectors([(0, 1), (0, 1)])
    with pytest.raises(ValueError):
        HypothesisClass(((0, 2),), 2, 2)
    with pytest.raises(ValueError):
        HypothesisClass((), 2, 2)


hyp_classes = st.integers(2, 4).flatmap(
    lambda nx: st.integers(2, 3).flatmap(
        lambda ny: st.sets(st.tuples(*[st.integers(0, ny - 1)] * nx), min_size=1, max_size=8).map(
            lambda hs: HypothesisClass(tuple(sorted(hs)), nx, ny)
        )
    )
)


@given(hyp_classes, st.data())
def test_version_space_matches_filter_and_is_antimonotone(H, data):
    pairs = [(x, y) for x in range(H.num_actions) for y in range(H.num_responses)]
    S = make_pairset(data.draw(st.lists(st.sampled_from(pairs), max_size=4)))
    S2 = make_pairset(S + tuple(data.draw(st.lists(st.sampled_from(pairs), max_size=3))))
    brute = {i for i, h in enumerate(H.hypotheses) if all(h[x] == y for x, y in S)}
    assert version_space(H, S) == brute
    assert version_space(H, S2) <= version_space(H, S)
    for x in range(H.num_actions):
        assert possible_responses(x, S, H) == {H[i][x] for i in brute}
